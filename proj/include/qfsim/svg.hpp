/*
 * svg.hpp - minimal deterministic SVG plots (heatmap, scatter, curves).
 *
 * All coordinates are printed with a fixed number of decimals so identical
 * input gives identical bytes.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qfsim/density.hpp"

namespace qfsim::svg {

struct Frame {
    double width = 480, height = 360;
    double left = 60, right = 20, top = 30, bottom = 45;
    std::string title, xlabel, ylabel;
};

namespace detail {

inline std::string num(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s(buf);
    return s == "-0.00" ? "0.00" : s;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string open(const Frame& f) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width, 0) + "\" height=\"" + num(f.height, 0) +
         "\" viewBox=\"0 0 " + num(f.width, 0) + " " + num(f.height, 0) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s;
}

inline std::string axes(const Frame& f, double x0, double x1, double y0, double y1) {
    const double L = f.left, R = f.width - f.right, T = f.top, B = f.height - f.bottom;
    std::string s;
    s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    s += "<path d=\"M" + num(L) + " " + num(T) + " L" + num(L) + " " + num(B) + " L" + num(R) + " " + num(B) + "\"/>\n";
    s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    s += "<text x=\"" + num(L) + "\" y=\"" + num(B + 15) + "\" text-anchor=\"start\">" + num(x0, 4) + "</text>\n";
    s += "<text x=\"" + num(R) + "\" y=\"" + num(B + 15) + "\" text-anchor=\"end\">" + num(x1, 4) + "</text>\n";
    s += "<text x=\"" + num(L - 4) + "\" y=\"" + num(B) + "\" text-anchor=\"end\">" + num(y0, 4) + "</text>\n";
    s += "<text x=\"" + num(L - 4) + "\" y=\"" + num(T + 10) + "\" text-anchor=\"end\">" + num(y1, 4) + "</text>\n";
    s += "<text x=\"" + num(0.5 * (L + R)) + "\" y=\"" + num(f.height - 8) + "\" text-anchor=\"middle\">" +
         escape(f.xlabel) + "</text>\n";
    s += "<text x=\"14\" y=\"" + num(0.5 * (T + B)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         num(0.5 * (T + B)) + ")\">" + escape(f.ylabel) + "</text>\n";
    s += "<text x=\"" + num(0.5 * (L + R)) + "\" y=\"18\" text-anchor=\"middle\">" + escape(f.title) + "</text>\n";
    s += "</g>\n";
    return s;
}

// white -> dark blue
inline std::string shade(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255 * (1 - t)));
    const int g = static_cast<int>(std::lround(255 * (1 - 0.8 * t)));
    const int b = static_cast<int>(std::lround(255 - 100 * t));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace detail

/// Heatmap with E on the horizontal axis and x (bin index, possibly log) vertical.
inline std::string heatmap(const density::Histogram2D& h, Frame f) {
    using detail::num;
    const auto& b = h.bins;
    if (f.xlabel.empty()) f.xlabel = "E";
    if (f.ylabel.empty()) f.ylabel = b.log_x ? "x (log scale)" : "x";
    std::string s = detail::open(f);
    const double L = f.left, R = f.width - f.right, T = f.top, B = f.height - f.bottom;
    const double cw = (R - L) / static_cast<double>(b.nE), ch = (B - T) / static_cast<double>(b.nx);
    double peak = 0.0;
    for (double m : h.mass) peak = std::max(peak, m);
    s += "<g stroke=\"none\">\n";
    for (std::size_t iE = 0; iE < b.nE; ++iE)
        for (std::size_t ix = 0; ix < b.nx; ++ix) {
            const double m = h.at(iE, ix);
            if (!(m > 0) || !(peak > 0)) continue;
            s += "<rect x=\"" + num(L + cw * static_cast<double>(iE)) + "\" y=\"" +
                 num(B - ch * static_cast<double>(ix + 1)) + "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
                 "\" fill=\"" + detail::shade(m / peak) + "\"/>\n";
        }
    s += "</g>\n";
    s += detail::axes(f, b.E_lo, b.E_hi, b.x_lo, b.x_hi);
    s += "</svg>\n";
    return s;
}

struct Series {
    std::vector<double> x, y;
    std::string color = "#1f4e9c";
    bool points = false; // dots instead of a polyline
};

/// Curves or scatter on shared linear axes.
inline std::string plot(const std::vector<Series>& series, Frame f) {
    using detail::num;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    for (const auto& sr : series)
        for (std::size_t i = 0; i < std::min(sr.x.size(), sr.y.size()); ++i) {
            if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) continue;
            if (!any) {
                x0 = x1 = sr.x[i];
                y0 = y1 = sr.y[i];
                any = true;
            }
            x0 = std::min(x0, sr.x[i]);
            x1 = std::max(x1, sr.x[i]);
            y0 = std::min(y0, sr.y[i]);
            y1 = std::max(y1, sr.y[i]);
        }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double L = f.left, R = f.width - f.right, T = f.top, B = f.height - f.bottom;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (R - L); };
    auto py = [&](double v) { return B - (v - y0) / (y1 - y0) * (B - T); };
    std::string s = detail::open(f);
    for (const auto& sr : series) {
        const std::size_t n = std::min(sr.x.size(), sr.y.size());
        if (sr.points) {
            s += "<g fill=\"" + sr.color + "\" stroke=\"none\">\n";
            for (std::size_t i = 0; i < n; ++i)
                if (std::isfinite(sr.x[i]) && std::isfinite(sr.y[i]))
                    s += "<circle cx=\"" + num(px(sr.x[i])) + "\" cy=\"" + num(py(sr.y[i])) + "\" r=\"1.5\"/>\n";
            s += "</g>\n";
        } else if (n > 0) {
            std::string d;
            bool pen = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) {
                    pen = false;
                    continue;
                }
                d += (pen ? " L" : (d.empty() ? "M" : " M")) + num(px(sr.x[i])) + " " + num(py(sr.y[i]));
                pen = true;
            }
            s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + sr.color + "\" stroke-width=\"1.2\"/>\n";
        }
    }
    s += detail::axes(f, x0, x1, y0, y1);
    s += "</svg>\n";
    return s;
}

} // namespace qfsim::svg
