/*
 * qfsim_cli.hpp - command-line front end (subcommand router).
 *
 * run() never calls exit(); it returns the process exit code so the same
 * entry point is used by the executable and by the tests.
 */
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfsim/density.hpp"
#include "qfsim/ensemble.hpp"
#include "qfsim/primes.hpp"
#include "qfsim/quantum_sieve.hpp"
#include "qfsim/spectral.hpp"
#include "qfsim/svg.hpp"
#include "qfsim/trap.hpp"
#include "qfsim/zeta.hpp"

#ifndef QFSIM_VERSION
#define QFSIM_VERSION "0.0.0"
#endif

namespace qfsim::cli {

using json = nlohmann::ordered_json;
using u64 = std::uint64_t;

namespace detail {

inline std::string fmt(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& body, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << body;
        return;
    }
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path);
    f << body;
}

inline json manifest(const std::string& command, json inputs, json tolerances, json outputs) {
    json m;
    m["tool"] = "qfsim";
    m["version"] = QFSIM_VERSION;
    m["command"] = command;
    m["inputs"] = std::move(inputs);
    m["tolerances"] = std::move(tolerances);
    m["outputs"] = std::move(outputs);
    return m;
}

inline void write_manifest(const std::string& path, const json& m, std::ostream& out) {
    if (path.empty() || path == "-") return;
    write_file(path, m.dump(2) + "\n", out);
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number in list: " + item);
        }
    }
    return v;
}

inline std::string density_csv(const density::Histogram2D& h) {
    std::string s = "bin_E_lo,bin_E_hi,bin_x_lo,bin_x_hi,mass\n";
    for (std::size_t iE = 0; iE < h.bins.nE; ++iE)
        for (std::size_t ix = 0; ix < h.bins.nx; ++ix)
            s += fmt(h.bins.E_edge(iE)) + "," + fmt(h.bins.E_edge(iE + 1)) + "," + fmt(h.bins.x_edge(ix)) + "," +
                 fmt(h.bins.x_edge(ix + 1)) + "," + fmt(h.at(iE, ix)) + "\n";
    return s;
}

struct DensityTable {
    std::vector<std::array<double, 4>> edges;
    std::vector<double> mass;
};

inline DensityTable read_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    DensityTable t;
    std::string line;
    if (!std::getline(in, line) || line.rfind("bin_E_lo", 0) != 0) throw DomainError(path + ": not a density CSV");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto v = parse_list(line);
        if (v.size() != 5) throw DomainError(path + ": expected 5 columns");
        t.edges.push_back({v[0], v[1], v[2], v[3]});
        t.mass.push_back(v[4]);
    }
    if (t.mass.empty()) throw DomainError(path + ": no bins");
    return t;
}

inline json comparison_json(const density::Comparison& c) {
    json j;
    j["rank_correlation"] = c.rank_correlation;
    j["jensen_shannon"] = c.jensen_shannon;
    j["overlap"] = c.overlap;
    return j;
}

inline json gauge_json(const sieve::GaugeConfig& g) {
    json j;
    j["N"] = g.N;
    j["G"] = g.G;
    j["nu"] = g.nu;
    j["B_G"] = g.B_G;
    j["q_G"] = g.q_G;
    j["chi"] = g.chi;
    j["lambda"] = g.lambda;
    j["k_m"] = g.k_m;
    j["E_max"] = g.E_max;
    return j;
}

/// Appends the --config object as trailing flags; with the take-last policy
/// they override values given on the command line.
inline std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, val] : cfg.items()) {
        const std::string flag = "--" + key;
        if (val.is_boolean()) {
            if (val.get<bool>()) args.push_back(flag);
        } else if (val.is_string()) {
            args.push_back(flag);
            args.push_back(val.get<std::string>());
        } else if (val.is_number()) {
            args.push_back(flag);
            args.push_back(val.is_number_integer() ? std::to_string(val.get<long long>()) : fmt(val.get<double>()));
        } else if (val.is_array()) {
            std::string joined;
            for (const auto& x : val) joined += (joined.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
            args.push_back(flag);
            args.push_back(joined);
        } else {
            throw UsageError("config key " + key + ": unsupported value");
        }
    }
    return args;
}

} // namespace detail

struct Globals {
    unsigned threads = 0;
    std::string zeros;
    bool verbose = false;
};

inline const zeta::ZetaZerosTable& load_zeros(const Globals& g, zeta::ZetaZerosTable& storage) {
    if (g.zeros.empty()) return zeta::ZetaZerosTable::bundled();
    storage = zeta::ZetaZerosTable::load(g.zeros);
    return storage;
}

inline std::string zeros_label(const Globals& g) { return g.zeros.empty() ? zeta::ZetaZerosTable::default_path() : g.zeros; }

// ---------------------------------------------------------------------------
// Figure recipes, shared with the demos.
// ---------------------------------------------------------------------------

struct Fig2Options {
    u64 j = 10000;
    double N = 0.0; // 0: p_j p_{j+1}
    int T = 100;
    u64 seed = 42;
    u64 samples = 0;
    std::string G_list = "0,0.1,0.2,0.3,0.4,0.5";
    std::size_t nE = 25, nx = 25;
    int per_period = 32;
};

struct Fig2Result {
    density::Histogram2D quantum, classical;
    density::Comparison metrics;
    sieve::MonteCarloResult mc;
    double N = 0.0;
    std::size_t classical_entries = 0;
};

inline Fig2Result run_fig2(const Fig2Options& o, const zeta::ZetaZerosTable& zeros, unsigned threads) {
    primes::PrimeEngine engine(u64{1} << 24, threads);
    Fig2Result r;
    r.N = o.N > 0 ? o.N : static_cast<double>(engine.nth_prime(o.j)) * static_cast<double>(engine.nth_prime(o.j + 1));
    const auto G = detail::parse_list(o.G_list);
    if (G.empty()) throw UsageError("fig2: empty gauge list");
    double G_min = G[0];
    for (double g : G) G_min = std::min(G_min, g);
    const auto g0 = sieve::make_gauge(r.N, G_min);
    const double L = std::log(std::sqrt(r.N));

    density::Binning b;
    b.E_lo = 1.0;
    b.E_hi = sieve::kEmax;
    b.nE = o.nE;
    b.nx = o.nx;
    b.x_lo = static_cast<double>(g0.B_G);
    b.x_hi = std::sqrt(r.N) + L;
    b.log_x = true;

    zeta::ExplicitFormula ef(zeros, o.T);
    const double x_lo = 0.9 * b.x_lo;
    const double Nmax = std::pow(std::sqrt(r.N) + L, 2);
    ef.tabulate(x_lo, Nmax / x_lo, threads, o.per_period);

    sieve::MonteCarloConfig mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    mc.G_list = G;
    mc.threads = threads;
    r.mc = sieve::montecarlo_spectrum(r.N, static_cast<double>(o.j), ef, mc);
    r.quantum = density::quantum_density(r.mc, b);
    r.classical = density::classical_density(engine, o.j, b);
    r.classical_entries = r.classical.count;
    r.metrics = density::compare_densities(r.quantum, r.classical);
    return r;
}

struct Fig3Curve {
    std::vector<double> q, exact, trap;
};

/// q Psi^2 and q psi^2 on a grid, each scaled to unit maximum.
inline Fig3Curve fig3_curve(double E, double q_lo, double q_hi, std::size_t n) {
    Fig3Curve c;
    spectral::Wavefunction w(E);
    trap::TrapWavefunction t(E);
    double mx = 0, mt = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double q = q_lo + (q_hi - q_lo) * static_cast<double>(i) / static_cast<double>(n);
        const double re = w.real_part(q) / q;
        c.q.push_back(q);
        c.exact.push_back(q * re * re);
        c.trap.push_back(t.density(q));
        mx = std::max(mx, c.exact.back());
        mt = std::max(mt, c.trap.back());
    }
    for (std::size_t i = 0; i < c.q.size(); ++i) {
        if (mx > 0) c.exact[i] /= mx;
        if (mt > 0) c.trap[i] /= mt;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Router
// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
    auto fail = [&](const char* kind, int code, const std::string& msg) {
        json e;
        e["error"]["kind"] = kind;
        e["error"]["message"] = msg;
        e["error"]["exit_code"] = code;
        err << e.dump() << "\n";
        return code;
    };

    std::vector<std::string> args;
    try {
        args = detail::apply_config(raw);
    } catch (const Error& e) {
        return fail(e.kind(), e.exit_code(), e.what());
    }

    CLI::App app{"qfsim: factorization-ensemble simulator toolkit"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(QFSIM_VERSION));
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--zeros", g.zeros, "zeta zeros file (default $QFSIM_ZEROS or bundled)");
    app.add_flag("--verbose", g.verbose, "progress on stderr");
    app.add_option("--config", "JSON object of flag overrides");

    std::function<void()> action;

    // primes ----------------------------------------------------------------
    auto* primes_cmd = app.add_subcommand("primes", "prime counting and enumeration");
    struct {
        std::optional<u64> pi, nth;
        std::vector<u64> range;
        bool list = false;
        u64 table = u64{1} << 24;
    } po;
    primes_cmd->add_option("--pi", po.pi, "pi(x)");
    primes_cmd->add_option("--nth", po.nth, "n-th prime");
    primes_cmd->add_option("--range", po.range, "count primes in [lo, hi]")->expected(2);
    primes_cmd->add_flag("--list", po.list, "list the primes of --range");
    primes_cmd->add_option("--table-limit", po.table, "sieve table limit");
    primes_cmd->callback([&] {
        action = [&] {
            primes::PrimeEngine engine(po.table, g.threads);
            json j;
            if (po.pi) {
                const auto c = engine.pi(*po.pi);
                j["pi"] = {{"x", c.x}, {"count", c.count},
                           {"method", c.method == primes::CountMethod::sieve ? "sieve" : "combinatorial"}};
            }
            if (po.nth) j["nth"] = {{"n", *po.nth}, {"prime", engine.nth_prime(*po.nth)}};
            if (po.range.size() == 2) {
                j["range"] = {{"lo", po.range[0]}, {"hi", po.range[1]},
                              {"count", engine.count_range(po.range[0], po.range[1])}};
                if (po.list) j["range"]["primes"] = engine.primes_in(po.range[0], po.range[1]);
            }
            if (j.empty()) throw UsageError("primes: give --pi, --nth or --range");
            out << j.dump(2) << "\n";
        };
    });

    // ensemble --------------------------------------------------------------
    auto* ens_cmd = app.add_subcommand("ensemble", "enumerate the factorization ensemble F(j)");
    struct {
        u64 j = 0;
        std::optional<u64> x_min, x_max, near;
        std::string out;
        int digits = 12;
    } eo;
    ens_cmd->add_option("--j", eo.j, "prime index of sqrt N")->required();
    ens_cmd->add_option("--x-min", eo.x_min);
    ens_cmd->add_option("--x-max", eo.x_max);
    ens_cmd->add_option("--near", eo.near, "keep N with |sqrt N - sqrt c| < log sqrt c");
    ens_cmd->add_option("--out", eo.out, "CSV path (default stdout)");
    ens_cmd->add_option("--digits", eo.digits, "decimal digits of E");
    ens_cmd->callback([&] {
        action = [&] {
            primes::PrimeEngine engine(u64{1} << 24, g.threads);
            ensemble::EnsembleQuery q{eo.j, eo.x_min, eo.x_max, eo.near};
            std::string s = "N,x,y,j,pi_x,pi_y,E,E_exact,q,p\n";
            for (const auto& e : ensemble::enumerate_ensemble(engine, q))
                s += std::to_string(e.N) + "," + std::to_string(e.x) + "," + std::to_string(e.y) + "," +
                     std::to_string(e.j) + "," + std::to_string(e.pix) + "," + std::to_string(e.piy) + "," +
                     e.E.decimal(eo.digits) + "," + e.E.str() + "," + e.q.str() + "," + e.p.str() + "\n";
            detail::write_file(eo.out, s, out);
            json in = {{"j", eo.j}};
            if (eo.x_min) in["x_min"] = *eo.x_min;
            if (eo.x_max) in["x_max"] = *eo.x_max;
            if (eo.near) in["near"] = *eo.near;
            detail::write_manifest(eo.out.empty() ? "" : eo.out + ".manifest.json",
                                   detail::manifest("ensemble", in, json::object(), {eo.out}), out);
        };
    });

    // spectrum --------------------------------------------------------------
    auto* spec_cmd = app.add_subcommand("spectrum", "quantization condition and wavefunctions");
    spec_cmd->require_subcommand(1);
    struct {
        double qm = 0, guess = 1.0, E = 1.0, qmax = 10.0, E_lo = 0.5, E_hi = 3.0;
        double rho_lo = 100, rho_hi = 1e4, step = 0.25, tol = 1e-8;
        int samples = 400;
        std::string mode = "square";
    } so;
    auto mode_of = [&] {
        if (so.mode == "square") return spectral::ArgumentMode::q_squared;
        if (so.mode == "fourth") return spectral::ArgumentMode::q_fourth;
        throw UsageError("--mode must be square or fourth");
    };
    auto* s_solve = spec_cmd->add_subcommand("solve", "Newton solve of S(E, q_m) = 1");
    s_solve->add_option("--qm", so.qm)->required();
    s_solve->add_option("--guess", so.guess);
    s_solve->add_option("--tol", so.tol);
    s_solve->add_option("--mode", so.mode, "square | fourth");
    s_solve->callback([&] {
        action = [&] {
            spectral::SolveOptions opt;
            opt.mode = mode_of();
            opt.tolerance = so.tol;
            const auto r = spectral::solve_energy(so.qm, so.guess, opt);
            if (!r.converged) throw NumericalError("spectrum solve: no convergence, best |S-1| = " + detail::fmt(r.residual, 6));
            json j = {{"q_m", r.q_m}, {"E", r.E}, {"d", {r.d.real(), r.d.imag()}}, {"residual", r.residual},
                      {"iterations", r.iterations}, {"zeros", r.zeros}};
            out << j.dump(2) << "\n";
        };
    });
    auto* s_zeros = spec_cmd->add_subcommand("zeros", "zeros of Psi for given E");
    s_zeros->add_option("--E", so.E);
    s_zeros->add_option("--qmax", so.qmax);
    s_zeros->callback([&] {
        action = [&] {
            json j = {{"E", so.E}, {"zeros", spectral::wavefunction_zeros(so.E, so.qmax)}};
            out << j.dump(2) << "\n";
        };
    });
    auto* s_eigen = spec_cmd->add_subcommand("eigen", "all eigenvalues in an energy window");
    s_eigen->add_option("--qm", so.qm)->required();
    s_eigen->add_option("--E-lo", so.E_lo);
    s_eigen->add_option("--E-hi", so.E_hi);
    s_eigen->add_option("--samples", so.samples);
    s_eigen->callback([&] {
        action = [&] {
            json j = {{"q_m", so.qm},
                      {"eigenvalues", spectral::eigenvalues_in(so.qm, so.E_lo, so.E_hi, so.samples, g.threads)}};
            out << j.dump(2) << "\n";
        };
    });
    auto* s_phi0 = spec_cmd->add_subcommand("phi0", "phase constant from the envelope of |S(1, rho)|");
    s_phi0->add_option("--rho-lo", so.rho_lo);
    s_phi0->add_option("--rho-hi", so.rho_hi);
    s_phi0->add_option("--step", so.step);
    s_phi0->callback([&] {
        action = [&] {
            const auto r = spectral::extract_phi0(so.rho_lo, so.rho_hi, so.step);
            json j = {{"phi0", r.phi0}, {"envelope_max", r.envelope_max}, {"envelope_min", r.envelope_min},
                      {"spread", r.spread}, {"maxima", r.maxima}, {"rho_lo", r.rho_lo}, {"rho_hi", r.rho_hi}};
            out << j.dump(2) << "\n";
        };
    });

    // sieve -----------------------------------------------------------------
    auto* sieve_cmd = app.add_subcommand("sieve", "quantum sieve: Monte-Carlo spectrum, inversion, comparison");
    sieve_cmd->require_subcommand(1);
    struct {
        double N = 0, j = 0, E = 1, window = 1.0, x_lo = 0, x_hi = 0;
        int T = 100, per_period = 32;
        u64 samples = 0, seed = 42;
        std::string G = "0,0.1,0.2,0.3,0.4,0.5", out, a, b;
    } vo;
    auto* v_run = sieve_cmd->add_subcommand("run", "Monte-Carlo (E, x) samples");
    v_run->add_option("--N", vo.N)->required();
    v_run->add_option("--j", vo.j)->required();
    v_run->add_option("--T", vo.T, "number of zeta zeros");
    v_run->add_option("--samples", vo.samples, "0 = (log sqrt N)^3");
    v_run->add_option("--seed", vo.seed);
    v_run->add_option("--G", vo.G, "comma-separated gauge exponents");
    v_run->add_option("--window", vo.window, "sqrt N' half-window in units of log sqrt N");
    v_run->add_option("--per-period", vo.per_period, "table nodes per zero period");
    v_run->add_option("--out", vo.out, "CSV path (default stdout)");
    v_run->callback([&] {
        action = [&] {
            zeta::ZetaZerosTable storage;
            const auto& zeros = load_zeros(g, storage);
            zeta::ExplicitFormula ef(zeros, vo.T);
            const auto G = detail::parse_list(vo.G);
            if (G.empty()) throw UsageError("sieve run: empty --G");
            const double L = std::log(std::sqrt(vo.N));
            const double root_lo = std::max(std::sqrt(vo.N) - vo.window * L, 2.0);
            double x_lo = std::pow(root_lo * root_lo, 0.25);
            for (double Gv : G) {
                try {
                    x_lo = std::min(x_lo, static_cast<double>(sieve::make_gauge(root_lo * root_lo, Gv).B_G));
                } catch (const DomainError&) {
                }
            }
            x_lo = std::max(2.0, 0.9 * x_lo);
            const double Nmax = std::pow(std::sqrt(vo.N) + vo.window * L, 2);
            ef.tabulate(x_lo, Nmax / x_lo, g.threads, vo.per_period);
            sieve::MonteCarloConfig mc;
            mc.samples = vo.samples;
            mc.seed = vo.seed;
            mc.G_list = G;
            mc.window_scale = vo.window;
            mc.threads = g.threads;
            const auto r = sieve::montecarlo_spectrum(vo.N, vo.j, ef, mc);
            std::string s = "sample,sqrtN,G,k,E,x\n";
            for (const auto& p : r.points)
                s += std::to_string(p.index) + "," + detail::fmt(p.sqrtN) + "," + detail::fmt(p.G) + "," +
                     std::to_string(p.k) + "," + detail::fmt(p.E) + "," + detail::fmt(p.x) + "\n";
            detail::write_file(vo.out, s, out);
            json in = {{"N", vo.N}, {"j", vo.j}, {"T", vo.T}, {"samples", r.samples}, {"G", G},
                       {"window", vo.window}, {"zeros", zeros_label(g)}, {"zeros_count", zeros.count()}};
            json tol = {{"bisection_rel", sieve::InversionOptions{}.rel_tolerance},
                        {"scan_nodes_per_period", sieve::InversionOptions{}.nodes_per_period},
                        {"table_nodes_per_period", vo.per_period}};
            json m = detail::manifest("sieve run", in, tol, {vo.out});
            m["seed"] = vo.seed;
            m["results"] = {{"points", r.points.size()}, {"failed_inversions", r.failed_inversions},
                            {"rejected_gauges", r.rejected_gauges}};
            detail::write_manifest(vo.out.empty() ? "" : vo.out + ".manifest.json", m, out);
            if (g.verbose)
                err << "sieve run: " << r.points.size() << " points, " << r.failed_inversions << " failed inversions\n";
        };
    });
    auto* v_inv = sieve_cmd->add_subcommand("invert", "solve pi_T(x) pi_T(N/x) / j^2 = E for x");
    v_inv->add_option("--E", vo.E)->required();
    v_inv->add_option("--N", vo.N)->required();
    v_inv->add_option("--j", vo.j, "default: prime index of sqrt N");
    v_inv->add_option("--T", vo.T);
    v_inv->add_option("--x-lo", vo.x_lo);
    v_inv->add_option("--x-hi", vo.x_hi);
    v_inv->callback([&] {
        action = [&] {
            zeta::ZetaZerosTable storage;
            const auto& zeros = load_zeros(g, storage);
            double j = vo.j;
            if (!(j > 0)) {
                primes::PrimeEngine engine(u64{1} << 20, g.threads);
                j = static_cast<double>(ensemble::sqrt_index(engine, static_cast<u64>(vo.N)));
            }
            const zeta::ExplicitFormula ef(zeros, vo.T);
            sieve::InversionOptions opt;
            opt.x_lo = vo.x_lo;
            opt.x_hi = vo.x_hi;
            const auto r = sieve::invert_x_of_E(vo.E, vo.N, j, ef, opt);
            json o = {{"E", vo.E}, {"N", vo.N}, {"j", j}, {"T", vo.T}, {"x", r.x},
                      {"smooth_root", r.smooth_root}, {"roots", r.roots}};
            out << o.dump(2) << "\n";
        };
    });
    auto* v_cmp = sieve_cmd->add_subcommand("compare", "similarity of two density CSVs");
    v_cmp->add_option("--a", vo.a)->required();
    v_cmp->add_option("--b", vo.b)->required();
    v_cmp->callback([&] {
        action = [&] {
            const auto A = detail::read_density_csv(vo.a);
            const auto B = detail::read_density_csv(vo.b);
            if (A.edges != B.edges) throw DomainError("sieve compare: binning mismatch");
            density::Binning bins;
            bins.nE = A.mass.size();
            bins.nx = 1;
            density::Histogram2D ha(bins), hb(bins);
            ha.mass = A.mass;
            hb.mass = B.mass;
            out << detail::comparison_json(density::compare_densities(ha, hb)).dump(2) << "\n";
        };
    });

    // trap ------------------------------------------------------------------
    auto* trap_cmd = app.add_subcommand("trap", "Penning-trap planning");
    trap_cmd->require_subcommand(1);
    struct {
        double N = 0, G = 0, rho_mm = 3.0, E = 1.0, q_lo = 1.0, q_hi = 8.0;
        int zero = 1, L = 0;
        std::string particle = "electron", out;
    } to;
    auto* t_plan = trap_cmd->add_subcommand("plan", "trap parameters encoding N");
    t_plan->add_option("--N", to.N)->required();
    t_plan->add_option("--G", to.G);
    t_plan->add_option("--rho-m", to.rho_mm, "saddle radius in mm");
    t_plan->add_option("--particle", to.particle, "electron | ion:<name>");
    t_plan->add_option("--zero-index", to.zero, "q_G = this zero of Psi at E = 1 (0: gauge q_G)");
    t_plan->add_option("--L", to.L, "0 s-wave, 1 p-wave");
    t_plan->callback([&] {
        action = [&] {
            trap::PlanRequest req;
            req.N = to.N;
            req.G = to.G;
            req.rho_m = to.rho_mm * 1e-3;
            req.particle = trap::particle_from_name(to.particle);
            req.zero_index = to.zero;
            req.L = to.L;
            const auto p = trap::plan_trap(req);
            const auto& t = p.params;
            json j;
            j["gauge"] = detail::gauge_json(p.gauge);
            j["particle"] = t.particle.name;
            j["q_G"] = p.q_G;
            j["rho_m"] = t.rho_m;
            j["B"] = t.B;
            j["omega_c"] = t.omega_c;
            j["omega_c_prime"] = t.omega_c_prime;
            j["omega_z"] = t.omega_z;
            j["omega_m"] = t.omega_m;
            j["omega_c_prime_over_omega_z"] = p.frequency_ratio;
            j["N_encodable"] = p.encoding.N;
            j["N_flux_form"] = p.encoding.N_flux;
            j["flux_form_gap"] = p.encoding.relative_gap;
            j["N_roundtrip_error"] = p.N_roundtrip_error;
            j["flux_quanta"] = p.flux_quanta;
            j["qubit_equivalent"] = p.qubit_equivalent;
            j["level_spacing_simulator"] = p.spacing_simulator;
            j["level_spacing_magnetron"] = p.spacing_magnetron;
            j["measurements_budget"] = p.budget;
            j["hierarchy_violations"] = trap::check_hierarchy(t);
            out << j.dump(2) << "\n";
        };
    });
    auto* t_zm = trap_cmd->add_subcommand("zeromatch", "paired zeros of exact and trap densities");
    t_zm->add_option("--E", to.E);
    t_zm->add_option("--q-lo", to.q_lo);
    t_zm->add_option("--q-hi", to.q_hi);
    t_zm->add_option("--out", to.out, "CSV path (default stdout)");
    auto zeromatch_csv = [](const trap::ZeroMatch& zm) {
        std::string s = "q_exact,q_trap,gap\n";
        for (const auto& p : zm.pairs) s += detail::fmt(p.q_exact) + "," + detail::fmt(p.q_trap) + "," + detail::fmt(p.gap) + "\n";
        for (double q : zm.unpaired_exact) s += detail::fmt(q) + ",,\n";
        for (double q : zm.unpaired_trap) s += "," + detail::fmt(q) + ",\n";
        return s;
    };
    t_zm->callback([&] {
        action = [&] {
            detail::write_file(to.out, zeromatch_csv(trap::zero_match_report(to.E, to.q_lo, to.q_hi)), out);
            detail::write_manifest(to.out.empty() ? "" : to.out + ".manifest.json",
                                   detail::manifest("trap zeromatch", {{"E", to.E}, {"q_lo", to.q_lo}, {"q_hi", to.q_hi}},
                                                    {{"zero_bisection", 1e-12}}, {to.out}),
                                   out);
        };
    });

    // figures ---------------------------------------------------------------
    auto* f1 = app.add_subcommand("fig1", "band structure of F(j): (E, x) spectrum points");
    struct {
        u64 j = 3;
        std::optional<u64> x_min, x_max, near;
        std::string out, svg;
    } f1o;
    f1->add_option("--j", f1o.j);
    f1->add_option("--x-min", f1o.x_min);
    f1->add_option("--x-max", f1o.x_max);
    f1->add_option("--near", f1o.near);
    f1->add_option("--out", f1o.out, "CSV path (default stdout)");
    f1->add_option("--svg", f1o.svg, "SVG path");
    f1->callback([&] {
        action = [&] {
            primes::PrimeEngine engine(u64{1} << 24, g.threads);
            const auto entries = ensemble::enumerate_ensemble(engine, {f1o.j, f1o.x_min, f1o.x_max, f1o.near});
            std::string s = "N,x,y,E,q,p\n";
            svg::Series pts;
            pts.points = true;
            for (const auto& e : entries) {
                s += std::to_string(e.N) + "," + std::to_string(e.x) + "," + std::to_string(e.y) + "," +
                     e.E.decimal(12) + "," + e.q.decimal(12) + "," + e.p.decimal(12) + "\n";
                pts.x.push_back(e.E.to_double());
                pts.y.push_back(static_cast<double>(e.x));
            }
            detail::write_file(f1o.out, s, out);
            if (!f1o.svg.empty())
                detail::write_file(f1o.svg, svg::plot({pts}, {.title = "F(" + std::to_string(f1o.j) + ")", .xlabel = "E", .ylabel = "x"}), out);
            detail::write_manifest(f1o.out.empty() ? "" : f1o.out + ".manifest.json",
                                   detail::manifest("fig1", {{"j", f1o.j}}, json::object(), {f1o.out, f1o.svg}), out);
        };
    });

    auto* f2 = app.add_subcommand("fig2", "quantum vs classical (E, x) density maps");
    Fig2Options f2o;
    std::string f2dir = "fig2";
    f2->add_option("--j", f2o.j);
    f2->add_option("--N", f2o.N, "default p_j p_{j+1}");
    f2->add_option("--T", f2o.T);
    f2->add_option("--seed", f2o.seed);
    f2->add_option("--samples", f2o.samples, "0 = (log sqrt N)^3");
    f2->add_option("--G", f2o.G_list);
    f2->add_option("--nE", f2o.nE);
    f2->add_option("--nx", f2o.nx);
    f2->add_option("--out-dir", f2dir);
    f2->callback([&] {
        action = [&] {
            zeta::ZetaZerosTable storage;
            const auto& zeros = load_zeros(g, storage);
            const auto r = run_fig2(f2o, zeros, g.threads);
            const std::string d = f2dir + "/";
            detail::write_file(d + "quantum_density.csv", detail::density_csv(r.quantum), out);
            detail::write_file(d + "classical_density.csv", detail::density_csv(r.classical), out);
            detail::write_file(d + "quantum_density.svg", svg::heatmap(r.quantum, {.title = "simulator"}), out);
            detail::write_file(d + "classical_density.svg", svg::heatmap(r.classical, {.title = "prime counting"}), out);
            json metrics = detail::comparison_json(r.metrics);
            metrics["N"] = r.N;
            metrics["quantum_points"] = r.mc.points.size();
            metrics["quantum_binned"] = r.quantum.count;
            metrics["classical_binned"] = r.classical.count;
            metrics["samples"] = r.mc.samples;
            metrics["failed_inversions"] = r.mc.failed_inversions;
            detail::write_file(d + "metrics.json", metrics.dump(2) + "\n", out);
            json in = {{"j", f2o.j}, {"N", r.N}, {"T", f2o.T}, {"samples", r.mc.samples}, {"G", f2o.G_list},
                       {"nE", f2o.nE}, {"nx", f2o.nx}, {"zeros", zeros_label(g)}};
            json m = detail::manifest("fig2", in, {{"bisection_rel", 1e-12}, {"table_nodes_per_period", f2o.per_period}},
                                      {"quantum_density.csv", "classical_density.csv", "quantum_density.svg",
                                       "classical_density.svg", "metrics.json"});
            m["seed"] = f2o.seed;
            detail::write_manifest(d + "manifest.json", m, out);
            out << metrics.dump(2) << "\n";
        };
    });

    auto* f3 = app.add_subcommand("fig3", "exact vs trap densities and their zeros at E = 1");
    struct {
        double E = 1.0, q_lo = 1.0, q_hi = 8.0;
        std::string dir = "fig3";
    } f3o;
    f3->add_option("--E", f3o.E);
    f3->add_option("--q-lo", f3o.q_lo);
    f3->add_option("--q-hi", f3o.q_hi);
    f3->add_option("--out-dir", f3o.dir);
    f3->callback([&] {
        action = [&] {
            const std::string d = f3o.dir + "/";
            const auto zm = trap::zero_match_report(f3o.E, f3o.q_lo, f3o.q_hi);
            detail::write_file(d + "zeromatch.csv", zeromatch_csv(zm), out);
            const auto c = fig3_curve(f3o.E, f3o.q_lo, f3o.q_hi, 2000);
            std::string s = "q,exact,trap\n";
            for (std::size_t i = 0; i < c.q.size(); ++i)
                s += detail::fmt(c.q[i], 10) + "," + detail::fmt(c.exact[i], 10) + "," + detail::fmt(c.trap[i], 10) + "\n";
            detail::write_file(d + "densities.csv", s, out);
            svg::Series a{c.q, c.exact, "#1f4e9c", false}, b{c.q, c.trap, "#e07b00", false};
            detail::write_file(d + "densities.svg",
                               svg::plot({a, b}, {.title = "q psi^2, E = " + detail::fmt(f3o.E, 6), .xlabel = "q", .ylabel = "density"}), out);
            detail::write_manifest(d + "manifest.json",
                                   detail::manifest("fig3", {{"E", f3o.E}, {"q_lo", f3o.q_lo}, {"q_hi", f3o.q_hi}},
                                                    {{"zero_bisection", 1e-12}},
                                                    {"zeromatch.csv", "densities.csv", "densities.svg"}),
                                   out);
            out << zeromatch_csv(zm);
        };
    });

    // parse and dispatch ----------------------------------------------------
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << QFSIM_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail("usage", 1, e.what());
    } catch (const Error& e) {
        return fail(e.kind(), e.exit_code(), e.what());
    }
    if (!action) return fail("usage", 1, "no subcommand action");
    try {
        action();
    } catch (const Error& e) {
        return fail(e.kind(), e.exit_code(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("domain", 2, e.what());
    } catch (const std::exception& e) {
        return fail("numerical", 3, e.what());
    }
    return 0;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace qfsim::cli
