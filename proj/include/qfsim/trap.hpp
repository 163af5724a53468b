/*
 * trap.hpp - Penning-trap realization of the simulator.
 *
 * SI units throughout. The Gaussian factors of c in the cyclotron relation,
 * the spin shift and the flux quantum are dropped (omega_c = g s e B / m,
 * flux quantum h / 2e).
 */
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qfsim/error.hpp"
#include "qfsim/quantum_sieve.hpp"
#include "qfsim/spectral.hpp"

namespace qfsim::trap {

using special::cplx;

namespace constants {
// CODATA 2022 (h, e, c exact)
inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = h / (2.0 * std::numbers::pi);
inline constexpr double e = 1.602176634e-19;
inline constexpr double c = 299792458.0;
inline constexpr double m_e = 9.1093837139e-31;
inline constexpr double m_p = 1.67262192595e-27;
inline constexpr double u = 1.66053906892e-27;
inline constexpr double g_e = 2.00231930436092;
inline constexpr double g_p = 5.5856946893;
inline constexpr double flux_quantum = h / (2.0 * e);
} // namespace constants

struct Particle {
    std::string name;
    double mass = constants::m_e; // single particle, kg
    double charge = constants::e; // C
    double g = constants::g_e;
    double s_hat = 0.5;
};

inline Particle electron() { return {"electron", constants::m_e, constants::e, constants::g_e, 0.5}; }

/// Ion presets. Singly charged; g s = 1 (orbital cyclotron) except the bare proton.
inline std::vector<Particle> ion_presets() {
    return {
        {"proton", constants::m_p, constants::e, constants::g_p, 0.5},
        {"Be9+", 9.0121831 * constants::u - constants::m_e, constants::e, 2.0, 0.5},
        {"Mg24+", 23.985041697 * constants::u - constants::m_e, constants::e, 2.0, 0.5},
        {"Ca40+", 39.962590863 * constants::u - constants::m_e, constants::e, 2.0, 0.5},
    };
}

/// "electron" or "ion:<name>".
inline Particle particle_from_name(const std::string& spec) {
    if (spec == "electron") return electron();
    if (spec.rfind("ion:", 0) == 0) {
        const std::string name = spec.substr(4);
        for (const auto& p : ion_presets())
            if (p.name == name) return p;
        throw UsageError("unknown ion preset: " + name);
    }
    throw UsageError("unknown particle: " + spec);
}

struct TrapParameters {
    Particle particle = electron();
    double M = 2.0 * constants::m_e; // pair mass
    double B = 0.0;
    double omega_c = 0.0;
    double omega_c_prime = 0.0;
    double omega_z = 0.0;
    double omega_m = 0.0;
    double rho_m = 0.0;
    double rho_0 = 0.0;
    int L = 0;

    double gs() const { return particle.g * particle.s_hat; }
};

/// Builds a consistent parameter set from the axial frequency and the
/// modified cyclotron frequency: omega_m = omega_z^2 / (2 omega_c'),
/// omega_c = omega_c' + omega_m, B from the cyclotron relation.
inline TrapParameters make_parameters(const Particle& p, double omega_z, double omega_c_prime, double rho_m,
                                      int L = 0) {
    if (!(omega_z > 0) || !(omega_c_prime > 0)) throw DomainError("trap: frequencies must be positive");
    if (L != 0 && L != 1) throw DomainError("trap: L must be 0 or 1");
    TrapParameters t;
    t.particle = p;
    t.M = 2.0 * p.mass;
    t.omega_z = omega_z;
    t.omega_c_prime = omega_c_prime;
    t.omega_m = omega_z * omega_z / (2.0 * omega_c_prime);
    t.omega_c = omega_c_prime + t.omega_m;
    t.B = t.omega_c * p.mass / (t.gs() * p.charge);
    t.rho_m = rho_m;
    t.rho_0 = rho_m;
    t.L = L;
    return t;
}

struct HierarchyLimits {
    double ratio = 10.0;                 // ">>" threshold between successive frequencies
    double max_frequency_ratio = 1e3;    // omega_c' / omega_z achievable
    double max_q = 100.0;                // q_G reachable with typical fields at mm scale
};

/// Empty when all invariants hold; otherwise one message per violation.
inline std::vector<std::string> check_hierarchy(const TrapParameters& t, const HierarchyLimits& lim = {}) {
    std::vector<std::string> bad;
    if (!(t.omega_c / t.omega_z >= lim.ratio))
        bad.push_back("omega_c/omega_z = " + std::to_string(t.omega_c / t.omega_z) + " < " + std::to_string(lim.ratio));
    if (!(t.omega_z / t.omega_m >= lim.ratio))
        bad.push_back("omega_z/omega_m = " + std::to_string(t.omega_z / t.omega_m) + " < " + std::to_string(lim.ratio));
    if (!(t.omega_c >= std::sqrt(2.0) * t.omega_z)) bad.push_back("omega_c < sqrt(2) omega_z");
    const double mz = t.omega_z * t.omega_z / (2.0 * t.omega_c_prime);
    if (!(std::abs(t.omega_m - mz) <= 0.01 * mz)) bad.push_back("omega_m inconsistent with omega_z^2/(2 omega_c')");
    if (!(t.rho_0 >= t.rho_m)) bad.push_back("rho_0 < rho_m");
    return bad;
}

// ---------------------------------------------------------------------------
// Unit map
// ---------------------------------------------------------------------------

struct Physical {
    double rho = 0.0;     // m
    double E_prime = 0.0; // J
};

inline double length_scale(const TrapParameters& t) {
    return std::sqrt(std::sqrt(2.0) * constants::hbar / (t.M * t.omega_z));
}

inline Physical to_physical(double q, double E, const TrapParameters& t) {
    return {q * length_scale(t), -E * constants::hbar * t.omega_z / std::pow(2.0, 1.5)};
}

inline std::pair<double, double> to_dimensionless(const Physical& p, const TrapParameters& t) {
    return {p.rho / length_scale(t), -std::pow(2.0, 1.5) * p.E_prime / (constants::hbar * t.omega_z)};
}

struct MagnetronLevel {
    double E_prime = 0.0;
    double E = 0.0;
};

/// E' = -hbar omega_m (k + 1/2), E = sqrt 2 (omega_z / omega_c') (k + 1/2).
inline MagnetronLevel magnetron_level(int k, const TrapParameters& t) {
    if (k < 0) throw DomainError("magnetron_level: k must be >= 0");
    const double kk = k + 0.5;
    return {-constants::hbar * t.omega_m * kk, std::sqrt(2.0) * t.omega_z / t.omega_c_prime * kk};
}

// ---------------------------------------------------------------------------
// Sizing and encoding
// ---------------------------------------------------------------------------

struct FrequencyCondition {
    double ratio = 0.0; // omega_z / omega_c'
    bool physical = true;
};

inline FrequencyCondition frequency_condition(double q_G, double k_m) {
    if (!(q_G > 1.0) || !(k_m > 0.0)) throw DomainError("frequency_condition: need q_G > 1 and k_m > 0");
    const double r = std::numbers::pi * std::sqrt(2.0) / (k_m * std::log(q_G));
    return {r, r < 1.0};
}

inline FrequencyCondition frequency_condition(const sieve::GaugeConfig& g) { return frequency_condition(g.q_G, g.k_m); }

inline double size_to_axial(double rho_m, double q_G, double m) {
    if (!(rho_m > 0)) throw DomainError("size_to_axial: rho_m must be > 0");
    return constants::hbar * q_G * q_G / (std::sqrt(2.0) * m * rho_m * rho_m);
}

inline double axial_to_size(double omega_z, double q_G, double m) {
    if (!(omega_z > 0)) throw DomainError("axial_to_size: omega_z must be > 0");
    return std::sqrt(constants::hbar / (std::sqrt(2.0) * m * omega_z)) * q_G;
}

inline double flux_quanta(double rho_m, double B) {
    if (rho_m < 0 || B < 0) throw DomainError("flux_quanta: inputs must be non-negative");
    return std::numbers::pi * rho_m * rho_m * B / constants::flux_quantum;
}

/// sqrt N = (2^{3/2}/3) (q^3 / log q) (omega_c' / omega_z).
inline double sqrtN_frequency_form(double q_G, double ratio) {
    if (!(q_G > 1.0) || !(ratio > 1.0)) throw DomainError("encodable_N: need q_G > 1 and ratio > 1");
    return std::pow(2.0, 1.5) / 3.0 * q_G * q_G * q_G / std::log(q_G) * ratio;
}

/// sqrt N = (q / log q) (4/3 g s) n, n the flux quanta through the trap.
inline double sqrtN_flux_form(double q_G, double gs, double rho_m, double B) {
    return q_G / std::log(q_G) * (4.0 / 3.0 * gs) * flux_quanta(rho_m, B);
}

/// Inverse of the frequency form.
inline double ratio_for_N(double N, double q_G) {
    if (!(q_G > 1.0) || !(N > 0)) throw DomainError("ratio_for_N: need q_G > 1 and N > 0");
    return std::sqrt(N) * 3.0 * std::log(q_G) / (std::pow(2.0, 1.5) * q_G * q_G * q_G);
}

struct Encoding {
    double N = 0.0;          // frequency form
    double N_flux = 0.0;     // flux form, when trap parameters are given
    double relative_gap = 0.0;
};

inline Encoding encodable_N(double q_G, double ratio) {
    const double s = sqrtN_frequency_form(q_G, ratio);
    return {s * s, 0.0, 0.0};
}

/// Both forms for a parameter set whose omega_c' / omega_z is the ratio.
inline Encoding encodable_N(double q_G, const TrapParameters& t) {
    Encoding enc = encodable_N(q_G, t.omega_c_prime / t.omega_z);
    const double s = sqrtN_flux_form(q_G, t.gs(), t.rho_m, t.B);
    enc.N_flux = s * s;
    enc.relative_gap = std::abs(std::sqrt(enc.N_flux) - std::sqrt(enc.N)) / std::sqrt(enc.N);
    return enc;
}

struct MeasuredEnergy {
    double E = 0.0;
    bool meaningful = false; // E > 1
};

/// E = 2^{3/2} |E' - L g s (e hbar / m) B| / (hbar omega_z).
inline MeasuredEnergy measured_energy(double E_prime, int L, const TrapParameters& t) {
    if (L != 0 && L != 1) throw DomainError("measured_energy: L must be 0 or 1");
    const double shift = L * t.gs() * (t.particle.charge * constants::hbar / t.particle.mass) * t.B;
    const double E = std::pow(2.0, 1.5) * std::abs(E_prime - shift) / (constants::hbar * t.omega_z);
    return {E, E > 1.0};
}

// ---------------------------------------------------------------------------
// Trap wavefunction
// ---------------------------------------------------------------------------

/// psi(q) = Re{ e^{i q^2/2} [ U(beta, 1, -i q^2) + c M(beta, 1, -i q^2) ] },
/// beta = 1/2 + i E / 4, c real and fixed by psi(sqrt E) = 0.
class TrapWavefunction {
public:
    explicit TrapWavefunction(double E) : E_(E), beta_(0.5, E / 4.0) {
        if (!(E > 0.0)) throw DomainError("trap wavefunction: E must be > 0");
        const cplx ph = std::exp(cplx(0.0, E / 2.0));
        const double u = (ph * special::kummer_U(beta_, 1.0, cplx(0.0, -E))).real();
        const double m = (ph * special::kummer_M(beta_, 1.0, cplx(0.0, -E))).real();
        if (std::abs(m) < 1e-14 * std::max(1.0, std::abs(u)))
            throw NumericalError("trap wavefunction: boundary matching failed");
        c_ = -u / m;
    }

    double E() const noexcept { return E_; }
    cplx beta() const noexcept { return beta_; }
    double c() const noexcept { return c_; }
    double boundary_q() const { return std::sqrt(E_); }

    double operator()(double q) const {
        if (!(q > 0.0)) throw DomainError("trap wavefunction: q must be > 0");
        const double r = q * q;
        const cplx z(0.0, -r);
        const cplx v = special::kummer_U(beta_, 1.0, z) + c_ * special::kummer_M(beta_, 1.0, z);
        return (std::exp(cplx(0.0, r / 2.0)) * v).real();
    }

    double density(double q) const {
        const double p = (*this)(q);
        return q * p * p;
    }

    std::vector<double> zeros(double q_max, double tol = 1e-12) const {
        std::vector<double> out;
        const double q0 = boundary_q();
        if (q_max <= q0) return out;
        auto step_at = [](double q) { return std::min(0.02, 0.1 * std::numbers::pi / std::max(q, 1.0)); };
        double a = q0 + step_at(q0) * 1e-2;
        double fa = (*this)(a);
        while (a < q_max) {
            const double b = std::min(q_max, a + step_at(a));
            const double fb = (*this)(b);
            if (fb == 0.0) {
                out.push_back(b);
            } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
                double lo = a, hi = b, flo = fa;
                while (hi - lo > tol * std::max(1.0, hi)) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = (*this)(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                out.push_back(0.5 * (lo + hi));
            }
            a = b;
            fa = fb;
        }
        return out;
    }

private:
    double E_;
    cplx beta_;
    double c_ = 0.0;
};

/// Physical-units evaluation: rho and E' mapped through the unit scale.
inline double trap_wavefunction(double rho, double E_prime, const TrapParameters& t) {
    const auto [q, E] = to_dimensionless({rho, E_prime}, t);
    return TrapWavefunction(E)(q);
}

struct ZeroPair {
    double q_exact = 0.0;
    double q_trap = 0.0;
    double gap = 0.0; // q_trap - q_exact
};

struct ZeroMatch {
    std::vector<ZeroPair> pairs;
    std::vector<double> unpaired_exact;
    std::vector<double> unpaired_trap;
};

/// Pairs zeros of q Psi^2 and q psi^2 on [q_lo, q_hi] by mutual nearest neighbour.
inline ZeroMatch zero_match_report(double E, double q_lo, double q_hi) {
    ZeroMatch out;
    const double q0 = std::sqrt(E);
    if (q_hi <= std::max(q0, q_lo)) return out;
    auto in_range = [&](std::vector<double> v) {
        std::erase_if(v, [&](double q) { return q < q_lo || q > q_hi; });
        return v;
    };
    const auto ex = in_range(spectral::Wavefunction(E).zeros(q_hi));
    const auto tr = in_range(TrapWavefunction(E).zeros(q_hi));
    auto nearest = [](const std::vector<double>& v, double q) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i] - q) < std::abs(v[best] - q)) best = i;
        return best;
    };
    std::vector<bool> used(tr.size(), false);
    for (double qe : ex) {
        if (tr.empty()) {
            out.unpaired_exact.push_back(qe);
            continue;
        }
        const std::size_t i = nearest(tr, qe);
        if (ex[nearest(ex, tr[i])] == qe && !used[i]) {
            used[i] = true;
            out.pairs.push_back({qe, tr[i], tr[i] - qe});
        } else {
            out.unpaired_exact.push_back(qe);
        }
    }
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (!used[i]) out.unpaired_trap.push_back(tr[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

struct PlanRequest {
    double N = 0.0;
    double G = 0.0;
    double rho_m = 3e-3;
    Particle particle = electron();
    int zero_index = 1; // q_G = this zero of Psi at E = 1; 0 uses the gauge q_G
    int L = 0;
    HierarchyLimits limits{};
};

struct TrapPlan {
    sieve::GaugeConfig gauge;
    TrapParameters params;
    double q_G = 0.0;
    double frequency_ratio = 0.0; // omega_c' / omega_z
    Encoding encoding;
    double N_roundtrip_error = 0.0;
    double flux_quanta = 0.0;
    double qubit_equivalent = 0.0;
    double effective_k_m = 0.0;     // (3 pi / 2) sqrt N / q^3
    double spacing_simulator = 0.0; // 2 pi / (k_m log q)
    double spacing_magnetron = 0.0; // sqrt 2 omega_z / omega_c'
    std::uint64_t budget = 0;
};

inline TrapPlan plan_trap(const PlanRequest& req) {
    TrapPlan plan;
    plan.gauge = sieve::make_gauge(req.N, req.G);
    if (!(req.rho_m > 0.0)) throw DomainError("plan_trap: rho_m must be > 0");
    if (req.zero_index < 0) throw DomainError("plan_trap: zero index must be >= 0");
    if (req.zero_index == 0) {
        plan.q_G = plan.gauge.q_G;
    } else {
        double qmax = 4.0;
        std::vector<double> z;
        while ((z = spectral::wavefunction_zeros(1.0, qmax)).size() < static_cast<std::size_t>(req.zero_index))
            qmax *= 1.5;
        plan.q_G = z[req.zero_index - 1];
    }
    if (!(plan.q_G > 1.0)) throw DomainError("plan_trap: q_G must exceed 1");
    if (plan.q_G > req.limits.max_q)
        throw DomainError("plan rejected: q_G = " + std::to_string(plan.q_G) + " exceeds " +
                          std::to_string(req.limits.max_q));

    const double omega_z = size_to_axial(req.rho_m, plan.q_G, req.particle.mass);
    plan.frequency_ratio = ratio_for_N(req.N, plan.q_G);
    if (plan.frequency_ratio > req.limits.max_frequency_ratio)
        throw DomainError("plan rejected: omega_c'/omega_z = " + std::to_string(plan.frequency_ratio) +
                          " exceeds " + std::to_string(req.limits.max_frequency_ratio) + " (flux quanta " +
                          std::to_string(flux_quanta(req.rho_m, plan.frequency_ratio * omega_z * req.particle.mass /
                                                                    (req.particle.g * req.particle.s_hat *
                                                                     req.particle.charge))) +
                          ")");
    plan.params = make_parameters(req.particle, omega_z, plan.frequency_ratio * omega_z, req.rho_m, req.L);
    if (const auto bad = check_hierarchy(plan.params, req.limits); !bad.empty())
        throw DomainError("plan rejected: " + bad.front());

    plan.encoding = encodable_N(plan.q_G, plan.params);
    plan.N_roundtrip_error = std::abs(plan.encoding.N - req.N) / req.N;
    plan.flux_quanta = flux_quanta(req.rho_m, plan.params.B);
    plan.qubit_equivalent = plan.flux_quanta;
    plan.effective_k_m = 1.5 * std::numbers::pi * std::sqrt(req.N) / std::pow(plan.q_G, 3);
    plan.spacing_simulator = 2.0 * std::numbers::pi / (plan.effective_k_m * std::log(plan.q_G));
    plan.spacing_magnetron = std::sqrt(2.0) * plan.params.omega_z / plan.params.omega_c_prime;
    plan.budget = sieve::measurements_budget(req.N);
    return plan;
}

} // namespace qfsim::trap
