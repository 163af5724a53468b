// Which N an electron trap can encode, and what the plan looks like when it can.

#include <cstdio>

#include "qfsim/qfsim.hpp"

int main() {
    using namespace qfsim;

    std::printf("%8s %10s %14s\n", "q_G", "ratio", "encodable N");
    for (double q : {3.0, 10.0, 30.0, 100.0})
        for (double r : {10.0, 1e3}) std::printf("%8.1f %10.0f %14.4g\n", q, r, trap::encodable_N(q, r).N);

    std::printf("\n");
    for (double N : {1e6, 1e8, 1e10}) {
        trap::PlanRequest req;
        req.N = N;
        try {
            const auto plan = trap::plan_trap(req);
            std::printf("N = %.0e: q_G %.4f, B %.4g T, omega_z %.4g s^-1, omega_c'/omega_z %.4g, flux quanta %.4g\n", N,
                        plan.q_G, plan.params.B, plan.params.omega_z, plan.frequency_ratio, plan.flux_quanta);
        } catch (const DomainError& e) {
            std::printf("N = %.0e: %s\n", N, e.what());
        }
    }
}
