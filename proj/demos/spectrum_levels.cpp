// Zeros of the wavefunction and the eigenvalues at a few boundary radii.

#include <cstdio>

#include "qfsim/qfsim.hpp"

int main() {
    using namespace qfsim::spectral;

    for (double E : {1.0, 1.5, 2.0}) {
        std::printf("E = %.2f  zeros:", E);
        for (double q : wavefunction_zeros(E, 6.0)) std::printf(" %.6f", q);
        std::printf("\n");
    }

    std::printf("\n%6s %12s %12s\n", "q_m", "E (exact)", "E (asym)");
    for (double qm : {5.0, 10.0, 20.0}) {
        const auto Es = eigenvalues_in(qm, 0.5, 3.0);
        const double asym = 1.0 + epsilon_asymptotic(qm, 0.0);
        for (double E : Es) std::printf("%6.1f %12.6f %12.6f\n", qm, E, asym);
    }

    const auto p = extract_phi0(100.0, 140.0);
    std::printf("\nphi0 = %.7f from %zu envelope maxima\n", p.phi0, p.maxima);
}
