// Prints the factorization ensemble F(j) near the balanced point, with the
// exact energy and phase-space coordinates of every entry.
//
//   ensemble_band [j=100] [rows=12]

#include <cstdio>
#include <cstdlib>

#include "qfsim/qfsim.hpp"

int main(int argc, char** argv) {
    using namespace qfsim;
    const std::uint64_t j = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100;
    const std::size_t rows = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 12;

    primes::PrimeEngine engine;
    const auto entries = ensemble::enumerate_ensemble(engine, {j, {}, {}, {}});
    std::printf("F(%llu): %zu entries, p_j = %llu\n", static_cast<unsigned long long>(j), entries.size(),
                static_cast<unsigned long long>(engine.nth_prime(j)));
    std::printf("%14s %10s %12s %14s %10s %10s\n", "N", "x", "y", "E", "q", "p");
    const std::size_t start = entries.size() > rows ? entries.size() - rows : 0;
    for (std::size_t i = start; i < entries.size(); ++i) {
        const auto& e = entries[i];
        std::printf("%14llu %10llu %12llu %14s %10.6f %10.6f\n", static_cast<unsigned long long>(e.N),
                    static_cast<unsigned long long>(e.x), static_cast<unsigned long long>(e.y), e.E.str().c_str(),
                    e.q.to_double(), e.p.to_double());
    }
}
