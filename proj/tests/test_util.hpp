#pragma once

#include <cmath>
#include <random>

#include "jcm/exact.hpp"
#include "jcm/types.hpp"

namespace jcm::test {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817u);
    return gen;
}

inline double urand(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline cplx crand(double radius) {
    const double r = urand(0.0, radius);
    const double ph = urand(0.0, 2.0 * M_PI);
    return std::polar(r, ph);
}

// random state satisfying both quadratic constraints exactly
inline GaussianState random_state(double u_min = 0.05) {
    GaussianState s;
    s.boson.B = crand(6.0);
    s.boson.nu = urand(0.0, 2.0);
    s.boson.y = crand(1.5);
    s.boson.x = std::sqrt(1.0 + std::norm(s.boson.y));
    const double u = urand(u_min, 1.0);
    s.fermion.u = u;
    s.fermion.v = std::polar(std::sqrt(1.0 - u * u), urand(0.0, 2.0 * M_PI));
    s.fermion.p1 = urand(0.0, 1.0);
    s.fermion.pm1 = urand(0.0, 1.0);
    if (s.fermion.p1 < s.fermion.pm1) std::swap(s.fermion.p1, s.fermion.pm1);
    return s;
}

// Coherent-excited vector cut at n_max and renormalized, with no demand on
// the discarded tail. Oracle-equivalence tests compare two propagators on one
// and the same truncated vector, so representation fidelity is irrelevant and
// small spaces keep the dense reference cheap.
inline ExactState truncated_coherent_excited(const cplx& alpha, int n_max) {
    ExactState s;
    s.n_max = n_max;
    s.up.assign(n_max + 1, cplx{0.0, 0.0});
    s.down.assign(n_max + 1, cplx{0.0, 0.0});
    const double la = std::abs(alpha) > 0.0 ? std::log(std::abs(alpha)) : 0.0;
    const double ph = std::arg(alpha);
    for (int n = 0; n <= n_max; ++n) {
        if (std::abs(alpha) == 0.0 && n > 0) break;
        const double logmag = -0.5 * std::norm(alpha) + n * la - 0.5 * std::lgamma(n + 1.0);
        s.up[n] = std::polar(std::exp(logmag), n * ph);
    }
    const double nrm = std::sqrt(s.norm2());
    for (auto& a : s.up) a /= nrm;
    return s;
}

}  // namespace jcm::test
