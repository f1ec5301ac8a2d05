#pragma once

#include <vector>

#include "jcm/types.hpp"

namespace jcm {

// Truncated Fock-space wavefunction of atom x field, amplitudes indexed by
// photon number for each atom level.
struct ExactState {
    std::vector<cplx> up;    // |up, n>,   n = 0..n_max
    std::vector<cplx> down;  // |down, n>, n = 0..n_max
    int n_max = 0;

    double norm2() const;
};

struct ExactObservables {
    double sigma3 = 0.0;
    double sigmaP = 0.0;
    double photon = 0.0;
    double energy = 0.0;
    cplx B{0.0, 0.0};
};

// Smallest n_max whose Poisson tail beyond it is below 1e-12.
int auto_n_max(double alpha_abs, double tail_bound = 1e-12);

// |coherent(alpha)> x |up>, renormalized after truncation. Raises
// TruncationError when the Poisson tail beyond n_max is not < 1e-12.
ExactState prepare_coherent_excited(const cplx& alpha, int n_max);

// Analytic per-block propagation of the truncated Hamiltonian: within each
// manifold {|up,n>, |down,n+1>} the 2x2 propagator is applied exactly;
// |down,0> and the topmost |up,n_max> evolve by phase only.
ExactState exact_evolve(const ExactState& s, const ModelParams& p, double t);

ExactObservables exact_observables(const ExactState& s, const ModelParams& p);

// <bb> (pairing moment), for mapping the exact run onto Gaussian variables.
cplx exact_pair_moment(const ExactState& s);

// Brute-force evolution by eigendecomposition of the dense truncated
// Hamiltonian. Test oracle only; refuses n_max > 32.
ExactState dense_oracle_evolve(const ExactState& s, const ModelParams& p, double t);

}  // namespace jcm
