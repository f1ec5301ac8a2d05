#pragma once

#include "jcm/types.hpp"

namespace jcm {

struct BosonTriple {
    double nu;
    double x;
    cplx y;
};

struct FermionQuad {
    double p1;
    double pm1;
    double u;
    cplx v;
};

// Diagonalize the extended (one-body + pairing) boson density into
// quasi-particle occupation nu and Bogoliubov coefficients (x, y),
// gauge-fixed to x real >= 1.
BosonTriple boson_diagonalize(const ExtendedBosonDensity& d, double tol = kConstraintTol);

ExtendedBosonDensity boson_reconstruct(double nu, double x, const cplx& y,
                                       double tol = kConstraintTol);

// Diagonalize the 2x2 one-fermion density. p1 is assigned by eigenvector
// overlap with the first basis state (continuity through level crossings),
// not by magnitude; degenerate input tie-breaks to u=1, v=0.
FermionQuad fermion_diagonalize(const ExtendedFermionDensity& d, double tol = kConstraintTol);

ExtendedFermionDensity fermion_reconstruct(double p1, double pm1, double u, const cplx& v,
                                           double tol = kConstraintTol);

// Invariant checks; throws PhysicalityError naming the violated constraint.
void validate_state(const GaussianState& s, double tol = kConstraintTol);

Observables observables(const GaussianState& s, const ModelParams& p, double time = 0.0);

}  // namespace jcm
