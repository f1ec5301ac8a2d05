#pragma once

#include <tuple>

#include "jcm/types.hpp"

namespace jcm {

struct StateDerivative {
    cplx dB{0.0, 0.0};
    double dnu = 0.0;
    double dx = 0.0;
    cplx dy{0.0, 0.0};
    double du = 0.0;
    cplx dv{0.0, 0.0};
    double ds = 0.0;
    cplx dK1{0.0, 0.0};
    cplx dK2{0.0, 0.0};
    cplx dK3{0.0, 0.0};
    double dPhiBeta = 0.0;
    double dPhiAlpha = 0.0;
    // max |Im| of the analytically real dnu/ds expressions, self-consistency probe
    double im_residual = 0.0;
};

struct GuardOptions {
    double depolarization_eps = kDepolarizationGuard;  // on |p1 - pm1|
    double gauge_eps = kGaugeGuard;                    // on u
    bool clamp = false;  // clamp-and-continue instead of raising
};

// I_k from the running accumulators: the phase factors undo the accumulated
// exponents so that I1 = e^{-i PhiBeta} K1, I2 = e^{i(2 PhiAlpha + PhiBeta)} K2,
// I3 = e^{i(PhiBeta - 2 PhiAlpha)} K3.
std::tuple<cplx, cplx, cplx> collision_integrals(const MemoryState& mem);

StateDerivative meanfield_rhs(const GaussianState& s, const ModelParams& p,
                              const GuardOptions& guards = {});

StateDerivative collisional_rhs(const GaussianState& s, const MemoryState& mem,
                                const ModelParams& p, const GuardOptions& guards = {});

namespace detail {

// Gauge-covariant evaluation with the fermion pair carried as a full spinor
// (w1, w2); w1 real recovers the public gauge-fixed formulas. D and C are the
// pair combinations (du*v - u*dv) and (dx*conj(y) - x*conj(dy)); the caller
// resolves them in its own chart.
struct CoreDerivative {
    cplx dB, D, C;
    double dx = 0.0;  // boson chart is shared, resolved here
    cplx dy{0.0, 0.0};
    double dnu, ds;
    cplx dK1, dK2, dK3;
    // FAlpha omits the gauge connection -Im(conj(dv) v); it is the
    // parallel-transport value, exact for the spinor chart, and the
    // gauge-fixed caller adds its connection term.
    double FBeta, FAlpha;
    double im_residual;
};

CoreDerivative core_rhs(const cplx& B, double nu, double x, const cplx& y, const cplx& w1,
                        const cplx& w2, double s, double p_total, const MemoryState& mem,
                        const ModelParams& p, bool collisional, const GuardOptions& guards);

}  // namespace detail

}  // namespace jcm
