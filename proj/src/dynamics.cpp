#include "jcm/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace jcm {

std::tuple<cplx, cplx, cplx> collision_integrals(const MemoryState& mem) {
    const cplx iu{0.0, 1.0};
    const cplx I1 = std::exp(-iu * mem.PhiBeta) * mem.K1;
    const cplx I2 = std::exp(iu * (2.0 * mem.PhiAlpha + mem.PhiBeta)) * mem.K2;
    const cplx I3 = std::exp(iu * (mem.PhiBeta - 2.0 * mem.PhiAlpha)) * mem.K3;
    return {I1, I2, I3};
}

namespace detail {

CoreDerivative core_rhs(const cplx& B, double nu, double x, const cplx& y, const cplx& w1,
                        const cplx& w2, double s, double p_total, const MemoryState& mem,
                        const ModelParams& p, bool collisional, const GuardOptions& guards) {
    const double lam = p.coupling;
    const double lam2 = lam * lam;
    const cplx iu{0.0, 1.0};
    const double p1 = 0.5 * (p_total + s);
    const double pm1 = 0.5 * (p_total - s);

    double s_div = s;
    if (std::abs(s) <= guards.depolarization_eps) {
        if (!guards.clamp)
            throw DepolarizationError("depolarization singularity: |p1 - pm1| = " +
                                      std::to_string(std::abs(s)) + " at or below guard");
        s_div = (s >= 0.0) ? guards.depolarization_eps : -guards.depolarization_eps;
    }

    const cplx w1c = std::conj(w1), w2c = std::conj(w2), yc = std::conj(y);

    CoreDerivative d{};
    d.dB = -iu * (p.omega * B + lam * w1 * w2c * (pm1 - p1));
    d.D = -iu * (p.epsilon * w1 * w2 + lam * (w1 * w1 * std::conj(B) - w2 * w2 * B));
    d.C = 2.0 * iu * p.omega * x * yc;
    d.dnu = 0.0;
    d.ds = 0.0;
    d.im_residual = 0.0;

    if (collisional) {
        auto [I1, I2, I3] = collision_integrals(mem);
        const cplx A1 = w1c * w2 * yc - w1 * w2c * x;
        const cplx A2 = w1c * w1c * yc + w2c * w2c * x;
        const cplx A3 = w1 * w1 * x + w2 * w2 * yc;

        // occupation equations: "expression + c.c.", both halves formed
        // independently so a residual imaginary part flags a transcription slip
        const cplx znu = lam2 * (A1 * I1 + A2 * I2 + A3 * I3);
        const cplx znu_cc = lam2 * (std::conj(A1) * std::conj(I1) + std::conj(A2) * std::conj(I2) +
                                    std::conj(A3) * std::conj(I3));
        const cplx dnu_c = znu + znu_cc;
        const cplx zs = 2.0 * lam2 * (A2 * I2 - A3 * I3);
        const cplx zs_cc = 2.0 * lam2 * (std::conj(A2) * std::conj(I2) - std::conj(A3) * std::conj(I3));
        const cplx ds_c = zs + zs_cc;
        d.dnu = dnu_c.real();
        d.ds = ds_c.real();
        d.im_residual = std::max(std::abs(dnu_c.imag()), std::abs(ds_c.imag()));

        d.D += (lam2 / s_div) *
               (-2.0 * (w1c * w2 * x - w1 * w2c * y) * std::conj(I3) -
                2.0 * (w1 * w2c * x - w1c * w2 * yc) * I2 +
                (w1 * w1 * y + w2 * w2 * x) * std::conj(I1) +
                (w1 * w1 * x + w2 * w2 * yc) * I1);
        d.C += (lam2 / (1.0 + 2.0 * nu)) *
               (-2.0 * A1 * std::conj(I1) + 2.0 * A2 * std::conj(I3) + 2.0 * A3 * std::conj(I2));
    }

    d.dx = -(d.C * y).real();
    d.dy = (d.dx * y - std::conj(d.C)) / x;

    if (collisional) {
        d.FBeta = (std::conj(d.dy) * y).imag() + p.omega * (x * x + std::norm(y));
        d.FAlpha = 0.5 * p.epsilon * (std::norm(w1) - std::norm(w2)) -
                   2.0 * lam * (w1c * w2 * B).real();
        const double n1 = p1 * (1.0 - p1) + pm1 * (1.0 - pm1);
        const double n2 = pm1 * (1.0 - p1) + (pm1 - p1) * nu;
        const double n3 = p1 * (1.0 - pm1) + (p1 - pm1) * nu;
        const cplx c1 = (w1 * w2c * y - w1c * w2 * x) * n1;
        const cplx c2 = (w1 * w1 * y + w2 * w2 * x) * n2;
        const cplx c3 = (w1c * w1c * x + w2c * w2c * y) * n3;
        d.dK1 = c1 * std::exp(iu * mem.PhiBeta);
        d.dK2 = c2 * std::exp(-iu * (2.0 * mem.PhiAlpha + mem.PhiBeta));
        d.dK3 = c3 * std::exp(iu * (2.0 * mem.PhiAlpha - mem.PhiBeta));
    } else {
        d.FBeta = 0.0;
        d.FAlpha = 0.0;
        d.dK1 = d.dK2 = d.dK3 = cplx{0.0, 0.0};
    }
    return d;
}

}  // namespace detail

namespace {

StateDerivative resolve_gauge_fixed(const GaussianState& s, const detail::CoreDerivative& core,
                                    const GuardOptions& guards, bool add_connection) {
    const auto& f = s.fermion;
    double u_div = f.u;
    if (f.u <= guards.gauge_eps) {
        if (!guards.clamp)
            throw GaugeSingularityError("gauge singularity: u = " + std::to_string(f.u) +
                                        " at or below guard");
        u_div = guards.gauge_eps;
    }
    StateDerivative out;
    out.dB = core.dB;
    out.dnu = core.dnu;
    out.ds = core.ds;
    out.dx = core.dx;
    out.dy = core.dy;
    out.du = (core.D * std::conj(f.v)).real();
    out.dv = (out.du * f.v - core.D) / u_div;
    out.dK1 = core.dK1;
    out.dK2 = core.dK2;
    out.dK3 = core.dK3;
    out.dPhiBeta = core.FBeta;
    out.dPhiAlpha = core.FAlpha;
    if (add_connection) out.dPhiAlpha -= (std::conj(out.dv) * f.v).imag();
    out.im_residual = core.im_residual;
    return out;
}

}  // namespace

StateDerivative meanfield_rhs(const GaussianState& s, const ModelParams& p,
                              const GuardOptions& guards) {
    const auto& b = s.boson;
    const auto& f = s.fermion;
    const auto core = detail::core_rhs(b.B, b.nu, b.x, b.y, cplx{f.u, 0.0}, f.v, f.p1 - f.pm1,
                                       f.p1 + f.pm1, MemoryState{}, p, false, guards);
    return resolve_gauge_fixed(s, core, guards, false);
}

StateDerivative collisional_rhs(const GaussianState& s, const MemoryState& mem,
                                const ModelParams& p, const GuardOptions& guards) {
    const auto& b = s.boson;
    const auto& f = s.fermion;
    const auto core = detail::core_rhs(b.B, b.nu, b.x, b.y, cplx{f.u, 0.0}, f.v, f.p1 - f.pm1,
                                       f.p1 + f.pm1, mem, p, true, guards);
    return resolve_gauge_fixed(s, core, guards, true);
}

}  // namespace jcm
