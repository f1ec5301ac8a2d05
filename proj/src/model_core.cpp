#include "jcm/model_core.hpp"

#include <algorithm>
#include <cmath>

namespace jcm {

BosonTriple boson_diagonalize(const ExtendedBosonDensity& d, double tol) {
    if (!(std::isfinite(d.R) && std::isfinite(d.Pi.real()) && std::isfinite(d.Pi.imag())))
        throw PhysicalityError("boson density not finite");
    if (d.R < -tol)
        throw PhysicalityError("boson occupation <d†d> negative");
    const double disc = (1.0 + 2.0 * d.R) * (1.0 + 2.0 * d.R) - 4.0 * std::norm(d.Pi);
    if (disc < 1.0 - 10.0 * tol)
        throw PhysicalityError("boson density unphysical: implied nu < 0");
    const double nu = std::max(0.0, 0.5 * (std::sqrt(std::max(disc, 0.0)) - 1.0));
    const double occ = 1.0 + 2.0 * nu;
    const double y2 = std::max(0.0, (d.R - nu) / occ);
    const double x = std::sqrt(1.0 + y2);
    // <dd> = -x conj(y) (1+2nu)
    cplx y{0.0, 0.0};
    if (std::abs(d.Pi) > 0.0) y = -std::conj(d.Pi) / (x * occ);
    return {nu, x, y};
}

ExtendedBosonDensity boson_reconstruct(double nu, double x, const cplx& y, double tol) {
    if (nu < -tol) throw PhysicalityError("nu negative");
    if (x < 1.0 - tol) throw PhysicalityError("x below 1");
    if (std::abs(x * x - std::norm(y) - 1.0) > tol)
        throw PhysicalityError("boson constraint x^2 - |y|^2 = 1 violated");
    const double occ = 1.0 + 2.0 * nu;
    return {nu + std::norm(y) * occ, -x * std::conj(y) * occ};
}

FermionQuad fermion_diagonalize(const ExtendedFermionDensity& d, double tol) {
    const double m = 0.5 * (d.R11 + d.Rmm);
    const double h = 0.5 * (d.R11 - d.Rmm);
    const double r = std::sqrt(h * h + std::norm(d.R1m));
    if (m + r > 1.0 + tol || m - r < -tol)
        throw PhysicalityError("fermion density eigenvalue outside [0,1]");
    if (r < tol) return {m, m, 1.0, {0.0, 0.0}};
    const double sgn = (h >= 0.0) ? 1.0 : -1.0;
    const double p1 = std::clamp(m + sgn * r, 0.0, 1.0);
    const double pm1 = std::clamp(m - sgn * r, 0.0, 1.0);
    // Eigenvector of the one-body matrix for p1 is (u, -v); the branch with
    // first component h + sgn*r dominates the overlap with e1.
    const cplx xi1{h + sgn * r, 0.0};
    const cplx xi2 = std::conj(d.R1m);
    const double n = std::sqrt(std::norm(xi1) + std::norm(xi2));
    const double u = std::abs(xi1) / n;
    // rotate so the first component is real positive, then v = -second
    const cplx phase = (std::abs(xi1) > 0.0) ? std::conj(xi1) / std::abs(xi1) : cplx{1.0, 0.0};
    const cplx v = -phase * xi2 / n;
    return {p1, pm1, u, v};
}

ExtendedFermionDensity fermion_reconstruct(double p1, double pm1, double u, const cplx& v,
                                           double tol) {
    if (p1 < -tol || p1 > 1.0 + tol || pm1 < -tol || pm1 > 1.0 + tol)
        throw PhysicalityError("occupation outside [0,1]");
    if (std::abs(u * u + std::norm(v) - 1.0) > tol)
        throw PhysicalityError("fermion constraint u^2 + |v|^2 = 1 violated");
    const double vv = std::norm(v);
    return {u * u * p1 + vv * pm1, vv * p1 + u * u * pm1, u * std::conj(v) * (pm1 - p1)};
}

void validate_state(const GaussianState& s, double tol) {
    const auto& b = s.boson;
    const auto& f = s.fermion;
    if (std::abs(b.x * b.x - std::norm(b.y) - 1.0) > tol)
        throw PhysicalityError("boson constraint x^2 - |y|^2 = 1 violated");
    if (b.nu < -tol) throw PhysicalityError("nu negative beyond tolerance");
    if (b.x < 1.0 - tol) throw PhysicalityError("x below 1");
    if (std::abs(f.u * f.u + std::norm(f.v) - 1.0) > tol)
        throw PhysicalityError("fermion constraint u^2 + |v|^2 = 1 violated");
    if (f.u < -tol) throw PhysicalityError("u negative");
    if (f.p1 < -tol || f.p1 > 1.0 + tol || f.pm1 < -tol || f.pm1 > 1.0 + tol)
        throw PhysicalityError("occupation outside [0,1]");
}

Observables observables(const GaussianState& s, const ModelParams& p, double time) {
    const auto& b = s.boson;
    const auto& f = s.fermion;
    const double sp = f.p1 - f.pm1;
    Observables o;
    o.time = time;
    o.sigma3 = sp * (f.u * f.u - std::norm(f.v));
    o.sigmaP = sp;
    o.photon = std::norm(b.B) + b.nu + std::norm(b.y) * (1.0 + 2.0 * b.nu);
    const cplx inter = f.u * f.v * (f.pm1 - f.p1) * b.B;
    o.energyMF = 0.5 * p.epsilon * o.sigma3 + p.omega * o.photon +
                 p.coupling * (inter + std::conj(inter)).real();
    return o;
}

}  // namespace jcm
