#include "jcm/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "jcm/model_core.hpp"

namespace jcm {

void IntegratorOptions::validate() const {
    if (!(dt >= 1e-10)) throw IntegrationError("dt must be at least 1e-10");
    if (!(t_max > dt)) throw IntegrationError("t_max must exceed dt");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw IntegrationError("adaptive tolerances must be positive");
    if (record_every < 1) throw IntegrationError("record_every must be >= 1");
}

namespace {

// state packing: B, nu, (x, y), spinor (w1, w2), s, K1..K3, PhiBeta, PhiAlpha
constexpr int kDim = 19;
using Packed = std::array<double, kDim>;

struct System {
    ModelParams params;
    double p_total;
    bool collisional;
    GuardOptions guards;
    mutable double max_im_residual = 0.0;
};

Packed pack(const GaussianState& g) {
    Packed y{};
    y[0] = g.boson.B.real();
    y[1] = g.boson.B.imag();
    y[2] = g.boson.nu;
    y[3] = g.boson.x;
    y[4] = g.boson.y.real();
    y[5] = g.boson.y.imag();
    y[6] = g.fermion.u;
    y[7] = 0.0;
    y[8] = g.fermion.v.real();
    y[9] = g.fermion.v.imag();
    y[10] = g.fermion.p1 - g.fermion.pm1;
    return y;
}

Packed rhs(const System& sys, const Packed& y) {
    const cplx B{y[0], y[1]};
    const cplx yy{y[4], y[5]};
    const cplx w1{y[6], y[7]};
    const cplx w2{y[8], y[9]};
    MemoryState mem;
    mem.K1 = {y[11], y[12]};
    mem.K2 = {y[13], y[14]};
    mem.K3 = {y[15], y[16]};
    mem.PhiBeta = y[17];
    mem.PhiAlpha = y[18];
    const auto d = detail::core_rhs(B, y[2], y[3], yy, w1, w2, y[10], sys.p_total, mem,
                                    sys.params, sys.collisional, sys.guards);
    sys.max_im_residual = std::max(sys.max_im_residual, d.im_residual);
    const cplx dw1 = d.D * std::conj(w2);
    const cplx dw2 = -d.D * std::conj(w1);
    Packed out{};
    out[0] = d.dB.real();
    out[1] = d.dB.imag();
    out[2] = d.dnu;
    out[3] = d.dx;
    out[4] = d.dy.real();
    out[5] = d.dy.imag();
    out[6] = dw1.real();
    out[7] = dw1.imag();
    out[8] = dw2.real();
    out[9] = dw2.imag();
    out[10] = d.ds;
    out[11] = d.dK1.real();
    out[12] = d.dK1.imag();
    out[13] = d.dK2.real();
    out[14] = d.dK2.imag();
    out[15] = d.dK3.real();
    out[16] = d.dK3.imag();
    out[17] = d.FBeta;
    out[18] = d.FAlpha;
    return out;
}

Packed axpy(const Packed& y, double h, const Packed& d) {
    Packed out;
    for (int i = 0; i < kDim; ++i) out[i] = y[i] + h * d[i];
    return out;
}

void project(Packed& y, double p_total) {
    const double cb = std::sqrt(y[3] * y[3] - y[4] * y[4] - y[5] * y[5]);
    if (!(cb > 0.0)) throw IntegrationError("boson constraint collapsed during projection");
    y[3] /= cb;
    y[4] /= cb;
    y[5] /= cb;
    const double cf =
        std::sqrt(y[6] * y[6] + y[7] * y[7] + y[8] * y[8] + y[9] * y[9]);
    if (!(cf > 0.0)) throw IntegrationError("fermion norm collapsed during projection");
    for (int i = 6; i <= 9; ++i) y[i] /= cf;
    y[2] = std::max(y[2], 0.0);
    const double s_hi = std::min(p_total, 2.0 - p_total);
    y[10] = std::clamp(y[10], -s_hi, s_hi);
}

void rk4_step(const System& sys, Packed& y, double h) {
    const Packed k1 = rhs(sys, y);
    const Packed k2 = rhs(sys, axpy(y, 0.5 * h, k1));
    const Packed k3 = rhs(sys, axpy(y, 0.5 * h, k2));
    const Packed k4 = rhs(sys, axpy(y, h, k3));
    for (int i = 0; i < kDim; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Dormand-Prince 5(4); returns scaled error estimate of the attempted step
double dopri_step(const System& sys, const Packed& y, double h, Packed& y5,
                  double rel_tol, double abs_tol) {
    const Packed k1 = rhs(sys, y);
    const Packed k2 = rhs(sys, axpy(y, h / 5.0, k1));
    Packed tmp;
    for (int i = 0; i < kDim; ++i) tmp[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i]);
    const Packed k3 = rhs(sys, tmp);
    for (int i = 0; i < kDim; ++i)
        tmp[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i]);
    const Packed k4 = rhs(sys, tmp);
    for (int i = 0; i < kDim; ++i)
        tmp[i] = y[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i] +
                             64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i]);
    const Packed k5 = rhs(sys, tmp);
    for (int i = 0; i < kDim; ++i)
        tmp[i] = y[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i] +
                             46732.0 / 5247.0 * k3[i] + 49.0 / 176.0 * k4[i] -
                             5103.0 / 18656.0 * k5[i]);
    const Packed k6 = rhs(sys, tmp);
    for (int i = 0; i < kDim; ++i)
        y5[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] +
                            125.0 / 192.0 * k4[i] - 2187.0 / 6784.0 * k5[i] +
                            11.0 / 84.0 * k6[i]);
    const Packed k7 = rhs(sys, y5);
    double e2 = 0.0;
    for (int i = 0; i < kDim; ++i) {
        const double y4i = y[i] + h * (5179.0 / 57600.0 * k1[i] + 7571.0 / 16695.0 * k3[i] +
                                       393.0 / 640.0 * k4[i] - 92097.0 / 339200.0 * k5[i] +
                                       187.0 / 2100.0 * k6[i] + 1.0 / 40.0 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        const double e = (y5[i] - y4i) / sc;
        e2 += e * e;
    }
    return std::sqrt(e2 / kDim);
}

TrajectorySample to_sample(const Packed& y, double t, const ModelParams& params,
                           double p_total) {
    GaussianState g;
    g.boson.B = {y[0], y[1]};
    g.boson.nu = y[2];
    g.boson.x = y[3];
    g.boson.y = {y[4], y[5]};
    const cplx w1{y[6], y[7]};
    const cplx w2{y[8], y[9]};
    const double u = std::abs(w1);
    const double chi = std::arg(w1);
    g.fermion.u = u;
    g.fermion.v = w2 * std::polar(1.0, -chi);
    g.fermion.p1 = 0.5 * (p_total + y[10]);
    g.fermion.pm1 = 0.5 * (p_total - y[10]);
    MemoryState mem;
    mem.K1 = {y[11], y[12]};
    mem.K2 = {y[13], y[14]};
    mem.K3 = {y[15], y[16]};
    mem.PhiBeta = y[17];
    // accumulated phase converted from the transport gauge; the branch of
    // arg only shifts PhiAlpha by multiples of pi, invisible to every
    // e^{2i PhiAlpha} consumer
    mem.PhiAlpha = y[18] - chi;
    return {t, g, mem, observables(g, params, t)};
}

}  // namespace

Trajectory integrate(const GaussianState& initial, const ModelParams& params, DynamicsMode mode,
                     const IntegratorOptions& opts, const GuardOptions& guards,
                     const SampleSink& on_sample) {
    opts.validate();
    validate_state(initial);
    System sys{params, initial.fermion.p1 + initial.fermion.pm1,
               mode == DynamicsMode::collisional, guards, 0.0};
    Packed y = pack(initial);

    Trajectory traj;
    traj.params = params;
    traj.mode = mode;
    auto record = [&](double t_rec) {
        traj.samples.push_back(to_sample(y, t_rec, params, sys.p_total));
        if (on_sample) on_sample(traj.samples.back());
    };
    record(0.0);

    // record times are j*h_rec for both methods so that runs sharing options
    // land on bitwise-identical grids
    const double h_rec = opts.dt * opts.record_every;
    const long n_rec = static_cast<long>(std::ceil(opts.t_max / h_rec - 1e-9));
    double t = 0.0;
    double h = opts.dt;
    try {
        for (long j = 0; j < n_rec; ++j) {
            const double t_goal = std::min((j + 1) * h_rec, opts.t_max);
            while (t < t_goal - 1e-12) {
                if (opts.method == Method::rk4_fixed) {
                    const double h_step = std::min(opts.dt, t_goal - t);
                    rk4_step(sys, y, h_step);
                    t += h_step;
                    if (opts.renormalize) project(y, sys.p_total);
                } else {
                    const double h_try = std::min(h, t_goal - t);
                    Packed y_new;
                    const double err = dopri_step(sys, y, h_try, y_new, opts.rel_tol, opts.abs_tol);
                    if (err <= 1.0) {
                        y = y_new;
                        t += h_try;
                        if (opts.renormalize) project(y, sys.p_total);
                    }
                    const double fac =
                        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
                    h = h_try * fac;
                    if (h < 1e-14 * std::max(1.0, std::abs(t)))
                        throw IntegrationError("adaptive step size underflow");
                }
            }
            t = t_goal;
            record(t);
        }
    } catch (JcmError& e) {
        e.set_time(t);
        traj.max_im_residual = sys.max_im_residual;
        throw;
    }
    traj.max_im_residual = sys.max_im_residual;
    return traj;
}

ConvergenceTable convergence_probe(const GaussianState& initial, const ModelParams& params,
                                   DynamicsMode mode, const std::vector<double>& dt_list,
                                   const IntegratorOptions& base, const GuardOptions& guards) {
    if (dt_list.size() < 2)
        throw IntegrationError("convergence probe needs at least two step sizes");
    for (size_t i = 1; i < dt_list.size(); ++i)
        if (!(dt_list[i] < dt_list[i - 1]))
            throw IntegrationError("dt list must be strictly descending");

    auto final_sigma3 = [&](double dt) {
        IntegratorOptions o = base;
        o.dt = dt;
        o.method = Method::rk4_fixed;
        o.record_every = std::max(1, static_cast<int>(std::ceil(o.t_max / dt - 1e-9)));
        const auto traj = integrate(initial, params, mode, o, guards);
        return traj.samples.back().obs.sigma3;
    };

    ConvergenceTable table;
    table.reference_dt = dt_list.back();
    const double ref = final_sigma3(table.reference_dt);
    for (size_t i = 0; i + 1 < dt_list.size(); ++i)
        table.rows.push_back({dt_list[i], std::abs(final_sigma3(dt_list[i]) - ref)});
    for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const auto& a = table.rows[i];
        const auto& b = table.rows[i + 1];
        if (b.error > 0.0 && a.error > 0.0)
            table.observed_orders.push_back(std::log(a.error / b.error) /
                                            std::log(a.dt / b.dt));
        else
            table.observed_orders.push_back(std::nan(""));
    }
    return table;
}

}  // namespace jcm
