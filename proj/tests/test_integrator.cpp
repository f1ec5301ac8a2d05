#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jcm/integrator.hpp"
#include "jcm/model_core.hpp"
#include "test_util.hpp"

using namespace jcm;

namespace {

GaussianState default_initial() {
    GaussianState s;
    s.boson.B = {5.0, 0.0};
    return s;
}

double constraint_drift(const Trajectory& tr) {
    double m = 0.0;
    for (const auto& smp : tr.samples) {
        const auto& b = smp.state.boson;
        const auto& f = smp.state.fermion;
        m = std::max(m, std::abs(b.x * b.x - std::norm(b.y) - 1.0));
        m = std::max(m, std::abs(f.u * f.u + std::norm(f.v) - 1.0));
    }
    return m;
}

}  // namespace

TEST_CASE("options are validated") {
    IntegratorOptions o;
    o.dt = 0.0;
    CHECK_THROWS_AS(o.validate(), IntegrationError);
    o = {};
    o.record_every = 0;
    CHECK_THROWS_AS(o.validate(), IntegrationError);
    o = {};
    o.t_max = 5e-4;
    CHECK_THROWS_AS(o.validate(), IntegrationError);
    o = {};
    o.rel_tol = -1.0;
    CHECK_THROWS_AS(o.validate(), IntegrationError);
}

TEST_CASE("free field evolution is a pure rotation") {
    ModelParams p;
    p.coupling = 0.0;
    IntegratorOptions o;
    o.t_max = 2.0 * M_PI;
    o.record_every = 100;
    const auto tr = integrate(default_initial(), p, DynamicsMode::meanfield, o);
    const auto& last = tr.samples.back().state;
    CHECK(std::abs(last.boson.B - cplx{5.0, 0.0}) < 1e-8);
    CHECK(last.fermion.u == 1.0);
    CHECK(std::abs(last.fermion.v) == 0.0);
    CHECK(last.boson.x == 1.0);
    CHECK(std::abs(last.boson.y) == 0.0);
    CHECK(last.boson.nu == 0.0);
    // |B| stays on the circle the whole way
    for (const auto& s : tr.samples) CHECK(std::abs(std::abs(s.state.boson.B) - 5.0) < 1e-8);
}

TEST_CASE("trajectory bookkeeping") {
    IntegratorOptions o;
    o.t_max = 1.0;
    o.record_every = 10;
    const auto tr = integrate(default_initial(), ModelParams{}, DynamicsMode::meanfield, o);
    CHECK(tr.samples.size() == 101);
    CHECK(tr.samples.front().t == 0.0);
    for (size_t k = 1; k < tr.samples.size(); ++k)
        CHECK(tr.samples[k].t > tr.samples[k - 1].t);
    CHECK(std::abs(tr.samples.back().t - 1.0) < 1e-12);
}

TEST_CASE("mean-field run keeps polarization and occupations frozen") {
    IntegratorOptions o;
    o.t_max = 12.0;
    o.record_every = 10;
    const auto tr = integrate(default_initial(), ModelParams{}, DynamicsMode::meanfield, o);
    for (const auto& s : tr.samples) {
        CHECK(s.obs.sigmaP == 1.0);
        CHECK(s.state.boson.nu == 0.0);
        CHECK(s.state.fermion.p1 == 1.0);
        CHECK(s.state.fermion.pm1 == 0.0);
    }
    CHECK(tr.max_im_residual == 0.0);
}

TEST_CASE("mean-field trajectory crosses the gauge pole unharmed") {
    IntegratorOptions o;
    o.t_max = 2.0;
    o.record_every = 1;
    const auto tr = integrate(default_initial(), ModelParams{}, DynamicsMode::meanfield, o);
    double umin = 1.0;
    for (const auto& s : tr.samples) {
        umin = std::min(umin, s.state.fermion.u);
        CHECK_NOTHROW(validate_state(s.state, 1e-9));
        CHECK(s.state.fermion.u >= 0.0);
    }
    // the Rabi cycle swings the atom through the fully flipped configuration
    CHECK(umin < 0.02);
}

TEST_CASE("collisional run depolarizes from the start") {
    IntegratorOptions o;
    o.t_max = 12.0;
    o.record_every = 10;
    const auto tr = integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, o);
    CHECK(tr.samples.front().obs.sigmaP == 1.0);
    // Depolarization over the first Rabi period is a falling trend, not a
    // pointwise-monotone curve: a sub-1e-3 plateau appears at the half-period
    // turning point. Require every post-initial sample below 1 and a falling
    // trend with cumulative upticks well below the net drop.
    const double period = 2.0 * std::numbers::pi / std::sqrt(26.0);
    double prev = 1.0;
    double rise = 0.0;
    double sp_end = 1.0;
    for (const auto& s : tr.samples) {
        if (s.t == 0.0) continue;
        CHECK(s.obs.sigmaP < 1.0);
        if (s.t <= period) {
            rise += std::max(0.0, s.obs.sigmaP - prev);
            prev = s.obs.sigmaP;
            sp_end = s.obs.sigmaP;
        }
    }
    const double drop = 1.0 - sp_end;
    CHECK(drop > 1e-3);
    CHECK(rise < 0.01 * drop);
    CHECK(tr.max_im_residual <= 1e-10);

    // excitation number is an invariant the collisional terms must respect
    const auto& o0 = tr.samples.front().obs;
    const double N0 = o0.photon + 0.5 * (o0.sigma3 + 1.0);
    for (const auto& s : tr.samples)
        CHECK(std::abs(s.obs.photon + 0.5 * (s.obs.sigma3 + 1.0) - N0) < 1e-8);
}

TEST_CASE("identical runs are bit identical") {
    IntegratorOptions o;
    o.t_max = 3.0;
    o.record_every = 25;
    const auto a = integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, o);
    const auto b = integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, o);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(a.samples[k].obs.sigma3 == b.samples[k].obs.sigma3);
        CHECK(a.samples[k].obs.sigmaP == b.samples[k].obs.sigmaP);
        CHECK(a.samples[k].state.boson.B == b.samples[k].state.boson.B);
        CHECK(a.samples[k].mem.K3 == b.samples[k].mem.K3);
    }
}

TEST_CASE("constraint drift without projection scales like dt^4") {
    IntegratorOptions o;
    o.renormalize = false;
    o.t_max = 2.0;
    o.record_every = 1;
    o.dt = 2e-2;
    const double coarse =
        constraint_drift(integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, o));
    o.dt = 1e-2;
    const double fine =
        constraint_drift(integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, o));
    CHECK(coarse > 1e-10);
    CHECK(coarse / fine > 8.0);
    CHECK(coarse / fine < 40.0);
}

TEST_CASE("mean-field energy is conserved to integrator accuracy") {
    IntegratorOptions o;
    o.t_max = 50.0;
    o.record_every = 50;
    const auto tr = integrate(default_initial(), ModelParams{}, DynamicsMode::meanfield, o);
    const double e0 = tr.samples.front().obs.energyMF;
    double drift = 0.0;
    for (const auto& s : tr.samples) drift = std::max(drift, std::abs(s.obs.energyMF - e0));
    CHECK(drift < 1e-7);
}

TEST_CASE("adaptive and fixed step agree across methods") {
    IntegratorOptions fixed;
    fixed.dt = 1e-4;
    fixed.record_every = 1000;
    fixed.t_max = 5.0;
    const auto a = integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, fixed);

    IntegratorOptions adaptive;
    adaptive.method = Method::rk45_adaptive;
    adaptive.dt = 1e-3;
    adaptive.record_every = 100;
    adaptive.rel_tol = 1e-10;
    adaptive.abs_tol = 1e-12;
    adaptive.t_max = 5.0;
    const auto b = integrate(default_initial(), ModelParams{}, DynamicsMode::collisional, adaptive);

    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t k = 0; k < a.samples.size(); ++k) {
        REQUIRE(std::abs(a.samples[k].t - b.samples[k].t) < 1e-12);
        CHECK(std::abs(a.samples[k].obs.sigma3 - b.samples[k].obs.sigma3) < 1e-7);
        CHECK(std::abs(a.samples[k].obs.sigmaP - b.samples[k].obs.sigmaP) < 1e-7);
    }
}

TEST_CASE("failure time is attached to propagated errors") {
    GaussianState s = default_initial();
    s.fermion.p1 = s.fermion.pm1 = 0.5;
    IntegratorOptions o;
    o.t_max = 1.0;
    try {
        integrate(s, ModelParams{}, DynamicsMode::collisional, o);
        FAIL("expected a depolarization error");
    } catch (const DepolarizationError& e) {
        CHECK(e.has_time());
        CHECK(e.time() == 0.0);
    }
}

TEST_CASE("convergence probe") {
    SUBCASE("decoupled case sits at rounding level") {
        ModelParams p;
        p.coupling = 0.0;
        IntegratorOptions base;
        base.t_max = 2.0;
        const auto table = convergence_probe(default_initial(), p, DynamicsMode::meanfield,
                                             {4e-3, 2e-3, 1e-3}, base);
        for (const auto& row : table.rows) CHECK(row.error < 1e-12);
    }
    SUBCASE("fixed-step rk4 shows fourth order") {
        IntegratorOptions base;
        base.t_max = 3.0;
        const auto table = convergence_probe(default_initial(), ModelParams{},
                                             DynamicsMode::collisional, {4e-3, 2e-3, 5e-4}, base);
        REQUIRE(table.rows.size() == 2);
        REQUIRE(table.observed_orders.size() == 1);
        CHECK(table.observed_orders[0] > 3.5);
        CHECK(table.observed_orders[0] < 4.5);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(convergence_probe(default_initial(), ModelParams{},
                                          DynamicsMode::meanfield, {1e-3, 2e-3}),
                        IntegrationError);
        CHECK_THROWS_AS(
            convergence_probe(default_initial(), ModelParams{}, DynamicsMode::meanfield, {1e-3}),
            IntegrationError);
    }
}
