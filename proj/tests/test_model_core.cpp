#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "jcm/model_core.hpp"
#include "test_util.hpp"

using namespace jcm;
using test::crand;
using test::random_state;
using test::urand;

namespace {
bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
bool close(const cplx& a, const cplx& b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("boson_diagonalize fixed points") {
    const auto vac = boson_diagonalize({0.0, {0.0, 0.0}});
    CHECK(vac.nu == 0.0);
    CHECK(vac.x == 1.0);
    CHECK(vac.y == cplx{0.0, 0.0});

    const auto th = boson_diagonalize({0.3, {0.0, 0.0}});
    CHECK(close(th.nu, 0.3));
    CHECK(close(th.x, 1.0));
    CHECK(close(th.y, {0.0, 0.0}));
}

TEST_CASE("boson_diagonalize squeezed state") {
    const double s = 0.5;
    const double sh = std::sinh(s), ch = std::cosh(s);
    const auto t = boson_diagonalize({sh * sh, {-ch * sh, 0.0}});
    CHECK(close(t.nu, 0.0, 1e-12));
    CHECK(close(t.x, ch));
    CHECK(close(t.y, {sh, 0.0}));
    const auto back = boson_reconstruct(t.nu, t.x, t.y);
    CHECK(close(back.R, sh * sh));
    CHECK(close(back.Pi, {-ch * sh, 0.0}));
}

TEST_CASE("boson_reconstruct basics") {
    const auto vac = boson_reconstruct(0.0, 1.0, {0.0, 0.0});
    CHECK(vac.R == 0.0);
    CHECK(vac.Pi == cplx{0.0, 0.0});
    const auto th = boson_reconstruct(1.0, 1.0, {0.0, 0.0});
    CHECK(close(th.R, 1.0));
    CHECK(close(th.Pi, {0.0, 0.0}));
}

TEST_CASE("boson round trip on random physical inputs") {
    for (int i = 0; i < 200; ++i) {
        const double nu = urand(0.0, 3.0);
        const cplx y = crand(2.0);
        const double x = std::sqrt(1.0 + std::norm(y));
        const auto d = boson_reconstruct(nu, x, y);
        CHECK(d.R >= 0.0);
        CHECK((1.0 + 2.0 * d.R) * (1.0 + 2.0 * d.R) - 4.0 * std::norm(d.Pi) >= 1.0 - 1e-9);
        const auto t = boson_diagonalize(d);
        CHECK(close(t.nu, nu, 1e-10));
        CHECK(close(t.x, x, 1e-12));
        CHECK(close(t.y, y, 1e-10));
    }
}

TEST_CASE("boson_diagonalize rejects unphysical input") {
    CHECK_THROWS_AS(boson_diagonalize({-1.0, {0.0, 0.0}}), PhysicalityError);
    // |<dd>| too large for the occupation
    CHECK_THROWS_AS(boson_diagonalize({0.1, {0.5, 0.0}}), PhysicalityError);
    CHECK_THROWS_AS(boson_reconstruct(0.0, 2.0, {0.0, 0.0}), PhysicalityError);
}

TEST_CASE("fermion_diagonalize examples") {
    const auto ex = fermion_diagonalize({1.0, 0.0, {0.0, 0.0}});
    CHECK(ex.p1 == 1.0);
    CHECK(ex.pm1 == 0.0);
    CHECK(ex.u == 1.0);
    CHECK(ex.v == cplx{0.0, 0.0});

    // pure superposition density: eigenvalues (1, 0), eigenvector (1,1)/sqrt2.
    // The u-real gauge then forces v = -1/sqrt2 (reconstruction fixes the
    // relative sign of u and v).
    const auto sup = fermion_diagonalize({0.5, 0.5, {0.5, 0.0}});
    CHECK(close(sup.p1, 1.0));
    CHECK(close(sup.pm1, 0.0));
    CHECK(close(sup.u, 1.0 / std::sqrt(2.0)));
    CHECK(close(sup.v, {-1.0 / std::sqrt(2.0), 0.0}));
    const auto back = fermion_reconstruct(sup.p1, sup.pm1, sup.u, sup.v);
    CHECK(close(back.R11, 0.5));
    CHECK(close(back.Rmm, 0.5));
    CHECK(close(back.R1m, {0.5, 0.0}));

    // degenerate density: documented tie-break
    const auto deg = fermion_diagonalize({0.5, 0.5, {0.0, 0.0}});
    CHECK(deg.p1 == 0.5);
    CHECK(deg.pm1 == 0.5);
    CHECK(deg.u == 1.0);
    CHECK(deg.v == cplx{0.0, 0.0});
}

TEST_CASE("fermion_diagonalize rejects unphysical input") {
    CHECK_THROWS_AS(fermion_diagonalize({1.5, 0.0, {0.0, 0.0}}), PhysicalityError);
    CHECK_THROWS_AS(fermion_diagonalize({0.5, 0.5, {0.9, 0.0}}), PhysicalityError);
    CHECK_THROWS_AS(fermion_reconstruct(0.5, 0.5, 0.9, {0.9, 0.0}), PhysicalityError);
}

TEST_CASE("fermion density round trip on random inputs") {
    for (int i = 0; i < 200; ++i) {
        const double p1 = urand(0.0, 1.0);
        const double pm1 = urand(0.0, 1.0);
        const double u = urand(0.0, 1.0);
        const cplx v = std::polar(std::sqrt(1.0 - u * u), urand(0.0, 2.0 * M_PI));
        const auto d = fermion_reconstruct(p1, pm1, u, v);
        const auto q = fermion_diagonalize(d);
        const auto back = fermion_reconstruct(q.p1, q.pm1, q.u, q.v);
        CHECK(close(back.R11, d.R11, 1e-12));
        CHECK(close(back.Rmm, d.Rmm, 1e-12));
        CHECK(close(back.R1m, d.R1m, 1e-12));
        CHECK(q.u >= 0.0);
        CHECK(close(q.u * q.u + std::norm(q.v), 1.0, 1e-12));
    }
}

TEST_CASE("fermion parameter recovery away from the overlap boundary") {
    // when u^2 > 1/2 the p1 eigenvector stays closest to the first basis
    // vector, so the labels themselves round-trip
    for (int i = 0; i < 100; ++i) {
        const double p1 = urand(0.55, 1.0);
        const double pm1 = urand(0.0, 0.45);
        const double u = urand(0.75, 1.0);
        const cplx v = std::polar(std::sqrt(1.0 - u * u), urand(0.0, 2.0 * M_PI));
        const auto q = fermion_diagonalize(fermion_reconstruct(p1, pm1, u, v));
        CHECK(close(q.p1, p1, 1e-10));
        CHECK(close(q.pm1, pm1, 1e-10));
        CHECK(close(q.u, u, 1e-10));
        CHECK(close(q.v, v, 1e-10));
    }
}

TEST_CASE("validate_state accepts and rejects") {
    GaussianState s;  // defaults encode the excited-atom vacuum-field state
    s.boson.B = {5.0, 0.0};
    CHECK_NOTHROW(validate_state(s));

    GaussianState bad = s;
    bad.boson.x = 1.5;  // x^2 - |y|^2 != 1
    CHECK_THROWS_AS(validate_state(bad), PhysicalityError);
    bad = s;
    bad.boson.nu = -1e-3;
    CHECK_THROWS_AS(validate_state(bad), PhysicalityError);
    bad = s;
    bad.fermion.v = {0.5, 0.0};
    CHECK_THROWS_AS(validate_state(bad), PhysicalityError);
    bad = s;
    bad.fermion.p1 = 1.2;
    CHECK_THROWS_AS(validate_state(bad), PhysicalityError);
}

TEST_CASE("observables at the default initial state") {
    GaussianState s;
    s.boson.B = {5.0, 0.0};
    const ModelParams p{};  // epsilon = omega = 1, coupling = 0.5
    const auto o = observables(s, p);
    CHECK(o.sigma3 == 1.0);
    CHECK(o.sigmaP == 1.0);
    CHECK(o.photon == 25.0);
    CHECK(close(o.energyMF, 25.5));
}

TEST_CASE("observables vanish at full depolarization") {
    GaussianState s = random_state();
    s.fermion.p1 = s.fermion.pm1 = 0.4;
    const auto o = observables(s, ModelParams{});
    CHECK(o.sigma3 == 0.0);
    CHECK(o.sigmaP == 0.0);
}

TEST_CASE("observable bounds on random states") {
    for (int i = 0; i < 200; ++i) {
        const auto s = random_state();
        const auto o = observables(s, ModelParams{});
        CHECK(std::abs(o.sigma3) <= o.sigmaP + 1e-12);
        CHECK(o.sigmaP <= 1.0 + 1e-9);
        CHECK(o.photon >= 0.0);
    }
}

TEST_CASE("observables are U(1) invariant") {
    const ModelParams p{};
    for (int i = 0; i < 100; ++i) {
        const auto s = random_state();
        const double chi = urand(-3.0, 3.0);
        GaussianState r = s;
        r.boson.B *= std::polar(1.0, -chi);
        r.fermion.v *= std::polar(1.0, chi);
        r.boson.y *= std::polar(1.0, 2.0 * chi);
        const auto a = observables(s, p);
        const auto b = observables(r, p);
        CHECK(close(a.sigma3, b.sigma3));
        CHECK(close(a.sigmaP, b.sigmaP));
        CHECK(close(a.photon, b.photon, 1e-11));
        CHECK(close(a.energyMF, b.energyMF, 1e-11));
    }
}
