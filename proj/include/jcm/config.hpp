#pragma once

#include <string>
#include <string_view>

#include "jcm/dynamics.hpp"
#include "jcm/integrator.hpp"
#include "jcm/types.hpp"

namespace jcm {

enum class RunMode { exact, meanfield, collisional, compare };

std::string to_string(RunMode mode);
std::string to_string(Method method);
RunMode run_mode_from_string(std::string_view name);

struct RunConfig {
    ModelParams params;
    cplx B0{5.0, 0.0};
    double nu0 = 0.0;
    double x0 = 1.0;
    cplx y0;
    double u0 = 1.0;
    cplx v0;
    double p1_0 = 1.0;
    double pm1_0 = 0.0;
    IntegratorOptions integrator{.record_every = 10};
    int n_max = 0;  // 0 requests the Poisson-tail default
    RunMode mode = RunMode::compare;
    std::string output = ".";
    GuardOptions guards;

    GaussianState initial_state() const;
    // whether the truncated-Fock oracle can represent the initial state
    bool coherent_excited() const;
};

// Line-oriented key=value text; '#' starts a comment, complex values are
// "re,im", later assignments win. Empty input yields the default run.
RunConfig parse_config(std::string_view text);

}  // namespace jcm
