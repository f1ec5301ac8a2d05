#pragma once

#include <functional>
#include <vector>

#include "jcm/dynamics.hpp"
#include "jcm/types.hpp"

namespace jcm {

enum class Method { rk4_fixed, rk45_adaptive };
enum class DynamicsMode { meanfield, collisional };

struct IntegratorOptions {
    double dt = 1e-3;
    double t_max = 12.0;
    Method method = Method::rk4_fixed;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    bool renormalize = true;
    int record_every = 1;

    void validate() const;
};

struct TrajectorySample {
    double t;
    GaussianState state;
    MemoryState mem;
    Observables obs;
};

struct Trajectory {
    ModelParams params;
    DynamicsMode mode = DynamicsMode::meanfield;
    std::vector<TrajectorySample> samples;
    // diagnostics accumulated over every RHS evaluation of the run
    double max_im_residual = 0.0;
};

using SampleSink = std::function<void(const TrajectorySample&)>;

// Propagates the coupled (state, memory) system from t=0 with memory zero.
// Internally the fermion pair is carried as a parallel-transported spinor so
// that trajectories cross the u=0 gauge pole smoothly; recorded samples are
// converted back to the u-real-nonnegative gauge. When a sink is given each
// recorded sample is also handed to it immediately, so callers keep the
// already-recorded part of an aborted run.
Trajectory integrate(const GaussianState& initial, const ModelParams& params, DynamicsMode mode,
                     const IntegratorOptions& opts, const GuardOptions& guards = {},
                     const SampleSink& on_sample = {});

struct ConvergenceRow {
    double dt;
    double error;  // |sigma3(t_max) - reference|
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;       // one per dt except the reference
    std::vector<double> observed_orders;    // between consecutive rows
    double reference_dt = 0.0;
};

// Fixed-step rk4 global-error probe: dt_list descending, the last entry is
// the reference solution.
ConvergenceTable convergence_probe(const GaussianState& initial, const ModelParams& params,
                                   DynamicsMode mode, const std::vector<double>& dt_list,
                                   const IntegratorOptions& base = {},
                                   const GuardOptions& guards = {});

}  // namespace jcm
