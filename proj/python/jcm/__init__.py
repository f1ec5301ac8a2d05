"""Jaynes-Cummings dynamics: exact oracle, mean-field, and collisional-memory
corrections. Thin wrapper over the C++ core; see the package README for the
model conventions and the CSV/config formats."""

from ._jcm import (  # noqa: F401
    BosonSector,
    BosonTriple,
    ConfigError,
    ConvergenceRow,
    ConvergenceTable,
    DepolarizationError,
    DynamicsMode,
    ExactObservables,
    ExactState,
    ExtendedBosonDensity,
    ExtendedFermionDensity,
    FermionQuad,
    FermionSector,
    GaugeSingularityError,
    GaussianState,
    GuardOptions,
    IntegrationError,
    IntegratorOptions,
    JcmError,
    MemoryState,
    Method,
    ModelParams,
    Observables,
    PhysicalityError,
    RunConfig,
    RunMode,
    StateDerivative,
    Trajectory,
    TrajectorySample,
    TruncationError,
    auto_n_max,
    boson_diagonalize,
    boson_reconstruct,
    collision_integrals,
    collisional_rhs,
    convergence_probe,
    csv_header,
    dense_oracle_evolve,
    dominant_frequency,
    exact_evolve,
    exact_observables,
    exact_pair_moment,
    fermion_diagonalize,
    fermion_reconstruct,
    integrate,
    meanfield_rhs,
    observables,
    parse_config,
    prepare_coherent_excited,
    record_grid,
    run,
    validate_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
