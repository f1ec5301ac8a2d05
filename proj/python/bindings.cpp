#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "jcm/config.hpp"
#include "jcm/dynamics.hpp"
#include "jcm/exact.hpp"
#include "jcm/integrator.hpp"
#include "jcm/model_core.hpp"
#include "jcm/run.hpp"

namespace py = pybind11;
using namespace jcm;

PYBIND11_MODULE(_jcm, m) {
    m.doc() = "Jaynes-Cummings dynamics: exact oracle, mean-field, and "
              "collisional-memory corrections";

    const auto base = py::register_exception<JcmError>(m, "JcmError");
    py::register_exception<PhysicalityError>(m, "PhysicalityError", base);
    py::register_exception<DepolarizationError>(m, "DepolarizationError", base);
    py::register_exception<GaugeSingularityError>(m, "GaugeSingularityError", base);
    py::register_exception<TruncationError>(m, "TruncationError", base);
    py::register_exception<IntegrationError>(m, "IntegrationError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("omega", &ModelParams::omega)
        .def_readwrite("coupling", &ModelParams::coupling);

    py::class_<BosonSector>(m, "BosonSector")
        .def(py::init<>())
        .def_readwrite("B", &BosonSector::B)
        .def_readwrite("nu", &BosonSector::nu)
        .def_readwrite("x", &BosonSector::x)
        .def_readwrite("y", &BosonSector::y);

    py::class_<FermionSector>(m, "FermionSector")
        .def(py::init<>())
        .def_readwrite("u", &FermionSector::u)
        .def_readwrite("v", &FermionSector::v)
        .def_readwrite("p1", &FermionSector::p1)
        .def_readwrite("pm1", &FermionSector::pm1);

    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<>())
        .def_readwrite("boson", &GaussianState::boson)
        .def_readwrite("fermion", &GaussianState::fermion);

    py::class_<MemoryState>(m, "MemoryState")
        .def(py::init<>())
        .def_readwrite("K1", &MemoryState::K1)
        .def_readwrite("K2", &MemoryState::K2)
        .def_readwrite("K3", &MemoryState::K3)
        .def_readwrite("PhiBeta", &MemoryState::PhiBeta)
        .def_readwrite("PhiAlpha", &MemoryState::PhiAlpha);

    py::class_<Observables>(m, "Observables")
        .def_readonly("sigma3", &Observables::sigma3)
        .def_readonly("sigmaP", &Observables::sigmaP)
        .def_readonly("photon", &Observables::photon)
        .def_readonly("energyMF", &Observables::energyMF)
        .def_readonly("time", &Observables::time);

    py::class_<ExtendedBosonDensity>(m, "ExtendedBosonDensity")
        .def(py::init<>())
        .def_readwrite("R", &ExtendedBosonDensity::R)
        .def_readwrite("Pi", &ExtendedBosonDensity::Pi);

    py::class_<ExtendedFermionDensity>(m, "ExtendedFermionDensity")
        .def(py::init<>())
        .def_readwrite("R11", &ExtendedFermionDensity::R11)
        .def_readwrite("Rmm", &ExtendedFermionDensity::Rmm)
        .def_readwrite("R1m", &ExtendedFermionDensity::R1m);

    py::class_<BosonTriple>(m, "BosonTriple")
        .def_readonly("nu", &BosonTriple::nu)
        .def_readonly("x", &BosonTriple::x)
        .def_readonly("y", &BosonTriple::y);

    py::class_<FermionQuad>(m, "FermionQuad")
        .def_readonly("p1", &FermionQuad::p1)
        .def_readonly("pm1", &FermionQuad::pm1)
        .def_readonly("u", &FermionQuad::u)
        .def_readonly("v", &FermionQuad::v);

    m.def("boson_diagonalize", &boson_diagonalize, py::arg("density"),
          py::arg("tol") = kConstraintTol);
    m.def("boson_reconstruct", &boson_reconstruct, py::arg("nu"), py::arg("x"), py::arg("y"),
          py::arg("tol") = kConstraintTol);
    m.def("fermion_diagonalize", &fermion_diagonalize, py::arg("density"),
          py::arg("tol") = kConstraintTol);
    m.def("fermion_reconstruct", &fermion_reconstruct, py::arg("p1"), py::arg("pm1"),
          py::arg("u"), py::arg("v"), py::arg("tol") = kConstraintTol);
    m.def("validate_state", &validate_state, py::arg("state"), py::arg("tol") = kConstraintTol);
    m.def("observables", &observables, py::arg("state"), py::arg("params"),
          py::arg("time") = 0.0);

    py::class_<GuardOptions>(m, "GuardOptions")
        .def(py::init<>())
        .def_readwrite("depolarization_eps", &GuardOptions::depolarization_eps)
        .def_readwrite("gauge_eps", &GuardOptions::gauge_eps)
        .def_readwrite("clamp", &GuardOptions::clamp);

    py::class_<StateDerivative>(m, "StateDerivative")
        .def_readonly("dB", &StateDerivative::dB)
        .def_readonly("dnu", &StateDerivative::dnu)
        .def_readonly("dx", &StateDerivative::dx)
        .def_readonly("dy", &StateDerivative::dy)
        .def_readonly("du", &StateDerivative::du)
        .def_readonly("dv", &StateDerivative::dv)
        .def_readonly("ds", &StateDerivative::ds)
        .def_readonly("dK1", &StateDerivative::dK1)
        .def_readonly("dK2", &StateDerivative::dK2)
        .def_readonly("dK3", &StateDerivative::dK3)
        .def_readonly("dPhiBeta", &StateDerivative::dPhiBeta)
        .def_readonly("dPhiAlpha", &StateDerivative::dPhiAlpha)
        .def_readonly("im_residual", &StateDerivative::im_residual);

    m.def("collision_integrals", &collision_integrals, py::arg("mem"));
    m.def("meanfield_rhs", &meanfield_rhs, py::arg("state"), py::arg("params"),
          py::arg("guards") = GuardOptions{});
    m.def("collisional_rhs", &collisional_rhs, py::arg("state"), py::arg("mem"),
          py::arg("params"), py::arg("guards") = GuardOptions{});

    py::enum_<Method>(m, "Method")
        .value("rk4_fixed", Method::rk4_fixed)
        .value("rk45_adaptive", Method::rk45_adaptive);
    py::enum_<DynamicsMode>(m, "DynamicsMode")
        .value("meanfield", DynamicsMode::meanfield)
        .value("collisional", DynamicsMode::collisional);
    py::enum_<RunMode>(m, "RunMode")
        .value("exact", RunMode::exact)
        .value("meanfield", RunMode::meanfield)
        .value("collisional", RunMode::collisional)
        .value("compare", RunMode::compare);

    py::class_<IntegratorOptions>(m, "IntegratorOptions")
        .def(py::init<>())
        .def_readwrite("dt", &IntegratorOptions::dt)
        .def_readwrite("t_max", &IntegratorOptions::t_max)
        .def_readwrite("method", &IntegratorOptions::method)
        .def_readwrite("rel_tol", &IntegratorOptions::rel_tol)
        .def_readwrite("abs_tol", &IntegratorOptions::abs_tol)
        .def_readwrite("renormalize", &IntegratorOptions::renormalize)
        .def_readwrite("record_every", &IntegratorOptions::record_every);

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("t", &TrajectorySample::t)
        .def_readonly("state", &TrajectorySample::state)
        .def_readonly("mem", &TrajectorySample::mem)
        .def_readonly("obs", &TrajectorySample::obs);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("params", &Trajectory::params)
        .def_readonly("mode", &Trajectory::mode)
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("max_im_residual", &Trajectory::max_im_residual);

    m.def(
        "integrate",
        [](const GaussianState& initial, const ModelParams& params, DynamicsMode mode,
           const IntegratorOptions& opts, const GuardOptions& guards) {
            return integrate(initial, params, mode, opts, guards);
        },
        py::arg("initial"), py::arg("params"), py::arg("mode"),
        py::arg("opts") = IntegratorOptions{}, py::arg("guards") = GuardOptions{});

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("dt", &ConvergenceRow::dt)
        .def_readonly("error", &ConvergenceRow::error);
    py::class_<ConvergenceTable>(m, "ConvergenceTable")
        .def_readonly("rows", &ConvergenceTable::rows)
        .def_readonly("observed_orders", &ConvergenceTable::observed_orders)
        .def_readonly("reference_dt", &ConvergenceTable::reference_dt);
    m.def("convergence_probe", &convergence_probe, py::arg("initial"), py::arg("params"),
          py::arg("mode"), py::arg("dt_list"), py::arg("base") = IntegratorOptions{},
          py::arg("guards") = GuardOptions{});

    py::class_<ExactState>(m, "ExactState")
        .def(py::init<>())
        .def_readwrite("up", &ExactState::up)
        .def_readwrite("down", &ExactState::down)
        .def_readwrite("n_max", &ExactState::n_max)
        .def("norm2", &ExactState::norm2);

    py::class_<ExactObservables>(m, "ExactObservables")
        .def_readonly("sigma3", &ExactObservables::sigma3)
        .def_readonly("sigmaP", &ExactObservables::sigmaP)
        .def_readonly("photon", &ExactObservables::photon)
        .def_readonly("energy", &ExactObservables::energy)
        .def_readonly("B", &ExactObservables::B);

    m.def("auto_n_max", &auto_n_max, py::arg("alpha_abs"), py::arg("tail_bound") = 1e-12);
    m.def("prepare_coherent_excited", &prepare_coherent_excited, py::arg("alpha"),
          py::arg("n_max"));
    m.def("exact_evolve", &exact_evolve, py::arg("state"), py::arg("params"), py::arg("t"));
    m.def("exact_observables", &exact_observables, py::arg("state"), py::arg("params"));
    m.def("exact_pair_moment", &exact_pair_moment, py::arg("state"));
    m.def("dense_oracle_evolve", &dense_oracle_evolve, py::arg("state"), py::arg("params"),
          py::arg("t"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("params", &RunConfig::params)
        .def_readwrite("B0", &RunConfig::B0)
        .def_readwrite("nu0", &RunConfig::nu0)
        .def_readwrite("x0", &RunConfig::x0)
        .def_readwrite("y0", &RunConfig::y0)
        .def_readwrite("u0", &RunConfig::u0)
        .def_readwrite("v0", &RunConfig::v0)
        .def_readwrite("p1_0", &RunConfig::p1_0)
        .def_readwrite("pm1_0", &RunConfig::pm1_0)
        .def_readwrite("integrator", &RunConfig::integrator)
        .def_readwrite("n_max", &RunConfig::n_max)
        .def_readwrite("mode", &RunConfig::mode)
        .def_readwrite("output", &RunConfig::output)
        .def_readwrite("guards", &RunConfig::guards)
        .def("initial_state", &RunConfig::initial_state)
        .def("coherent_excited", &RunConfig::coherent_excited);

    m.def("parse_config", [](std::string_view text) { return parse_config(text); },
          py::arg("text"));
    m.def("record_grid", &record_grid, py::arg("opts"));
    m.def("dominant_frequency", &dominant_frequency, py::arg("series"), py::arg("dt_sample"));
    m.def("run", &run, py::arg("config"));
    m.attr("csv_header") = std::string(kCsvHeader);
}
