#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace jcm {

using cplx = std::complex<double>;

inline constexpr double kConstraintTol = 1e-9;
inline constexpr double kDepolarizationGuard = 1e-8;
inline constexpr double kGaugeGuard = 1e-8;

struct ModelParams {
    double epsilon = 1.0;   // atomic level splitting
    double omega = 1.0;     // mode frequency
    double coupling = 0.5;  // lambda
};

// Coherent amplitude plus Bogoliubov data of the field mode.
// Gauge: x real, x >= 1; all boson phase freedom lives in y.
struct BosonSector {
    cplx B{0.0, 0.0};
    double nu = 0.0;
    double x = 1.0;
    cplx y{0.0, 0.0};
};

// Bogoliubov data of the two-level (fermion pair) sector.
// Gauge: u real nonnegative; phase freedom lives in v.
struct FermionSector {
    double u = 1.0;
    cplx v{0.0, 0.0};
    double p1 = 1.0;
    double pm1 = 0.0;
};

struct GaussianState {
    BosonSector boson;
    FermionSector fermion;
};

// Running memory integrals in accumulator form plus accumulated phases.
struct MemoryState {
    cplx K1{0.0, 0.0};
    cplx K2{0.0, 0.0};
    cplx K3{0.0, 0.0};
    double PhiBeta = 0.0;
    double PhiAlpha = 0.0;
};

struct Observables {
    double sigma3 = 0.0;
    double sigmaP = 0.0;
    double photon = 0.0;
    double energyMF = 0.0;
    double time = 0.0;
};

struct ExtendedBosonDensity {
    double R = 0.0;  // <d†d>
    cplx Pi{0.0, 0.0};  // <dd>
};

struct ExtendedFermionDensity {
    double R11 = 0.0;
    double Rmm = 0.0;
    cplx R1m{0.0, 0.0};  // <a†_{-1} a_{1}>
};

class JcmError : public std::runtime_error {
public:
    explicit JcmError(const std::string& msg) : std::runtime_error(msg) {}
    // Failure time attached by the integrator when an error surfaces mid-run.
    void set_time(double t) {
        if (!has_time_) {
            time_ = t;
            has_time_ = true;
        }
    }
    bool has_time() const { return has_time_; }
    double time() const { return time_; }

private:
    double time_ = std::nan("");
    bool has_time_ = false;
};

class PhysicalityError : public JcmError {
    using JcmError::JcmError;
};

class DepolarizationError : public JcmError {
    using JcmError::JcmError;
};

class GaugeSingularityError : public JcmError {
    using JcmError::JcmError;
};

class TruncationError : public JcmError {
    using JcmError::JcmError;
};

class IntegrationError : public JcmError {
    using JcmError::JcmError;
};

class ConfigError : public JcmError {
public:
    ConfigError(const std::string& msg, int line = 0)
        : JcmError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace jcm
