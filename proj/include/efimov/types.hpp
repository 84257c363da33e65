#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace efimov {

using Complex = std::complex<double>;

// Error taxonomy. Everything thrown by the library derives from Error so
// callers can distinguish library failures from std:: ones.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (poles, Re z <= 0, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A requested tolerance could not be met; carries the best estimate obtained.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, Complex best, double achieved)
        : Error(msg), best_estimate(best), achieved_error(achieved) {}
    Complex best_estimate;
    double achieved_error;
};

// Iterative solver failed to converge; message carries the iterate trace.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

// A root or square-root determination landed on the wrong branch (Re kappa <= 0).
class BranchError : public Error {
public:
    explicit BranchError(const std::string& msg) : Error(msg) {}
};

// Least-squares fit was too ill-conditioned to trust.
class FitError : public Error {
public:
    explicit FitError(const std::string& msg) : Error(msg) {}
};

// Adaptive ODE integration hit a step-size underflow.
class StiffnessError : public Error {
public:
    explicit StiffnessError(const std::string& msg) : Error(msg) {}
};

// Tolerance budget for adaptive quadrature.
struct QuadratureSpec {
    double relative_tolerance = 1e-12;
    double absolute_tolerance = 1e-14;
    int max_subdivisions = 2000;

    void validate() const {
        if (relative_tolerance <= 0 || absolute_tolerance <= 0)
            throw DomainError("QuadratureSpec: tolerances must be > 0");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

// The Efimov channel exponent s = i*magnitude together with the residual of
// the transcendental equation at the solution.
struct ChannelExponent {
    double magnitude = 0.0;
    double residual = 0.0;

    Complex order() const { return Complex(0.0, magnitude); }
};

// Braaten-Hammer model parameters: inelasticity eta_* and three-body parameter R_t.
struct ModelParams {
    double eta_star = 0.0;
    double r_t = 1.0;

    void validate() const {
        if (eta_star < 0) throw DomainError("ModelParams: eta_star must be >= 0");
        if (r_t <= 0) throw DomainError("ModelParams: r_t must be > 0");
    }
};

// One trimer resonance. Natural units hbar = m = 1, lengths in units of R_t:
// energy in hbar^2/(m R_t^2), kappa in 1/R_t, size in R_t. gamma is hbar*Gamma.
struct TrimerState {
    int n = 0;
    Complex energy;
    Complex kappa;
    double gamma = 0.0;
    double size = 0.0;
};

// Physical unit system for converting natural-unit results.
struct UnitSystem {
    double r_t_meters;
    double mass_kg;

    void validate() const {
        if (r_t_meters <= 0 || mass_kg <= 0)
            throw DomainError("UnitSystem: r_t_meters and mass_kg must be > 0");
    }
};

// Result of a natural -> SI conversion.
struct PhysicalState {
    Complex energy_joules;
    double gamma_per_second;
    double size_meters;
};

constexpr double kHbar = 1.054571817e-34;      // J s
constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

// Sampled hyperradial wavefunction F(R) at a given complex energy.
struct RadialProfile {
    std::vector<double> radii;    // strictly increasing, > 0, units R_t
    std::vector<Complex> values;  // F(R_i)
    Complex energy;
};

// Small-R amplitudes of F: ingoing ~ (R/R_t)^{-s}, outgoing ~ (R/R_t)^{+s}.
struct BoundaryAmplitudes {
    Complex ingoing;
    Complex outgoing;
};

// Knobs for the hyperradial solvers.
struct SolverConfig {
    double r_min = 1e-3;        // start of outward integration, units R_t
    double r_max_kappa = 30.0;  // integrate to |kappa| R = r_max_kappa
    double ode_tolerance = 1e-10;
    double root_tolerance = 1e-12;
    int max_newton_iterations = 60;

    void validate() const {
        if (r_min <= 0 || r_max_kappa <= 0 || ode_tolerance <= 0 ||
            root_tolerance <= 0 || max_newton_iterations < 1)
            throw DomainError("SolverConfig: all fields must be positive");
        if (r_min >= 0.1)
            throw DomainError("SolverConfig: r_min must be << 1");
    }
};

}  // namespace efimov
