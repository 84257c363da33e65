#pragma once

#include <functional>
#include <utility>

#include "efimov/types.hpp"

// Complex special functions needed by the trimer spectrum and wavefunction:
// principal-branch log-gamma and the modified Bessel function K of complex
// (in practice purely imaginary) order and complex argument.
namespace efimov::specfun {

// Principal branch of log Gamma(z): exp(ln_gamma(z)) == Gamma(z), imaginary
// part continuous along any path avoiding the negative real axis.
// Lanczos (g = 7) for Re z >= 0.5, recurrence shift otherwise.
// Throws DomainError at the poles z = 0, -1, -2, ...
Complex ln_gamma(Complex z);

// Gamma(z) = exp(ln_gamma(z)).
Complex gamma(Complex z);

// Adaptive Gauss-Kronrod (G7,K15) quadrature of a complex-valued integrand
// over [a, b]. Throws AccuracyError (carrying the best estimate) if the
// tolerance cannot be met within spec.max_subdivisions bisections.
Complex integrate_adaptive(const std::function<Complex(double)>& f, double a,
                           double b, const QuadratureSpec& spec = {});

// K_order(z) for Re z > 0. Dispatches between the two evaluation regimes
// below with crossover at |z| = 2; integer (and near-integer) orders always
// take the integral route, where the sin(pi*order) reflection degenerates.
Complex bessel_k(Complex order, Complex z, const QuadratureSpec& spec = {});

// Ascending-series regime: K_s = (pi/2) (I_{-s} - I_s) / sin(pi s).
// Accurate for small |z|; loses roughly |z| log10(e) digits to cancellation
// as |z| grows. Requires non-integer order.
Complex bessel_k_series(Complex order, Complex z);

// Integral regime: K_s(z) = e^{-z} Int_0^T exp(-z (cosh t - 1)) cosh(s t) dt
// with the tail truncated where Re z (cosh T - 1) exceeds the tolerance
// budget. Valid for any order, any Re z > 0.
Complex bessel_k_integral(Complex order, Complex z, const QuadratureSpec& spec = {});

// Coefficients of the R -> 0 expansion
//   K_s(kappa R) = c_minus (R/R_t)^{-s} + c_plus (R/R_t)^{+s} + O(R^2),
// namely c_-/+ = (1/2) Gamma(+/-s) (kappa R_t / 2)^{-/+s}.
// Throws DomainError for integer order (the expansion degenerates).
std::pair<Complex, Complex> small_z_coefficients(Complex order, Complex kappa,
                                                 double r_t);

}  // namespace efimov::specfun
