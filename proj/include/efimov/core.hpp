#pragma once

#include "efimov/types.hpp"

// Closed-form results for Efimov trimers with three-body losses in the
// Braaten-Hammer model: channel exponent, lossless and lossy spectra, decay
// rates, critical inelasticity, kappa <-> E mapping, state size, and SI
// conversion. Natural units hbar = m = 1 with lengths in units of R_t.
namespace efimov::core {

// f(x) = x cosh(pi x / 2) - (8/sqrt(3)) sinh(pi x / 6), x = |s| > 0.
//
// This is the bosonic three-body transcendental equation
//   s cos(s pi/2) - (8/sqrt(3)) sin(s pi/6) = 0
// restricted to the imaginary axis s = i x: cos(i y) = cosh(y) and
// sin(i y) = i sinh(y), so the equation becomes i [x cosh(pi x/2)
// - (8/sqrt(3)) sinh(pi x/6)] = 0 and the bracket is the real residual.
// x = 0 is a trivial root; the physical channel exponent is the nonzero one.
double transcendental_residual(double x);

// Nonzero root of the transcendental residual on the bracket [0.5, 2.0],
// bisection plus Newton polish. magnitude ~ 1.00624.
ChannelExponent solve_channel_exponent(double tol = 1e-12);

// eta_*c = pi |s| / 2, beyond which no normalisable trimer exists.
double critical_eta(const ChannelExponent& s);

// Lossless Efimov energy, n in Z:
//   E_n^0 = -(2 / r_t^2) exp[(2/|s|) arg Gamma(1+s)] exp(n 2 pi / |s|) < 0.
double lossless_energy(int n, const ChannelExponent& s, double r_t = 1.0);

// Lossy spectrum: E_n(eta_*) = exp(i 2 eta_* / |s|) E_n^0. Throws DomainError
// for eta_* >= eta_*c (no normalisable solution there).
Complex lossy_energy(int n, const ModelParams& params, const ChannelExponent& s);

// kappa = sqrt(-2 E) with the branch Re kappa > 0 (decaying wavefunction).
// Throws DomainError for E = 0 and BranchError for real positive E, where
// both candidate roots are purely imaginary (the eta_* = eta_*c boundary).
Complex kappa_of_energy(Complex E);

// hbar Gamma = -2 Im E. Throws DomainError if Im E > 0 beyond rounding noise.
double decay_rate(Complex E);

// 1 / Re kappa, in units of R_t.
double trimer_size(const TrimerState& state);

// Probability 1 - e^{-4 eta_*} that three incoming atoms recombine to a deep
// dimer per reflection off short range.
double loss_probability(double eta_star);

// Assemble a TrimerState from an index and complex energy (natural units,
// r_t = 1 scale). Decay rates within rounding noise of zero are snapped to 0.
TrimerState make_state(int n, Complex energy);

// SI conversion, assuming the state is expressed in hbar^2/(m R_t^2) units.
PhysicalState to_physical_units(const TrimerState& state, const UnitSystem& units);

// arg E measured counterclockwise from the positive real axis into [0, 2 pi),
// so the lossless spectrum sits at exactly pi.
double arg_ccw(Complex E);

}  // namespace efimov::core
