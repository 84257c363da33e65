#pragma once

#include <vector>

#include "efimov/types.hpp"

// Independent numerical verification of the rotated spectrum: (a) root-finding
// on a closed-form quantization residual derived from the small-R matching,
// and (b) direct shooting on the hyperradial equation
//   F'' + F'/R - (s^2/R^2) F + 2 E F = 0
// with Braaten-Hammer initial data and decaying large-R asymptotics. Neither
// route assumes the rotation law.
namespace efimov::hyperradial {

// Q(E) = e^{-2 eta_*} + (Gamma(-s)/Gamma(s)) (kappa R_t / 2)^{2s}.
//
// Matching K_s(kappa R) -> c_- (R/R_t)^{-s} + c_+ (R/R_t)^{+s} as R -> 0
// against the Braaten-Hammer form (R/R_t)^{-s} - e^{-2 eta_*} (R/R_t)^{+s}
// requires c_+/c_- = -e^{-2 eta_*}; with c_-/+ = (1/2) Gamma(+/-s)
// (kappa R_t/2)^{-/+s} that is exactly Q(E) = 0.
Complex quantization_residual(Complex E, const ModelParams& params,
                              const ChannelExponent& s);

// Complex Newton iteration on Q from `seed` (derivative by central
// differencing with step 1e-7 |E|) until |Q| < cfg.root_tolerance.
TrimerState find_state(Complex seed, const ModelParams& params,
                       const ChannelExponent& s, const SolverConfig& cfg = {});

// Same Newton machinery applied to the shooting mismatch M(E); converges on
// the energy step (|dE| below ~5e-9 |E|) since |M| itself bottoms out at the
// truncated-asymptote level.
TrimerState find_state_shooting(Complex seed, const ModelParams& params,
                                const ChannelExponent& s,
                                const SolverConfig& cfg = {});

// find_state for n in [n_min, n_max] from deliberately detuned seeds
// 1.3 exp(i 1.9 eta_*/|s|) E_n^0; verifies the discrete-scaling ratio between
// adjacent results to 1e-8 relative.
std::vector<TrimerState> scan_states(int n_min, int n_max, const ModelParams& params,
                                     const ChannelExponent& s,
                                     const SolverConfig& cfg = {});

// F(R_i) = K_s(kappa R_i), unnormalized.
RadialProfile radial_wavefunction(Complex E, const std::vector<double>& radii,
                                  const ChannelExponent& s);

// Max over interior grid points of |F'' + F'/R - (s^2/R^2) F + 2 E F|
// by 5-point central differences, normalized by max |2 E F|. Requires a
// uniform grid of at least 5 points.
double ode_residual(const RadialProfile& profile, const ChannelExponent& s);

struct OdeResult {
    Complex log_derivative;  // F'/F at R_max
    RadialProfile profile;   // accepted integration steps, one global scale
};

// Outward adaptive Dormand-Prince integration of the hyperradial equation
// from R ~ cfg.r_min (Braaten-Hammer two-power initial data with full
// ascending-series corrections) to R_max = cfg.r_max_kappa / |kappa|.
// (F, F') is rescaled whenever it threatens overflow; the profile is kept
// consistent under one global factor and the log-derivative is invariant.
OdeResult integrate_ode(Complex E, const ModelParams& params,
                        const ChannelExponent& s, const SolverConfig& cfg = {});

// Shooting mismatch M(E) = (F'/F)(R_max) + kappa + 1/(2 R_max). At an
// eigenvalue the exact value is not 0 but the truncated-asymptote remainder
// ~ -(4 s^2 - 1)/(8 kappa R_max^2); the root of M in E is displaced from the
// eigenvalue by only ~ e^{-2 Re kappa R_max}, which is what makes M a usable
// root-finding target.
Complex shoot_match(Complex E, const ModelParams& params, const ChannelExponent& s,
                    const SolverConfig& cfg = {});

// Least-squares fit of F(R) = c_- (R/R_t)^{-s} + c_+ (R/R_t)^{+s} on a
// small-R profile (all radii <= 1e-2 R_t, at least 4 of them).
BoundaryAmplitudes bc_amplitudes(const RadialProfile& profile,
                                 const ModelParams& params, const ChannelExponent& s);

// Int_0^inf R |K_s(kappa R)|^2 dR, split at R = 1/|kappa| with exponential
// tail truncation. Finite for every Re kappa > 0.
double norm_integral(Complex E, const ChannelExponent& s,
                     const QuadratureSpec& spec = {});

}  // namespace efimov::hyperradial
