#pragma once

#include <functional>

#include "efimov/types.hpp"

// The full three-body wavefunction
//   psi(r1, r2, r3) = F(R) (1 + P13 + P23) (1/(r rho)) sin[s arctan(rho/r)]
// evaluated at arbitrary positions, plus a numerical check of the
// Bethe-Peierls contact condition at 1/a = 0: as a pair coincides,
// psi = A/r_ij + O(r_ij) with no constant term.
namespace efimov::ansatz3d {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 operator+(Vec3 a, Vec3 b);
Vec3 operator-(Vec3 a, Vec3 b);
Vec3 operator*(double c, Vec3 v);
double norm(Vec3 v);

struct Positions {
    Vec3 r1, r2, r3;
};

// Jacobi coordinates for the (1,2) pair with spectator 3:
// r = |r2 - r1|, rho = |2 r3 - r1 - r2| / sqrt(3), R = sqrt((r^2 + rho^2)/2).
struct JacobiSet {
    double r = 0.0;
    double rho = 0.0;
    double hyper_r = 0.0;
};

JacobiSet jacobi(const Positions& positions);

using RadialFn = std::function<Complex(double)>;

// Efimov Ansatz with a caller-supplied hyperradial evaluator F(R). The three
// angular terms use Jacobi coordinates recomputed from permuted labels; the
// hyperradius is permutation invariant. Throws DomainError if a pair
// coincides (use bethe_peierls_check to probe that limit).
Complex psi(const Positions& positions, Complex E, const ChannelExponent& s,
            const RadialFn& radial);

// Convenience overload with F(R) = K_s(kappa R).
Complex psi(const Positions& positions, Complex E, const ChannelExponent& s);

struct BethePeierlsResult {
    Complex divergent_coeff;     // A in psi ~ A / r12
    double constant_term_ratio;  // |B| R_lim / |A|, B the r12^0 coefficient
};

// Collapses the (1,2) pair onto pair_center along a fixed direction with
// separations 2^-k, k = 4..12, and Richardson-extrapolates
// r12 psi = A + B r12 + O(r12^2). At the true channel exponent B vanishes:
// that cancellation is exactly the transcendental equation for s.
BethePeierlsResult bethe_peierls_check(Vec3 pair_center, Vec3 r3, Complex E,
                                       const ChannelExponent& s,
                                       const ModelParams& params);

}  // namespace efimov::ansatz3d
