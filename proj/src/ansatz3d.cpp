#include "efimov/ansatz3d.hpp"

#include <array>
#include <cmath>

#include "efimov/core.hpp"
#include "efimov/specfun.hpp"

namespace efimov::ansatz3d {

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double c, Vec3 v) { return {c * v.x, c * v.y, c * v.z}; }
double norm(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

namespace {

constexpr double kInvSqrt3 = 0.57735026918962576451;

JacobiSet jacobi_for_pair(Vec3 a, Vec3 b, Vec3 spectator) {
    JacobiSet j;
    j.r = norm(b - a);
    j.rho = kInvSqrt3 * norm(2.0 * spectator - a - b);
    j.hyper_r = std::sqrt(0.5 * (j.r * j.r + j.rho * j.rho));
    return j;
}

// sin(s arctan(x)) / x, finite at x = 0 with limit s. The series keeps the
// rho -> 0 (spectator at the pair midpoint) evaluation regular.
Complex angular_over_x(Complex s, double x) {
    if (x < 1e-4) {
        const double x2 = x * x;
        return s * (1.0 - (1.0 / 3.0 + s * s / 6.0) * x2);
    }
    return std::sin(s * std::atan(x)) / x;
}

// One pairing's angular factor (1/(r rho)) sin[s arctan(rho/r)] = g(rho/r)/r^2.
Complex pair_term(Complex s, const JacobiSet& j) {
    if (!(j.r > 0.0))
        throw DomainError(
            "psi: coincident pair; probe the limit with bethe_peierls_check");
    return angular_over_x(s, j.rho / j.r) / (j.r * j.r);
}

}  // namespace

JacobiSet jacobi(const Positions& positions) {
    return jacobi_for_pair(positions.r1, positions.r2, positions.r3);
}

Complex psi(const Positions& positions, Complex E, const ChannelExponent& s,
            const RadialFn& radial) {
    core::kappa_of_energy(E);  // validates Re kappa > 0
    const Complex sc = s.order();
    const JacobiSet j12 = jacobi_for_pair(positions.r1, positions.r2, positions.r3);
    const JacobiSet j32 = jacobi_for_pair(positions.r3, positions.r2, positions.r1);
    const JacobiSet j13 = jacobi_for_pair(positions.r1, positions.r3, positions.r2);
    const Complex angular = pair_term(sc, j12) + pair_term(sc, j32) + pair_term(sc, j13);
    return radial(j12.hyper_r) * angular;
}

Complex psi(const Positions& positions, Complex E, const ChannelExponent& s) {
    const Complex kappa = core::kappa_of_energy(E);
    const Complex sc = s.order();
    return psi(positions, E, s,
               [kappa, sc](double r) { return specfun::bessel_k(sc, kappa * r); });
}

BethePeierlsResult bethe_peierls_check(Vec3 pair_center, Vec3 r3, Complex E,
                                       const ChannelExponent& s,
                                       const ModelParams& params) {
    params.validate();
    const double d = norm(r3 - pair_center);
    if (!(d > 0.0))
        throw DomainError("bethe_peierls_check: r3 coincides with the pair center");

    // g(h) = h psi(h) = A + B h + O(h^2) along r12 = h in a fixed direction;
    // only the h^1 coefficient depends on the direction, not B itself.
    const Vec3 axis{1.0, 0.0, 0.0};
    constexpr int k_min = 4, k_max = 12;
    constexpr int m = k_max - k_min + 1;
    std::array<Complex, m> g;
    std::array<double, m> h;
    for (int k = k_min; k <= k_max; ++k) {
        const double sep = std::ldexp(1.0, -k);  // 2^-k
        Positions p;
        p.r1 = pair_center - (0.5 * sep) * axis;
        p.r2 = pair_center + (0.5 * sep) * axis;
        p.r3 = r3;
        h[k - k_min] = sep;
        g[k - k_min] = sep * psi(p, E, s);
    }

    // Richardson in the geometric sequence h_k = 2^-k. For A: one level kills
    // the h term, further levels the higher powers. For B: first divided
    // differences then the same elimination.
    std::array<Complex, m> a = g;
    for (int level = 1; level < m; ++level) {
        const double p2 = std::ldexp(1.0, level);  // eliminate h^level
        for (int i = 0; i + level < m; ++i) a[i] = (p2 * a[i + 1] - a[i]) / (p2 - 1.0);
    }
    const Complex divergent = a[0];

    std::array<Complex, m - 1> b;
    for (int i = 0; i + 1 < m; ++i) b[i] = (g[i] - g[i + 1]) / (h[i] - h[i + 1]);
    for (int level = 1; level < m - 1; ++level) {
        const double p2 = std::ldexp(1.0, level);
        for (int i = 0; i + level < m - 1; ++i)
            b[i] = (p2 * b[i + 1] - b[i]) / (p2 - 1.0);
    }
    const Complex constant = b[0];

    if (!(std::abs(divergent) > 0.0))
        throw Error("bethe_peierls_check: vanishing divergent coefficient");
    const double reference_length = d * kInvSqrt3 * 2.0 / std::sqrt(2.0);  // limit hyperradius
    return BethePeierlsResult{divergent,
                              std::abs(constant) * reference_length / std::abs(divergent)};
}

}  // namespace efimov::ansatz3d
