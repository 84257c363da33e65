#include "efimov/core.hpp"

#include <cmath>
#include <sstream>

#include "efimov/specfun.hpp"

namespace efimov::core {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kEightOverSqrt3 = 4.61880215351700420322;  // 8/sqrt(3)
}  // namespace

double transcendental_residual(double x) {
    if (!(x > 0.0)) throw DomainError("transcendental_residual: requires x > 0");
    return x * std::cosh(0.5 * kPi * x) - kEightOverSqrt3 * std::sinh(kPi * x / 6.0);
}

ChannelExponent solve_channel_exponent(double tol) {
    if (!(tol > 0.0)) throw DomainError("solve_channel_exponent: requires tol > 0");
    // f < 0 at 0.5 (the x = 0 root repels) and f > 0 at 2.0; refine to machine
    // precision regardless of tol so repeated calls are bitwise identical.
    double lo = 0.5, hi = 2.0;
    double flo = transcendental_residual(lo);
    if (!(flo < 0.0) || !(transcendental_residual(hi) > 0.0))
        throw SolverError("solve_channel_exponent: bracket [0.5, 2.0] lost the sign change");
    for (int i = 0; i < 80 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = transcendental_residual(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double f = transcendental_residual(x);
        const double df = std::cosh(0.5 * kPi * x) +
                          x * 0.5 * kPi * std::sinh(0.5 * kPi * x) -
                          kEightOverSqrt3 * (kPi / 6.0) * std::cosh(kPi * x / 6.0);
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-16 * x) break;
    }
    const double residual = std::abs(transcendental_residual(x));
    if (!(residual < tol)) {
        std::ostringstream msg;
        msg << "solve_channel_exponent: residual " << residual << " not below tol " << tol;
        throw SolverError(msg.str());
    }
    return ChannelExponent{x, residual};
}

double critical_eta(const ChannelExponent& s) { return 0.5 * kPi * s.magnitude; }

double lossless_energy(int n, const ChannelExponent& s, double r_t) {
    if (!(r_t > 0.0)) throw DomainError("lossless_energy: requires r_t > 0");
    const double arg_gamma = specfun::ln_gamma(1.0 + s.order()).imag();
    return -(2.0 / (r_t * r_t)) *
           std::exp(2.0 / s.magnitude * arg_gamma + n * 2.0 * kPi / s.magnitude);
}

Complex lossy_energy(int n, const ModelParams& params, const ChannelExponent& s) {
    params.validate();
    if (params.eta_star >= critical_eta(s))
        throw DomainError(
            "lossy_energy: eta_star >= pi|s|/2, no normalisable solution");
    const double e0 = lossless_energy(n, s, params.r_t);
    if (params.eta_star == 0.0) return Complex(e0, 0.0);
    const double angle = 2.0 * params.eta_star / s.magnitude;
    return e0 * Complex(std::cos(angle), std::sin(angle));
}

Complex kappa_of_energy(Complex E) {
    if (E == Complex(0.0, 0.0)) throw DomainError("kappa_of_energy: E = 0");
    // Principal sqrt already has Re >= 0; Re = 0 happens only for E on the
    // positive real axis, where no decaying determination exists.
    const Complex k = std::sqrt(-2.0 * E);
    if (k.real() > 0.0) return k;
    throw BranchError(
        "kappa_of_energy: both roots purely imaginary (E on the positive real "
        "axis, eta_star = eta_star_c boundary)");
}

double decay_rate(Complex E) {
    if (E.imag() > 1e-12 * std::abs(E))
        throw DomainError("decay_rate: Im E > 0 (growing state)");
    return E.imag() > 0.0 ? 0.0 : -2.0 * E.imag();
}

double trimer_size(const TrimerState& state) {
    if (!(state.kappa.real() > 0.0))
        throw DomainError("trimer_size: requires Re kappa > 0");
    return 1.0 / state.kappa.real();
}

double loss_probability(double eta_star) {
    if (eta_star < 0.0) throw DomainError("loss_probability: requires eta_star >= 0");
    return -std::expm1(-4.0 * eta_star);
}

TrimerState make_state(int n, Complex energy) {
    TrimerState st;
    st.n = n;
    st.energy = energy;
    st.kappa = kappa_of_energy(energy);
    double gamma = -2.0 * energy.imag();
    if (std::abs(gamma) < 1e-13 * std::abs(energy)) gamma = 0.0;
    st.gamma = gamma;
    st.size = 1.0 / st.kappa.real();
    return st;
}

PhysicalState to_physical_units(const TrimerState& state, const UnitSystem& units) {
    units.validate();
    const double energy_scale =
        kHbar * kHbar / (units.mass_kg * units.r_t_meters * units.r_t_meters);
    return PhysicalState{state.energy * energy_scale,
                         state.gamma * energy_scale / kHbar,
                         state.size * units.r_t_meters};
}

double arg_ccw(Complex E) {
    const double a = std::atan2(E.imag(), E.real());
    return a < 0.0 ? a + 2.0 * kPi : a;
}

}  // namespace efimov::core
