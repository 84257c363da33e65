#include "efimov/hyperradial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "efimov/core.hpp"
#include "efimov/specfun.hpp"

namespace efimov::hyperradial {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Nearest Efimov index for an energy modulus, used to label numeric roots.
int index_of_energy(Complex E, const ModelParams& params, const ChannelExponent& s) {
    const double e0 = core::lossless_energy(0, s, params.r_t);
    return static_cast<int>(std::lround(
        s.magnitude / (2.0 * kPi) * std::log(std::abs(E) / std::abs(e0))));
}

// Damped complex Newton with central-difference derivative (step 1e-7 |E|).
// The residuals here are exponential in ln E, so a full Newton step can badly
// overshoot; a step is halved until it does not increase |f| (minima of the
// modulus of an analytic function are zeros, so descent cannot get stuck).
// `done` decides convergence from (residual, last step, current E).
Complex newton_complex(const std::function<Complex(Complex)>& f, Complex seed,
                       int max_iterations,
                       const std::function<bool(Complex, Complex, Complex)>& done,
                       const char* label) {
    Complex e = seed;
    Complex r = f(e);
    std::ostringstream trace;
    trace << label << " trace:";
    for (int it = 0; it < max_iterations; ++it) {
        const double h = 1e-7 * std::abs(e);
        const Complex df = (f(e + h) - f(e - h)) / (2.0 * h);
        if (df == Complex(0.0, 0.0))
            throw SolverError(std::string(label) + ": vanishing derivative");
        Complex full = -r / df;
        // Keep iterates away from E = 0 where kappa and the powers blow up.
        const double max_step = 0.8 * std::abs(e);
        if (std::abs(full) > max_step) full *= max_step / std::abs(full);

        Complex step = full;
        Complex e_next = e + step;
        Complex r_next = f(e_next);
        for (int bt = 0; bt < 30 && std::abs(r_next) > std::abs(r); ++bt) {
            step *= 0.5;
            e_next = e + step;
            r_next = f(e_next);
        }
        e = e_next;
        r = r_next;
        trace << " (" << e.real() << "," << e.imag() << ")|r|=" << std::abs(r);
        if (done(r, step, e)) return e;
    }
    throw SolverError(std::string(label) + ": no convergence in " +
                      std::to_string(max_iterations) + " iterations; " + trace.str());
}

}  // namespace

Complex quantization_residual(Complex E, const ModelParams& params,
                              const ChannelExponent& s) {
    params.validate();
    if (E == Complex(0.0, 0.0)) throw DomainError("quantization_residual: E = 0");
    const Complex sc = s.order();
    const Complex kappa = core::kappa_of_energy(E);
    const Complex gamma_ratio = std::exp(specfun::ln_gamma(-sc) - specfun::ln_gamma(sc));
    const Complex power = std::exp(2.0 * sc * std::log(0.5 * kappa * params.r_t));
    return std::exp(-2.0 * params.eta_star) + gamma_ratio * power;
}

TrimerState find_state(Complex seed, const ModelParams& params,
                       const ChannelExponent& s, const SolverConfig& cfg) {
    cfg.validate();
    if (seed == Complex(0.0, 0.0)) throw DomainError("find_state: seed = 0");
    const auto q = [&](Complex e) { return quantization_residual(e, params, s); };
    const Complex root = newton_complex(
        q, seed, cfg.max_newton_iterations,
        [&](Complex r, Complex, Complex) { return std::abs(r) < cfg.root_tolerance; },
        "find_state");
    // kappa_of_energy throws BranchError if the root landed on Re kappa <= 0.
    return core::make_state(index_of_energy(root, params, s), root);
}

std::vector<TrimerState> scan_states(int n_min, int n_max, const ModelParams& params,
                                     const ChannelExponent& s, const SolverConfig& cfg) {
    if (n_min > n_max) throw DomainError("scan_states: n_min > n_max");
    const double detuned_angle = 1.9 * params.eta_star / s.magnitude;
    const Complex detune = 1.3 * std::exp(Complex(0.0, detuned_angle));

    std::vector<TrimerState> states;
    states.reserve(static_cast<size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        try {
            states.push_back(
                find_state(detune * core::lossless_energy(n, s, params.r_t), params, s, cfg));
        } catch (const Error& err) {
            throw SolverError("scan_states: failure at n = " + std::to_string(n) +
                              ": " + err.what());
        }
    }
    const double ratio = std::exp(2.0 * kPi / s.magnitude);
    for (size_t i = 0; i + 1 < states.size(); ++i) {
        const Complex got = states[i + 1].energy / states[i].energy;
        if (std::abs(got - ratio) > 1e-8 * ratio)
            throw SolverError("scan_states: discrete-scaling ratio violated between n = " +
                              std::to_string(states[i].n) + " and n = " +
                              std::to_string(states[i + 1].n));
    }
    return states;
}

RadialProfile radial_wavefunction(Complex E, const std::vector<double>& radii,
                                  const ChannelExponent& s) {
    if (radii.size() < 2) throw DomainError("radial_wavefunction: need >= 2 radii");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
            throw DomainError("radial_wavefunction: radii must be positive and strictly increasing");
    }
    const Complex kappa = core::kappa_of_energy(E);
    RadialProfile profile;
    profile.radii = radii;
    profile.energy = E;
    profile.values.reserve(radii.size());
    for (double r : radii) profile.values.push_back(specfun::bessel_k(s.order(), kappa * r));
    return profile;
}

double ode_residual(const RadialProfile& profile, const ChannelExponent& s) {
    const size_t n = profile.radii.size();
    if (n < 5 || profile.values.size() != n)
        throw DomainError("ode_residual: need a uniform grid of >= 5 points");
    const double h = profile.radii[1] - profile.radii[0];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (std::abs(profile.radii[i + 1] - profile.radii[i] - h) > 1e-9 * h)
            throw DomainError("ode_residual: grid not uniform");
    }
    const Complex s2 = s.order() * s.order();
    const Complex two_e = 2.0 * profile.energy;

    double scale = 0.0;
    for (const Complex& f : profile.values) scale = std::max(scale, std::abs(two_e * f));
    if (scale == 0.0) throw DomainError("ode_residual: profile identically zero");

    double worst = 0.0;
    for (size_t i = 2; i + 2 < n; ++i) {
        const Complex &fm2 = profile.values[i - 2], &fm1 = profile.values[i - 1],
                      &f0 = profile.values[i], &fp1 = profile.values[i + 1],
                      &fp2 = profile.values[i + 2];
        const Complex d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        const Complex d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        const double r = profile.radii[i];
        const Complex resid = d2 + d1 / r - s2 / (r * r) * f0 + two_e * f0;
        worst = std::max(worst, std::abs(resid));
    }
    return worst / scale;
}

namespace {

// The two small-R solutions u_-/+ = (R/R_t)^{-/+s} sum_k q^k / (k! (1 -/+ s)_k)
// with q = (kappa R / 2)^2 (the Bessel ascending series without the Gamma
// prefactors), together with their R-derivatives.
struct PowerBasis {
    Complex u_m, u_p;    // u_-(R), u_+(R)
    Complex du_m, du_p;  // derivatives
};

PowerBasis bh_power_basis(double r, Complex kappa, double r_t, Complex sc) {
    const Complex q = 0.25 * kappa * kappa * r * r;
    Complex term_m = 1.0, term_p = 1.0;
    Complex sum_m = 1.0, sum_p = 1.0;
    Complex dsum_m = -sc, dsum_p = sc;  // accumulates (-/+s + 2k) q^k / (k! (...)_k)
    for (int k = 0; k < 60; ++k) {
        const double kk = static_cast<double>(k);
        term_m *= q / ((kk + 1.0) * (kk + 1.0 - sc));
        term_p *= q / ((kk + 1.0) * (kk + 1.0 + sc));
        sum_m += term_m;
        sum_p += term_p;
        dsum_m += (-sc + 2.0 * (kk + 1.0)) * term_m;
        dsum_p += (sc + 2.0 * (kk + 1.0)) * term_p;
        if (std::abs(term_m) < 1e-18 * std::abs(sum_m) &&
            std::abs(term_p) < 1e-18 * std::abs(sum_p))
            break;
    }
    const double log_ratio = std::log(r / r_t);
    const Complex pow_m = std::exp(-sc * log_ratio);
    const Complex pow_p = std::exp(sc * log_ratio);
    return PowerBasis{pow_m * sum_m, pow_p * sum_p, pow_m * dsum_m / r,
                      pow_p * dsum_p / r};
}

// Braaten-Hammer initial data F = u_- - e^{-2 eta_*} u_+.
void bh_initial_data(double r, Complex kappa, const ModelParams& params,
                     Complex sc, Complex& f, Complex& fp) {
    const PowerBasis basis = bh_power_basis(r, kappa, params.r_t, sc);
    const double reflected = std::exp(-2.0 * params.eta_star);
    f = basis.u_m - reflected * basis.u_p;
    fp = basis.du_m - reflected * basis.du_p;
}

struct RhsParams {
    Complex s2;
    Complex two_e;
};

inline void hyperradial_rhs(const RhsParams& p, double r, const Complex y[2],
                            Complex dydr[2]) {
    dydr[0] = y[1];
    dydr[1] = -y[1] / r + (p.s2 / (r * r)) * y[0] - p.two_e * y[0];
}

// Adaptive Dormand-Prince 5(4) over the complex 2-vector (F, F') from r0 to
// r1, either direction. Rescales (and the recorded profile with it) whenever
// the magnitude threatens overflow.
void dp5_integrate(const RhsParams& rhs, double r0, double r1, Complex y[2],
                   double tol, double kabs, RadialProfile* profile) {
    // Dormand-Prince 5(4) tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    if (profile) {
        profile->radii.push_back(r0);
        profile->values.push_back(y[0]);
    }

    // Mixed F / F' scale so the error norm never stalls at an isolated zero
    // of F; L ~ R at small R and ~ 1/|kappa| in the tail.
    const auto mixing_length = [&](double r) { return r / (1.0 + kabs * r); };

    const double dir = (r1 > r0) ? 1.0 : -1.0;
    double r = r0;
    double h = dir * 0.01 * std::min(std::abs(r0), std::abs(r1));
    Complex k1[2];
    hyperradial_rhs(rhs, r, y, k1);

    const long max_steps = 40'000'000;
    long step = 0;
    for (; step < max_steps; ++step) {
        if (dir * (r1 - r) <= 1e-14 * std::abs(r1)) break;
        if (std::abs(h) < 1e-13 * (std::abs(r) + 1.0))
            throw StiffnessError("dp5_integrate: step size underflow at R = " +
                                 std::to_string(r));
        if (dir * (r + h - r1) > 0.0) h = r1 - r;
        Complex k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2], y5[2];
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a21 * k1[i]);
        hyperradial_rhs(rhs, r + c2 * h, yt, k2);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        hyperradial_rhs(rhs, r + c3 * h, yt, k3);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        hyperradial_rhs(rhs, r + c4 * h, yt, k4);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        hyperradial_rhs(rhs, r + c5 * h, yt, k5);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        hyperradial_rhs(rhs, r + h, yt, k6);
        for (int i = 0; i < 2; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                b6 * k6[i]);
        hyperradial_rhs(rhs, r + h, y5, k7);

        const double L = mixing_length(r + h);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const Complex ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            err = std::max(err, std::abs(ei) * (i == 0 ? 1.0 : L));
        }
        const double scale = std::max({std::abs(y[0]), std::abs(y5[0]),
                                       L * std::abs(y[1]), L * std::abs(y5[1]), 1e-300});
        const double err_norm = err / (tol * scale);

        if (err_norm <= 1.0) {
            r += h;
            y[0] = y5[0];
            y[1] = y5[1];
            k1[0] = k7[0];
            k1[1] = k7[1];
            if (profile) {
                profile->radii.push_back(r);
                profile->values.push_back(y[0]);
            }
            // Rescale before |F| can overflow, keeping one global factor.
            const double mag = std::max(std::abs(y[0]), L * std::abs(y[1]));
            if (mag > 1e100) {
                const double c = 1.0 / mag;
                y[0] *= c;
                y[1] *= c;
                k1[0] *= c;
                k1[1] *= c;
                if (profile)
                    for (Complex& v : profile->values) v *= c;
            }
        }
        const double grow = (err_norm <= 1.0) ? 5.0 : 1.0;
        h *= std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, grow);
    }
    if (step >= max_steps)
        throw SolverError("dp5_integrate: step budget exhausted");
}

}  // namespace

OdeResult integrate_ode(Complex E, const ModelParams& params,
                        const ChannelExponent& s, const SolverConfig& cfg) {
    cfg.validate();
    params.validate();
    const Complex kappa = core::kappa_of_energy(E);
    const double kabs = std::abs(kappa);
    // Start no further out than |kappa| R = 1/2 so the initial series is
    // short and free of cancellation even for deep states.
    const double r_start = std::min(cfg.r_min, 0.5 / kabs);
    const double r_max = cfg.r_max_kappa / kabs;
    if (!(r_max > r_start)) throw DomainError("integrate_ode: empty integration range");

    const Complex sc = s.order();
    const RhsParams rhs{sc * sc, 2.0 * E};
    Complex y[2];
    bh_initial_data(r_start, kappa, params, sc, y[0], y[1]);

    OdeResult result;
    result.profile.energy = E;
    dp5_integrate(rhs, r_start, r_max, y, cfg.ode_tolerance, kabs, &result.profile);

    if (y[0] == Complex(0.0, 0.0))
        throw SolverError("integrate_ode: F(R_max) = 0, log-derivative undefined");
    result.log_derivative = y[1] / y[0];
    return result;
}

Complex shoot_match(Complex E, const ModelParams& params, const ChannelExponent& s,
                    const SolverConfig& cfg) {
    const Complex kappa = core::kappa_of_energy(E);
    const double r_max = cfg.r_max_kappa / std::abs(kappa);
    const OdeResult ode = integrate_ode(E, params, s, cfg);
    return ode.log_derivative + kappa + 0.5 / r_max;
}

namespace {

// Integrates the decaying solution inward from Re kappa R = depth (seeded by
// the e^{-kappa R}/sqrt(R) asymptote, for which inward is the stable
// direction) down to small R, extracts the two power amplitudes (c_-, c_+)
// there, and returns the boundary-condition defect c_+/c_- + e^{-2 eta_*}.
// Vanishes exactly at an eigenvalue and is O(1)-steep everywhere, so Newton
// on it converges from strongly detuned seeds.
Complex inward_bc_defect(Complex E, const ModelParams& params,
                         const ChannelExponent& s, const SolverConfig& cfg,
                         double depth) {
    const Complex kappa = core::kappa_of_energy(E);
    const double kabs = std::abs(kappa);
    const double cos_angle = std::max(kappa.real() / kabs, 1e-3);
    const double r_outer = depth / (cos_angle * kabs);
    const double r_inner = std::min(cfg.r_min, 0.5 / kabs);

    const Complex sc = s.order();
    const RhsParams rhs{sc * sc, 2.0 * E};
    Complex y[2] = {1.0, -kappa - 0.5 / r_outer};
    dp5_integrate(rhs, r_outer, r_inner, y, cfg.ode_tolerance, kabs, nullptr);

    const PowerBasis basis = bh_power_basis(r_inner, kappa, params.r_t, sc);
    const Complex det = basis.u_m * basis.du_p - basis.du_m * basis.u_p;
    const Complex c_minus = (y[0] * basis.du_p - y[1] * basis.u_p) / det;
    const Complex c_plus = (y[1] * basis.u_m - y[0] * basis.du_m) / det;
    return c_plus / c_minus + std::exp(-2.0 * params.eta_star);
}

}  // namespace

TrimerState find_state_shooting(Complex seed, const ModelParams& params,
                                const ChannelExponent& s, const SolverConfig& cfg) {
    cfg.validate();
    params.validate();
    if (seed == Complex(0.0, 0.0)) throw DomainError("find_state_shooting: seed = 0");
    // Shooting outward, the decaying solution stays visible at R_max only
    // while the energy detuning keeps the admixed growing mode small, a basin
    // that shrinks like e^{-2 Re kappa R_max}; conversely the truncated
    // asymptote in M biases M's root by the same exponential, so an accurate
    // root needs a deep R_max. Two stages resolve the tension:
    //   1. locate the eigenvalue with the inward boundary-condition defect,
    //      which has no basin pathology at all;
    //   2. polish on the outward M functional at decay depth
    //      Re kappa R_max = 9 (R_max scaled with the known loss angle
    //      arg kappa = eta_*/|s|), where the seed from stage 1 sits inside
    //      the basin and the root bias ~ e^{-18} is negligible.
    const auto defect = [&](Complex e) {
        return inward_bc_defect(e, params, s, cfg, 9.0);
    };
    const Complex located = newton_complex(
        defect, seed, cfg.max_newton_iterations,
        [&](Complex r, Complex step, Complex e) {
            return std::abs(r) < 1e3 * cfg.root_tolerance &&
                   std::abs(step) < 1e-8 * std::abs(e);
        },
        "find_state_shooting[locate]");

    SolverConfig deep = cfg;
    deep.r_max_kappa = 9.0 / std::max(std::cos(params.eta_star / s.magnitude), 0.04);
    const auto m = [&](Complex e) { return shoot_match(e, params, s, deep); };
    // |M| bottoms out at the truncated-asymptote remainder, so convergence is
    // judged on the Newton step instead.
    const Complex root = newton_complex(
        m, located, cfg.max_newton_iterations,
        [&](Complex, Complex step, Complex e) {
            return std::abs(step) < 5e-9 * std::abs(e);
        },
        "find_state_shooting[polish]");
    return core::make_state(index_of_energy(root, params, s), root);
}

BoundaryAmplitudes bc_amplitudes(const RadialProfile& profile,
                                 const ModelParams& params, const ChannelExponent& s) {
    params.validate();
    const size_t n = profile.radii.size();
    if (n < 4 || profile.values.size() != n)
        throw DomainError("bc_amplitudes: need >= 4 sampled radii");
    for (double r : profile.radii)
        if (!(r > 0.0) || r > 1e-2 * params.r_t)
            throw DomainError("bc_amplitudes: radii must satisfy 0 < R/R_t <= 1e-2");

    const Complex sc = s.order();
    // Normal equations for the two-column design [ (R/R_t)^{-s}, (R/R_t)^{+s} ].
    Complex g01 = 0.0, rhs0 = 0.0, rhs1 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double log_ratio = std::log(profile.radii[i] / params.r_t);
        const Complex phi_m = std::exp(-sc * log_ratio);
        const Complex phi_p = std::exp(sc * log_ratio);
        g01 += std::conj(phi_m) * phi_p;
        rhs0 += std::conj(phi_m) * profile.values[i];
        rhs1 += std::conj(phi_p) * profile.values[i];
    }
    // Basis columns have unit modulus for purely imaginary s, so the Gram
    // matrix is [[n, g01], [conj(g01), n]].
    const double nn = static_cast<double>(n);
    const double g = std::abs(g01);
    if (g >= nn || std::sqrt((nn + g) / (nn - g)) > 1e8)
        throw FitError("bc_amplitudes: design matrix condition number above 1e8");
    const Complex det = nn * nn - g01 * std::conj(g01);
    const Complex c_minus = (nn * rhs0 - g01 * rhs1) / det;
    const Complex c_plus = (nn * rhs1 - std::conj(g01) * rhs0) / det;
    return BoundaryAmplitudes{c_minus, c_plus};
}

double norm_integral(Complex E, const ChannelExponent& s, const QuadratureSpec& spec) {
    const Complex kappa = core::kappa_of_energy(E);
    const double kabs = std::abs(kappa);
    const Complex sc = s.order();
    const auto integrand = [&](double r) -> Complex {
        const Complex f = specfun::bessel_k(sc, kappa * r, spec);
        return Complex(r * std::norm(f), 0.0);
    };
    // |K|^2 is bounded as R -> 0 (purely oscillatory powers), so the [0, delta]
    // remainder is O(delta^2) and negligible below; the tail decays like
    // e^{-2 Re kappa R}.
    const double delta = 1e-8 / kabs;
    const double mid = 1.0 / kabs;
    const double upper = std::max(
        (45.0 + std::log(1.0 / spec.relative_tolerance)) / (2.0 * kappa.real()),
        2.0 * mid);
    const Complex low = specfun::integrate_adaptive(integrand, delta, mid, spec);
    const Complex high = specfun::integrate_adaptive(integrand, mid, upper, spec);
    return low.real() + high.real();
}

}  // namespace efimov::hyperradial
