#include "efimov/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace efimov::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

bool is_integer(Complex z) {
    return z.imag() == 0.0 && z.real() == std::floor(z.real());
}

// Lanczos coefficients, g = 7, n = 9 (Godfrey/Numerical Recipes set).
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma for Re z >= 0.5 by the Lanczos approximation. The rational sum
// stays in the right half-plane there, so the principal log is continuous.
Complex ln_gamma_lanczos(Complex z) {
    const Complex zm1 = z - 1.0;
    Complex sum = kLanczos[0];
    for (int k = 1; k < 9; ++k) sum += kLanczos[k] / (zm1 + static_cast<double>(k));
    const Complex t = zm1 + 7.5;  // z - 1 + g + 1/2
    return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

Complex ln_gamma(Complex z) {
    if (is_nonpositive_integer(z)) {
        std::ostringstream msg;
        msg << "ln_gamma: pole at z = " << z.real();
        throw DomainError(msg.str());
    }
    if (z.real() >= 0.5) return ln_gamma_lanczos(z);
    // Shift into the Lanczos region: Gamma(z) = Gamma(z+k) / [z (z+1) ... (z+k-1)].
    // Each log has its cut on the negative real axis, so the sum keeps the
    // principal-branch continuity everywhere else.
    Complex log_shift = 0.0;
    Complex w = z;
    while (w.real() < 0.5) {
        log_shift += std::log(w);
        w += 1.0;
    }
    return ln_gamma_lanczos(w) - log_shift;
}

Complex gamma(Complex z) { return std::exp(ln_gamma(z)); }

namespace {

// QUADPACK dqk15 nodes and weights.
constexpr double kXgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr double kWg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Segment {
    double a, b;
    Complex integral;
    double error;
};

Segment gauss_kronrod_15(const std::function<Complex(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex fc = f(center);
    if (!std::isfinite(fc.real()) || !std::isfinite(fc.imag()))
        throw DomainError("integrate_adaptive: integrand not finite");
    Complex kronrod = kWgk[7] * fc;
    Complex gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        Complex fl = f(center - dx);
        Complex fr = f(center + dx);
        if (!std::isfinite(fl.real()) || !std::isfinite(fl.imag()) ||
            !std::isfinite(fr.real()) || !std::isfinite(fr.imag()))
            throw DomainError("integrate_adaptive: integrand not finite");
        kronrod += kWgk[j] * (fl + fr);
        if (j % 2 == 1) gauss += kWg[j / 2] * (fl + fr);
    }
    return {a, b, kronrod * half, std::abs(kronrod - gauss) * half};
}

}  // namespace

Complex integrate_adaptive(const std::function<Complex(double)>& f, double a,
                           double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");

    std::vector<Segment> segs;
    segs.push_back(gauss_kronrod_15(f, a, b));
    Complex total = segs[0].integral;
    double total_err = segs[0].error;

    int subdivisions = 0;
    while (total_err > std::max(spec.absolute_tolerance,
                                spec.relative_tolerance * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg << "integrate_adaptive: error " << total_err << " above tolerance after "
                << subdivisions << " subdivisions";
            throw AccuracyError(msg.str(), total, total_err);
        }
        auto worst = std::max_element(
            segs.begin(), segs.end(),
            [](const Segment& u, const Segment& v) { return u.error < v.error; });
        const Segment old = *worst;
        const double mid = 0.5 * (old.a + old.b);
        Segment left = gauss_kronrod_15(f, old.a, mid);
        Segment right = gauss_kronrod_15(f, mid, old.b);
        total += left.integral + right.integral - old.integral;
        total_err += left.error + right.error - old.error;
        *worst = left;
        segs.push_back(right);
        ++subdivisions;
    }
    return total;
}

namespace {

// Both I_{+s} and I_{-s} ascending series summed together; returns
// (pi/2) (I_{-s} - I_s) / sin(pi s).
Complex k_by_series(Complex s, Complex z) {
    const Complex log_half_z = std::log(0.5 * z);
    const Complex q = 0.25 * z * z;
    // I_{+/-s}(z) = (z/2)^{+/-s} sum_k q^k / (k! (1 +/- s)_k) / Gamma(1 +/- s)
    Complex term_p = std::exp(s * log_half_z - ln_gamma(1.0 + s));
    Complex term_m = std::exp(-s * log_half_z - ln_gamma(1.0 - s));
    Complex sum_p = term_p;
    Complex sum_m = term_m;
    for (int k = 0; k < 400; ++k) {
        const double kk = static_cast<double>(k);
        term_p *= q / ((kk + 1.0) * (kk + 1.0 + s));
        term_m *= q / ((kk + 1.0) * (kk + 1.0 - s));
        sum_p += term_p;
        sum_m += term_m;
        if (std::abs(term_p) <= 1e-18 * std::abs(sum_p) &&
            std::abs(term_m) <= 1e-18 * std::abs(sum_m)) {
            return 0.5 * kPi * (sum_m - sum_p) / std::sin(kPi * s);
        }
    }
    throw AccuracyError("bessel_k_series: ascending series did not converge",
                        0.5 * kPi * (sum_m - sum_p) / std::sin(kPi * s), 1.0);
}

}  // namespace

Complex bessel_k_series(Complex order, Complex z) {
    if (!(z.real() > 0.0)) throw DomainError("bessel_k: requires Re z > 0");
    if (is_integer(order))
        throw DomainError("bessel_k_series: integer order degenerates; use the integral regime");
    return k_by_series(order, z);
}

Complex bessel_k_integral(Complex order, Complex z, const QuadratureSpec& spec) {
    if (!(z.real() > 0.0)) throw DomainError("bessel_k: requires Re z > 0");
    // Scaled representation: K_s(z) = e^{-z} Int exp(-z (cosh t - 1)) cosh(s t) dt.
    // Pulling out e^{-z} keeps the integrand O(1), so the relative tolerance
    // survives even deep in the exponential tail (Re z >> 1).
    const double budget = 40.0 + std::log(1.0 / spec.relative_tolerance) +
                          12.0 * std::abs(order.real());
    const double theta = std::arg(z);
    const auto scaled_integrand = [&](Complex t) {
        const Complex sh = std::sinh(0.5 * t);
        return std::exp(-z * (2.0 * sh * sh)) * std::cosh(order * t);
    };

    if (std::abs(theta) < 0.1) {
        const double upper = std::acosh(1.0 + budget / z.real());
        const auto f = [&](double t) { return scaled_integrand(Complex(t, 0.0)); };
        return std::exp(-z) * integrate_adaptive(f, 0.0, upper, spec);
    }

    // For z well off the positive real axis the straight contour oscillates
    // through ~ budget tan(arg z) radians, which is unbounded as arg z ->
    // pi/2. Bending the contour to 0 -> -i arg z -> U - i arg z aligns
    // z cosh t with the positive real axis at large |t|, capping the total
    // phase near |z| radians independent of the angle.
    const double sgn = theta >= 0.0 ? 1.0 : -1.0;
    const auto descent = [&](double v) {
        return scaled_integrand(Complex(0.0, -sgn * v));
    };
    const Complex leg1 = Complex(0.0, -sgn) *
                         integrate_adaptive(descent, 0.0, std::abs(theta), spec);

    const double upper = std::log(2.0 * (budget + std::abs(z)) / std::abs(z)) + 1.0;
    const auto ray = [&](double u) { return scaled_integrand(Complex(u, -theta)); };
    const Complex leg2 = integrate_adaptive(ray, 0.0, upper, spec);
    return std::exp(-z) * (leg1 + leg2);
}

Complex bessel_k(Complex order, Complex z, const QuadratureSpec& spec) {
    if (!(z.real() > 0.0)) throw DomainError("bessel_k: requires Re z > 0");
    // The reflection through sin(pi s) degenerates near integer order; the
    // integral representation has no such restriction.
    const bool near_integer = std::abs(std::sin(kPi * order)) < 0.1;
    if (!near_integer && std::abs(z) <= 2.0) return k_by_series(order, z);
    return bessel_k_integral(order, z, spec);
}

std::pair<Complex, Complex> small_z_coefficients(Complex order, Complex kappa,
                                                 double r_t) {
    if (is_integer(order))
        throw DomainError("small_z_coefficients: integer order degenerates");
    if (!(kappa.real() > 0.0))
        throw DomainError("small_z_coefficients: requires Re kappa > 0");
    if (!(r_t > 0.0)) throw DomainError("small_z_coefficients: requires R_t > 0");
    const Complex log_arg = std::log(0.5 * kappa * r_t);
    const Complex c_minus = 0.5 * std::exp(ln_gamma(order) - order * log_arg);
    const Complex c_plus = 0.5 * std::exp(ln_gamma(-order) + order * log_arg);
    return {c_minus, c_plus};
}

}  // namespace efimov::specfun
