#include "efimov/cli.hpp"

#include <cmath>
#include <cstdio>

#include "efimov/ansatz3d.hpp"
#include "efimov/core.hpp"
#include "efimov/hyperradial.hpp"

namespace efimov::cli {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string format_number(double x, int precision) {
    if (x == 0.0) return "0";
    char buf[64];
    const double a = std::abs(x);
    if (a < 1e-4 || a >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.*e", precision - 1, x);
    } else {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    }
    return buf;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

void write_csv(std::ostream& out, const Table& table, const RunManifest& m,
               const OutputFormat& fmt) {
    out << "# command: " << m.command << "\n";
    out << "# parameters:";
    for (const auto& [key, value] : m.parameters) out << ' ' << key << '=' << value;
    out << "\n";
    out << "# channel_exponent: " << format_number(m.channel_exponent, 15) << "\n";
    out << "# tool_version: " << m.tool_version << "\n";
    out << "# timestamp: " << m.timestamp << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_number(row[c], fmt.precision);
        out << "\n";
    }
}

void write_json(std::ostream& out, const Table& table, const RunManifest& m,
                const OutputFormat& fmt) {
    out << "{\n  \"manifest\": {\n    \"command\": \"" << json_escape(m.command)
        << "\",\n    \"parameters\": {";
    for (size_t i = 0; i < m.parameters.size(); ++i) {
        out << (i ? ", " : "") << '"' << json_escape(m.parameters[i].first) << "\": \""
            << json_escape(m.parameters[i].second) << '"';
    }
    out << "},\n    \"channel_exponent\": " << format_number(m.channel_exponent, 15)
        << ",\n    \"tool_version\": \"" << json_escape(m.tool_version)
        << "\",\n    \"timestamp\": \"" << json_escape(m.timestamp) << "\"\n  },\n";
    out << "  \"columns\": [";
    for (size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? ", " : "") << '"' << json_escape(table.columns[c]) << '"';
    out << "],\n  \"rows\": [";
    for (size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n    " : "\n    ") << '[';
        for (size_t c = 0; c < table.rows[r].size(); ++c)
            out << (c ? ", " : "") << format_number(table.rows[r][c], fmt.precision);
        out << ']';
    }
    out << "\n  ]\n}\n";
}

}  // namespace

void write_table(std::ostream& out, const Table& table, const RunManifest& manifest,
                 const OutputFormat& format) {
    format.validate();
    if (format.kind == OutputFormat::Kind::csv)
        write_csv(out, table, manifest, format);
    else
        write_json(out, table, manifest, format);
}

Table spectrum_table(double eta, int n_min, int n_max, double rt,
                     const ChannelExponent& s, const PhysicalContext& phys) {
    if (n_min > n_max) throw DomainError("spectrum: n_min > n_max");
    const ModelParams params{eta, rt};

    double energy_scale = 1.0, rate_scale = 1.0, length_scale = 1.0;
    if (phys.physical) {
        const double length_m = phys.r_t_nm * 1e-9 / rt;
        const double mass_kg = phys.mass_amu * kAtomicMassUnit;
        energy_scale = kHbar * kHbar / (mass_kg * length_m * length_m);
        rate_scale = energy_scale / kHbar;
        length_scale = length_m;
    }

    Table t;
    t.columns = {"n",     "re_e",     "im_e",     "abs_e", "arg_e",
                 "gamma_hbar", "re_kappa", "im_kappa", "size"};
    for (int n = n_min; n <= n_max; ++n) {
        const Complex e = core::lossy_energy(n, params, s);
        const TrimerState st = core::make_state(n, e);
        t.rows.push_back({static_cast<double>(n), e.real() * energy_scale,
                          e.imag() * energy_scale, std::abs(e) * energy_scale,
                          core::arg_ccw(e),
                          phys.physical ? st.gamma * rate_scale : st.gamma,
                          st.kappa.real() / length_scale, st.kappa.imag() / length_scale,
                          st.size * length_scale});
    }
    return t;
}

Table rotate_table(int n, int eta_steps, const ChannelExponent& s) {
    if (eta_steps < 2) throw DomainError("rotate: eta_steps must be >= 2");
    const double eta_c = core::critical_eta(s);
    Table t;
    t.columns = {"eta_star", "re_e", "im_e", "arg_e", "gamma_hbar"};
    for (int k = 0; k < eta_steps; ++k) {
        const double eta = eta_c * k / eta_steps;  // half-open [0, eta_c)
        const Complex e = core::lossy_energy(n, ModelParams{eta, 1.0}, s);
        t.rows.push_back({eta, e.real(), e.imag(), core::arg_ccw(e), -2.0 * e.imag()});
    }
    return t;
}

Table wavefunction_table(int n, double eta, double r_max, int points,
                         const ChannelExponent& s) {
    if (!(r_max > 1e-3)) throw DomainError("wavefunction: r_max must exceed 1e-3");
    if (points < 2) throw DomainError("wavefunction: points must be >= 2");
    const Complex e = core::lossy_energy(n, ModelParams{eta, 1.0}, s);
    std::vector<double> radii(points);
    const double log_lo = std::log(1e-3), log_hi = std::log(r_max);
    for (int i = 0; i < points; ++i)
        radii[i] = std::exp(log_lo + (log_hi - log_lo) * i / (points - 1));
    const RadialProfile profile = hyperradial::radial_wavefunction(e, radii, s);
    Table t;
    t.columns = {"r", "re_f", "im_f", "abs_f"};
    for (int i = 0; i < points; ++i)
        t.rows.push_back({radii[i], profile.values[i].real(), profile.values[i].imag(),
                          std::abs(profile.values[i])});
    return t;
}

namespace {

struct VerifyReport {
    std::ostream& out;
    int passed = 0;
    int failed = 0;

    void check(const std::string& name, bool ok, double measured, double tolerance) {
        (ok ? ++passed : ++failed);
        char buf[256];
        std::snprintf(buf, sizeof buf, "[%s] %-42s measured=%.3e tol=%.1e\n",
                      ok ? "PASS" : "FAIL", name.c_str(), measured, tolerance);
        out << buf;
    }
};

const double kEtaGrid[] = {0.0, 0.06, 0.5, 1.0, 1.5};
const int kIndexGrid[] = {-1, 0, 1};

}  // namespace

bool run_verify(VerifyLevel level, const ChannelExponent& s, std::ostream& out) {
    VerifyReport report{out};
    const double mag = s.magnitude;

    report.check("channel_exponent residual", s.residual < 1e-10, s.residual, 1e-10);
    report.check("channel_exponent value", std::abs(mag - 1.00624) < 1e-5,
                 std::abs(mag - 1.00624), 1e-5);
    const double eta_c = core::critical_eta(s);
    report.check("critical_eta value", std::abs(eta_c - 1.5806) < 2e-4,
                 std::abs(eta_c - 1.5806), 2e-4);

    // Rotated-spectrum oracle equivalence: the quantization-condition root
    // from detuned seeds must land on exp(i 2 eta/|s|) E_n^0.
    for (double eta : kEtaGrid) {
        const ModelParams params{eta, 1.0};
        for (int n : kIndexGrid) {
            const Complex expected = core::lossy_energy(n, params, s);
            const Complex seed =
                1.3 * std::exp(Complex(0.0, 1.9 * eta / mag)) *
                core::lossless_energy(n, s, 1.0);
            char name[96];
            try {
                const TrimerState st = hyperradial::find_state(seed, params, s);
                const double rel = std::abs(st.energy - expected) / std::abs(expected);
                std::snprintf(name, sizeof name, "q_root n=%+d eta=%.2f", n, eta);
                report.check(name, rel < 1e-8, rel, 1e-8);

                const double gamma_expected =
                    2.0 * std::sin(2.0 * eta / mag) * std::abs(core::lossless_energy(n, s, 1.0));
                const double gamma_err =
                    std::abs(st.gamma - gamma_expected) / std::abs(expected);
                std::snprintf(name, sizeof name, "decay_rate n=%+d eta=%.2f", n, eta);
                report.check(name, gamma_err < 1e-7, gamma_err, 1e-7);

                // Small-R amplitude fit against the Braaten-Hammer ratio.
                const double fit_top = 1e-4 / std::max(1.0, std::abs(st.kappa));
                std::vector<double> radii(8);
                for (int i = 0; i < 8; ++i)
                    radii[i] = fit_top * std::pow(10.0, -1.0 + i / 7.0);
                const RadialProfile prof =
                    hyperradial::radial_wavefunction(st.energy, radii, s);
                const BoundaryAmplitudes amps = hyperradial::bc_amplitudes(prof, params, s);
                const Complex ratio = amps.outgoing / amps.ingoing;
                const double bc_err = std::abs(ratio + std::exp(-2.0 * eta));
                std::snprintf(name, sizeof name, "bc_ratio n=%+d eta=%.2f", n, eta);
                report.check(name, bc_err < 1e-6, bc_err, 1e-6);
            } catch (const Error& err) {
                std::snprintf(name, sizeof name, "grid n=%+d eta=%.2f", n, eta);
                report.check(std::string(name) + " threw: " + err.what(), false, 0.0, 0.0);
            }
        }
    }

    // Geometric spectrum ratio from the scan.
    try {
        const auto states = hyperradial::scan_states(-1, 1, ModelParams{0.06, 1.0}, s);
        const double expected_ratio = std::exp(2.0 * kPi / mag);
        double worst = 0.0;
        for (size_t i = 0; i + 1 < states.size(); ++i)
            worst = std::max(worst, std::abs(std::abs(states[i + 1].energy) /
                                                 std::abs(states[i].energy) -
                                             expected_ratio) /
                                        expected_ratio);
        report.check("discrete_scaling ratio", worst < 1e-10, worst, 1e-10);
    } catch (const Error& err) {
        report.check(std::string("discrete_scaling threw: ") + err.what(), false, 0.0, 0.0);
    }

    if (level == VerifyLevel::full) {
        // Independent ODE shooting route (find_state_shooting scales the
        // integration depth with the loss angle internally).
        const SolverConfig shoot_cfg;
        for (double eta : kEtaGrid) {
            const ModelParams params{eta, 1.0};
            for (int n : kIndexGrid) {
                const Complex expected = core::lossy_energy(n, params, s);
                const Complex seed =
                    1.3 * std::exp(Complex(0.0, 1.9 * eta / mag)) *
                    core::lossless_energy(n, s, 1.0);
                char name[96];
                std::snprintf(name, sizeof name, "shoot_root n=%+d eta=%.2f", n, eta);
                try {
                    const TrimerState st =
                        hyperradial::find_state_shooting(seed, params, s, shoot_cfg);
                    const double rel =
                        std::abs(st.energy - expected) / std::abs(expected);
                    report.check(name, rel < 1e-7, rel, 1e-7);
                } catch (const Error& err) {
                    report.check(std::string(name) + " threw: " + err.what(), false, 0.0,
                                 0.0);
                }
            }
        }

        // Finite-difference certification of the analytic eigenprofiles.
        for (double eta : kEtaGrid) {
            const ModelParams params{eta, 1.0};
            for (int n : kIndexGrid) {
                const Complex e = core::lossy_energy(n, params, s);
                const double kabs = std::abs(core::kappa_of_energy(e));
                const int npts = 4501;
                std::vector<double> radii(npts);
                for (int i = 0; i < npts; ++i)
                    radii[i] = (0.5 + 4.5 * i / (npts - 1)) / kabs;
                const RadialProfile prof = hyperradial::radial_wavefunction(e, radii, s);
                const double resid = hyperradial::ode_residual(prof, s);
                char name[96];
                std::snprintf(name, sizeof name, "ode_residual n=%+d eta=%.2f", n, eta);
                report.check(name, resid < 1e-5, resid, 1e-5);
            }
        }

        // Bethe-Peierls contact property at 1/a = 0, and its sensitivity.
        try {
            const ModelParams params{0.0, 1.0};
            const Complex e0 = core::lossless_energy(0, s, 1.0);
            const auto bp = ansatz3d::bethe_peierls_check(
                {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, e0, s, params);
            report.check("bethe_peierls at solved s", bp.constant_term_ratio < 1e-4,
                         bp.constant_term_ratio, 1e-4);
            const ChannelExponent detuned{1.01 * mag, s.residual};
            const auto bad = ansatz3d::bethe_peierls_check(
                {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, e0, detuned, params);
            report.check("bethe_peierls detuned detector",
                         bad.constant_term_ratio > 1e-2, bad.constant_term_ratio, 1e-2);
        } catch (const Error& err) {
            report.check(std::string("bethe_peierls threw: ") + err.what(), false, 0.0, 0.0);
        }

        // Norm finiteness and growth toward the critical inelasticity.
        for (int n : kIndexGrid) {
            double previous = 0.0;
            bool growing = true, finite = true;
            for (double eta : kEtaGrid) {
                const Complex e = core::lossy_energy(n, ModelParams{eta, 1.0}, s);
                const double value = hyperradial::norm_integral(e, s);
                if (!std::isfinite(value) || value <= 0.0) finite = false;
                if (value <= previous) growing = false;
                previous = value;
            }
            char name[96];
            std::snprintf(name, sizeof name, "norm growth n=%+d", n);
            report.check(name, finite && growing, previous, 0.0);
        }
    }

    char summary[96];
    std::snprintf(summary, sizeof summary, "VERIFY %s: %d/%d checks passed\n",
                  level == VerifyLevel::full ? "full" : "fast", report.passed,
                  report.passed + report.failed);
    out << summary;
    return report.failed == 0;
}

}  // namespace efimov::cli
