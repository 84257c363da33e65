#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "efimov/cli.hpp"
#include "efimov/core.hpp"

namespace {

std::string utc_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_string_trimmed(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

struct CommonOptions {
    std::string format = "csv";
    int precision = 12;
    std::string out_path;
    std::string units = "natural";
    double rt = 1.0;
    double rt_nm = 30.0;
    double mass_amu = 133.0;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_units) {
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--precision", opt.precision, "Significant digits")
        ->check(CLI::Range(6, 17));
    cmd->add_option("--out", opt.out_path, "Output path (default stdout)");
    if (with_units) {
        cmd->add_option("--rt", opt.rt, "Three-body parameter R_t (natural units)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--units", opt.units, "Unit system for the emitted values")
            ->check(CLI::IsMember({"natural", "physical"}));
        cmd->add_option("--rt-nm", opt.rt_nm, "R_t in nanometres (physical units)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--mass-amu", opt.mass_amu, "Atom mass in amu (physical units)")
            ->check(CLI::PositiveNumber);
    }
}

efimov::cli::OutputFormat make_format(const CommonOptions& opt) {
    efimov::cli::OutputFormat fmt;
    fmt.kind = opt.format == "json" ? efimov::cli::OutputFormat::Kind::json
                                    : efimov::cli::OutputFormat::Kind::csv;
    fmt.precision = opt.precision;
    return fmt;
}

int emit(const CommonOptions& opt, const efimov::cli::Table& table,
         efimov::cli::RunManifest manifest, double channel_exponent) {
    manifest.channel_exponent = channel_exponent;
    manifest.timestamp = utc_timestamp();
    if (opt.out_path.empty()) {
        efimov::cli::write_table(std::cout, table, manifest, make_format(opt));
        return 0;
    }
    std::ofstream file(opt.out_path);
    if (!file) {
        std::cerr << "error: cannot open output path " << opt.out_path << "\n";
        return 2;
    }
    efimov::cli::write_table(file, table, manifest, make_format(opt));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Efimov trimers with three-body losses: spectra, decay rates, "
                 "wavefunctions, and the numerical verification suite"};
    app.require_subcommand(1);

    CommonOptions spectrum_opt, rotate_opt, wave_opt;
    double eta = 0.0;
    int n_min = 0, n_max = 0;
    auto* spectrum = app.add_subcommand("spectrum", "Complex trimer energies");
    spectrum->add_option("--eta", eta, "Inelasticity parameter eta_*")
        ->check(CLI::NonNegativeNumber);
    spectrum->add_option("--n-min", n_min, "Lowest Efimov index");
    spectrum->add_option("--n-max", n_max, "Highest Efimov index");
    add_common(spectrum, spectrum_opt, true);

    int rot_n = 0, rot_steps = 50;
    auto* rotate = app.add_subcommand("rotate", "Spectral rotation trajectory");
    rotate->add_option("--n", rot_n, "Efimov index");
    rotate->add_option("--steps", rot_steps, "Points on the eta grid")
        ->check(CLI::Range(2, 1000000));
    add_common(rotate, rotate_opt, false);

    int wf_n = 0, wf_points = 200;
    double wf_eta = 0.0, wf_rmax = 10.0;
    auto* wavefunction = app.add_subcommand("wavefunction", "Hyperradial profile F(R)");
    wavefunction->add_option("--n", wf_n, "Efimov index");
    wavefunction->add_option("--eta", wf_eta, "Inelasticity parameter eta_*")
        ->check(CLI::NonNegativeNumber);
    wavefunction->add_option("--r-max", wf_rmax, "Largest radius (units R_t)")
        ->check(CLI::PositiveNumber);
    wavefunction->add_option("--points", wf_points, "Grid size")
        ->check(CLI::Range(2, 10000000));
    add_common(wavefunction, wave_opt, false);

    std::string verify_level = "full";
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "Numerical verification suite");
    verify->add_option("--level", verify_level, "fast skips ODE and Bethe-Peierls checks")
        ->check(CLI::IsMember({"fast", "full"}));
    verify->add_option("--out", verify_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const efimov::ChannelExponent s = efimov::core::solve_channel_exponent(1e-12);

        if (spectrum->parsed()) {
            efimov::cli::PhysicalContext phys;
            phys.physical = spectrum_opt.units == "physical";
            phys.r_t_nm = spectrum_opt.rt_nm;
            phys.mass_amu = spectrum_opt.mass_amu;
            const auto table = efimov::cli::spectrum_table(eta, n_min, n_max,
                                                           spectrum_opt.rt, s, phys);
            efimov::cli::RunManifest m;
            m.command = "spectrum";
            m.parameters = {{"eta", to_string_trimmed(eta)},
                            {"n_min", std::to_string(n_min)},
                            {"n_max", std::to_string(n_max)},
                            {"rt", to_string_trimmed(spectrum_opt.rt)},
                            {"units", spectrum_opt.units},
                            {"format", spectrum_opt.format},
                            {"precision", std::to_string(spectrum_opt.precision)}};
            if (phys.physical) {
                m.parameters.emplace_back("rt_nm", to_string_trimmed(phys.r_t_nm));
                m.parameters.emplace_back("mass_amu", to_string_trimmed(phys.mass_amu));
            }
            return emit(spectrum_opt, table, m, s.magnitude);
        }
        if (rotate->parsed()) {
            const auto table = efimov::cli::rotate_table(rot_n, rot_steps, s);
            efimov::cli::RunManifest m;
            m.command = "rotate";
            m.parameters = {{"n", std::to_string(rot_n)},
                            {"steps", std::to_string(rot_steps)},
                            {"format", rotate_opt.format},
                            {"precision", std::to_string(rotate_opt.precision)}};
            return emit(rotate_opt, table, m, s.magnitude);
        }
        if (wavefunction->parsed()) {
            const auto table =
                efimov::cli::wavefunction_table(wf_n, wf_eta, wf_rmax, wf_points, s);
            efimov::cli::RunManifest m;
            m.command = "wavefunction";
            m.parameters = {{"n", std::to_string(wf_n)},
                            {"eta", to_string_trimmed(wf_eta)},
                            {"r_max", to_string_trimmed(wf_rmax)},
                            {"points", std::to_string(wf_points)},
                            {"format", wave_opt.format},
                            {"precision", std::to_string(wave_opt.precision)}};
            return emit(wave_opt, table, m, s.magnitude);
        }
        if (verify->parsed()) {
            const auto level = verify_level == "fast" ? efimov::cli::VerifyLevel::fast
                                                      : efimov::cli::VerifyLevel::full;
            const auto header = [&](std::ostream& out) {
                out << "# command: verify\n# parameters: level=" << verify_level
                    << "\n# channel_exponent: "
                    << efimov::cli::format_number(s.magnitude, 15)
                    << "\n# tool_version: " << efimov::cli::kToolVersion
                    << "\n# timestamp: " << utc_timestamp() << "\n";
            };
            bool ok;
            if (verify_out.empty()) {
                header(std::cout);
                ok = efimov::cli::run_verify(level, s, std::cout);
            } else {
                std::ofstream file(verify_out);
                if (!file) {
                    std::cerr << "error: cannot open output path " << verify_out << "\n";
                    return 2;
                }
                header(file);
                ok = efimov::cli::run_verify(level, s, file);
            }
            return ok ? 0 : 4;
        }
    } catch (const efimov::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const efimov::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 5;
    }
    return 0;
}
