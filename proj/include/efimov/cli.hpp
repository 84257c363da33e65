#pragma once

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "efimov/types.hpp"

// Machine-readable table emission (CSV / JSON) and the command drivers behind
// the efimov executable.
namespace efimov::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct OutputFormat {
    enum class Kind { csv, json };
    Kind kind = Kind::csv;
    int precision = 12;  // significant digits, in [6, 17]

    void validate() const {
        if (precision < 6 || precision > 17)
            throw DomainError("OutputFormat: precision must be in [6, 17]");
    }
};

// Reproducibility header embedded in every output: CSV comment lines or the
// JSON "manifest" object.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    double channel_exponent = 0.0;
    std::string tool_version = kToolVersion;
    std::string timestamp;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Fixed-significant-digit rendering: scientific for |x| < 1e-4 or >= 1e6,
// plain decimal otherwise, "0" for zero.
std::string format_number(double x, int precision);

void write_table(std::ostream& out, const Table& table, const RunManifest& manifest,
                 const OutputFormat& format);

// Natural <-> SI conversion context for --units physical. The natural length
// unit is r_t_meters / rt so that --rt keeps its meaning in either system.
struct PhysicalContext {
    bool physical = false;
    double r_t_nm = 30.0;     // Cs near the -11 G resonance
    double mass_amu = 133.0;  // 133Cs
};

// Rows (n, Re E, Im E, |E|, arg E, Gamma hbar, Re kappa, Im kappa, size).
Table spectrum_table(double eta, int n_min, int n_max, double rt,
                     const ChannelExponent& s, const PhysicalContext& phys = {});

// Rows (eta_star, Re E, Im E, arg E, Gamma hbar) on a uniform eta grid over
// [0, eta_*c), tracing the spectral rotation of state n.
Table rotate_table(int n, int eta_steps, const ChannelExponent& s);

// Rows (R, Re F, Im F, |F|) on a log-spaced grid in [1e-3, r_max].
Table wavefunction_table(int n, double eta, double r_max, int points,
                         const ChannelExponent& s);

enum class VerifyLevel { fast, full };

// Runs the verification suite, one pass/fail line per check with the measured
// error; returns true iff everything passed. `fast` skips the ODE shooting,
// ODE residual certification, and Bethe-Peierls checks.
bool run_verify(VerifyLevel level, const ChannelExponent& s, std::ostream& out);

}  // namespace efimov::cli
