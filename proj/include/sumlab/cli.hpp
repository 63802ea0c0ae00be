#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sumlab/summatory.hpp"

namespace sumlab::cli {

inline const std::vector<std::string> commands = {
    "scan", "mellin-check", "series-check", "theta-map", "weights-dump", "oracle-compare", "l2", "asymptotic",
};

struct RunConfig {
    std::string command;
    std::string lfunction = "ZETA";
    std::vector<double> omegas{0.25};
    std::vector<int> ks{1};
    double x_lo = 1.0;
    double x_hi = 1e4;
    int points = 4000;
    summatory::Spacing spacing = summatory::Spacing::log;
    std::string out_dir = ".";
    std::map<std::string, double> tolerances;
    int threads = 1;
    std::string backend = "auto"; // auto | pipeline | closed_form
    std::vector<double> s_points;  // empty: per-command defaults
    double c = 3.0;
    double T = 150.0;
    std::uint64_t seed = 1;
    double sigma_lo = 0.5, sigma_hi = 2.0, t_lo = 0.1, t_hi = 50.0;
    int sigma_points = 16;

    /// Throws ConfigParseError or OmegaOutOfRange.
    void validate() const;
    /// key=value lines describing every field, in a fixed order.
    std::vector<std::string> echo() const;
    double tolerance(const std::string& key, double fallback) const;
};

/// Applies one key=value setting; keys are the long flag names without "--".
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Reads a key=value file ('#' starts a comment); errors cite the line.
void apply_config_file(RunConfig& cfg, std::istream& in, const std::string& origin);

/// Runs the configured command; returns 0 iff every requested check passed.
int run(const RunConfig& cfg, std::ostream& log);

} // namespace sumlab::cli
