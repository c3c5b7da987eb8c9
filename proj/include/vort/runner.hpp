#pragma once

#include <string>
#include <vector>

#include "vort/convection.hpp"

namespace vort {

/// Fully resolved experiment request. Negative/empty values mean
/// "per-problem default".
struct RunConfig {
    std::string problem;  // accuracy|shear_layer|vortex_patch|poisson_bench|heat_maxprin
    int nx = -1, ny = -1;
    double tfinal = -1.0;
    bool limiter_set = false;  // false: problem picks its default limiter
    bool bp = false;
    TvbVariant tvb = TvbVariant::None;
    double tvb_p = -1.0;  // < 0: problem picks its default threshold
    double cfl_fraction = -1.0;
    double re = 0.0;  // > 0 selects Navier-Stokes
    std::string out_dir = ".";
    std::vector<double> snapshots;      // extra output times; empty = defaults
    std::vector<int> accuracy_sweep;    // accuracy resolutions; empty = {32,64,128,256}
    unsigned long long seed = 20240815; // randomized trials
    int trials = 1000;                  // heat_maxprin trials per setting
};

/// Exit codes shared by the library, C API and CLI.
inline constexpr int kRunOk = 0;
inline constexpr int kRunConfigError = 2;
inline constexpr int kRunInvariantError = 3;
inline constexpr int kRunInternalError = 4;

/// Executes one experiment, writing CSV outputs and a manifest into
/// config.out_dir. Returns an exit code; on failure *error describes it.
int run_experiment(const RunConfig& config, std::string* error = nullptr);

/// Parses "t1,t2,..." into snapshot times; throws std::invalid_argument.
std::vector<double> parse_time_list(const std::string& csv);

/// Maps CLI limiter names (none|bp|tvb1|tvb2|bp+tvb1|bp+tvb2) onto the
/// bp/tvb fields; throws std::invalid_argument for unknown names.
void apply_limiter_name(RunConfig& config, const std::string& name);

}  // namespace vort
