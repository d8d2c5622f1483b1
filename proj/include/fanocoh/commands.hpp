#ifndef FANOCOH_COMMANDS_HPP
#define FANOCOH_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fanocoh/asymmetry.hpp"
#include "fanocoh/empirical.hpp"
#include "fanocoh/fit.hpp"

namespace fanocoh::cli
{

// Process exit codes shared by all subcommands.
enum ExitCode : int
{
    exit_ok = 0,
    exit_error = 1,          // invalid input, I/O failure
    exit_quality = 2,        // results written, but quality flags fired
    exit_not_converged = 3,  // fit did not converge
};

struct GlobalConfig
{
    std::uint64_t seed = 0;
    std::filesystem::path out = ".";
};

struct SynthConfig
{
    double q = 2.0;
    std::vector<double> g{1.0};
    double scale = 1.0;
    double baseline = 0.0;
    double eps_min = -8.0;
    double eps_max = 8.0;
    std::size_t points = 1601;
    std::string noise = "none";  // none | gaussian | poisson
    double sigma = 0.01;
    double counts = 1000.0;
    std::string name = "spectrum";
};

struct AnalyzeConfig
{
    std::filesystem::path input;
    std::string method = "lineshape";  // lineshape | quadratic
    std::size_t bootstrap = 200;
    double axis_rescale = 3.0;
    double expected_scale = 1.0;
    bool free_scale = false;  // skip the expected-scale consistency check
};

struct FitConfig
{
    std::filesystem::path input;
    std::optional<double> freeze_q;
    std::optional<double> freeze_g;
    std::optional<double> freeze_scale;
    std::optional<double> freeze_baseline;
    int max_iterations = 500;
};

struct FiguresConfig
{
    std::vector<std::string> which{"1c", "1d", "1e", "2", "3"};
    std::vector<double> q_list{0.0, 0.5, 1.5, 3.0};  // Fano curves in 1e
    double window = 50.0;                             // 1e extrema search over [-window, window]
    double fig3_eps0_max = 6.0;
    double fig3_eps0_step = 0.02;
    double fig3_amax_step = 0.005;
};

struct MimicConfig
{
    double q = 2.0;
    double g = 0.6;
    std::size_t points = 10001;
    double window = 50.0;
};

struct AnalyzeOutcome
{
    CoherenceReport report;
    int exit_code = exit_ok;
};

struct FitOutcome
{
    FitResult result;
    int exit_code = exit_ok;
};

struct MimicOutcome
{
    MimicryMap map;
    double residual = 0.0;  // max |alpha (beta + I(q, g)) - I(q', 1)| over the grid
    int exit_code = exit_ok;
};

// Resolved configuration in the --config file format (TOML, one key per flag).
std::string config_toml(const GlobalConfig& global, const std::string& command, const std::string& body);

// Each command writes its artifacts and "<command>.config.toml" into global.out
// and returns the written paths (synth, figures) or the computed outcome.
std::vector<std::filesystem::path> cmd_synth(const GlobalConfig& global, const SynthConfig& cfg);
AnalyzeOutcome cmd_analyze(const GlobalConfig& global, const AnalyzeConfig& cfg);
FitOutcome cmd_fit(const GlobalConfig& global, const FitConfig& cfg);
std::vector<std::filesystem::path> cmd_figures(const GlobalConfig& global, const FiguresConfig& cfg);
MimicOutcome cmd_mimic(const GlobalConfig& global, const MimicConfig& cfg);

// Full command line front end; returns the process exit code.
int run(int argc, char** argv);

}  // namespace fanocoh::cli

#endif  // FANOCOH_COMMANDS_HPP
