#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mbdp/analysis.hpp"
#include "mbdp/model.hpp"

namespace mbdp {

inline constexpr const char* kReportSchema = "mbdp-report/1";

enum class Command { solve, exact, evaluate, simulate, bound, bench };
enum class OutputFormat { records, table };

// Exit codes of the command-line driver.
enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_usage = 2, exit_capacity = 3, exit_data = 4 };

struct RunSpec {
    Command command = Command::solve;
    std::string problem;                  // "builtin:<name>" or a file path
    std::string boxpush_config;           // JSON file for builtin:boxpush
    std::optional<int> horizon;
    std::string horizons = "1..4";        // bench
    std::string algorithm = "improved";   // solve: improved | mbdp
    std::size_t max_trees = 3;
    std::optional<std::size_t> max_obs;   // default: all observations
    std::string heuristics = "mdp,random";
    std::optional<int> recursion_depth;
    std::uint64_t seed = 0;
    std::size_t seeds = 1;                // bench: best over seeds seed..seed+seeds-1
    int exact_max_horizon = 3;            // bench
    std::size_t episodes = 200000;
    EpsilonMode epsilon_mode = EpsilonMode::exact;
    std::size_t epsilon_samples = 1000;
    bool with_bound = false;              // solve: also report epsilon and the bound
    std::size_t threads = 0;
    std::string policy;                   // evaluate/simulate input
    std::string policy_out;               // solve/exact output
    std::string output;                   // report destination, default stdout
    OutputFormat format = OutputFormat::records;
    bool timing = true;                   // emit timing records
};

// Parses argv. Throws UsageError on bad flags; returns nullopt when help was
// printed to `out`.
std::optional<RunSpec> parse_arguments(int argc, const char* const* argv, std::ostream& out);

// Executes a spec. Records go to `out` (or spec.output); a one-line error
// record goes to `err`. Returns an ExitCode.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// Full driver: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "1..4,10,20" -> {1,2,3,4,10,20}
std::vector<int> parse_horizon_list(const std::string& text);

// Resolves "builtin:<name>" (optionally with a box-push config file) or a
// problem file.
DecPomdp load_problem(const std::string& source, const std::string& boxpush_config = "");

}  // namespace mbdp
