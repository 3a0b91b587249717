#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mbdp/backup.hpp"
#include "mbdp/heuristics.hpp"
#include "mbdp/joint_values.hpp"
#include "mbdp/model.hpp"
#include "mbdp/policy.hpp"

namespace mbdp {

struct SolverConfig {
    std::size_t max_trees = 3;
    // Clamped to each agent's observation count.
    std::size_t max_obs = std::numeric_limits<std::size_t>::max();
    std::vector<HeuristicKind> heuristics{HeuristicKind::mdp, HeuristicKind::random};
    int recursion_depth = 0;
    std::uint64_t seed = 0;
    std::size_t backup_cap = kDefaultBackupCap;
    // 0: see resolve_threads(). Never changes results.
    std::size_t threads = 0;
    std::size_t fill_rounds = 50;

    // Throws UsageError on out-of-range settings.
    void check() const;
};

// One iteration of the outer loop: trees of depth `depth` were selected and
// backed up to depth + 1.
struct LevelReport {
    int depth = 0;
    std::vector<std::string> heuristics;     // per selection round
    std::vector<double> selected_values;     // best tuple value at that round's belief
    std::vector<std::size_t> selected;       // trees kept per agent
    ObservationSelection observations;       // observations backed up per agent
    std::vector<std::size_t> backed_up;      // trees after the backup per agent
    FillStats fill;
    double milliseconds = 0.0;               // wall clock, not part of the result
};

struct SolveReport {
    std::string algorithm;
    JointPolicy policy;
    double value = 0.0;
    std::vector<LevelReport> levels;
    // Value of each recursion level (index 0: base portfolio); `levels` and
    // `policy` belong to the best one.
    std::vector<double> recursion_values;
    std::size_t chosen_recursion = 0;
    double milliseconds = 0.0;
};

// Algorithm loop with partial backups over the cfg.max_obs most likely local
// observations, completing the missing branches by hill climbing.
SolveReport improved_mbdp(const DecPomdp& model, const SolverConfig& cfg);

// The same loop with full backups.
SolveReport mbdp(const DecPomdp& model, const SolverConfig& cfg);

struct ExactResult {
    JointPolicy policy;
    double value = 0.0;
    // Trees per agent kept at each depth 1..horizon-1 after pruning.
    std::vector<std::vector<std::size_t>> pruned_sizes;
    double milliseconds = 0.0;
};

// Exhaustive backups with pointwise pruning, then the best tuple at b0.
ExactResult exact_solve(const DecPomdp& model, int horizon, std::size_t cap = kDefaultBackupCap,
                        std::size_t threads = 0);

struct BaselineReport {
    double value = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;  // 0: closed form
};

// A complete joint policy whose every node draws its action uniformly.
// Throws CapacityError when a tree would exceed `max_nodes` nodes.
JointPolicy random_joint_policy(const DecPomdp& model, int horizon, Rng& rng, std::size_t max_nodes = 1u << 20);

// Expected value of a uniformly random joint policy. With samples == 0 the
// expectation is computed in closed form (every step's joint action is
// uniform and independent of the history); otherwise `samples` random
// policies are drawn and evaluated exactly.
BaselineReport random_policy_baseline(const DecPomdp& model, int horizon, std::uint64_t seed,
                                      std::size_t samples = 0);

// Best tuple under the scorer: the largest value, lowest flat index on ties.
struct TupleChoice {
    double value = 0.0;
    std::vector<std::size_t> positions;
};
TupleChoice best_tuple(const BeliefScorer& scorer, const std::vector<std::vector<const TreeShape*>>& candidates,
                       std::size_t threads);

}  // namespace mbdp
