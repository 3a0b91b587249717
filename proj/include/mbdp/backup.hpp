#pragma once

#include <cstddef>
#include <vector>

#include "mbdp/joint_values.hpp"
#include "mbdp/model.hpp"
#include "mbdp/policy.hpp"

namespace mbdp {

inline constexpr std::size_t kDefaultBackupCap = 2'000'000;

// Per-agent tree lists of uniform depth without repeated node identities.
struct CandidateSet {
    TreeSets trees;

    std::size_t num_agents() const { return trees.size(); }
    std::size_t size(std::size_t agent) const { return trees[agent].size(); }
    int depth() const;
    // Throws DataError when the invariants do not hold.
    void check() const;
};

// Per agent, the local observations kept by a partial backup, in the order
// they were collected.
struct ObservationSelection {
    std::vector<std::vector<int>> per_agent;

    bool contains(std::size_t agent, int observation) const;
    // Joint observations whose components are all selected.
    std::vector<JointObservationId> joint_in(const DecPomdp& model) const;
    // The complement of joint_in.
    std::vector<JointObservationId> joint_out(const DecPomdp& model) const;
    // Every agent keeps all of its observations.
    bool is_full(const DecPomdp& model) const;

    static ObservationSelection full(const DecPomdp& model);
};

// All depth-1 trees (one leaf per action) for every agent.
CandidateSet one_step_trees(const DecPomdp& model);

// Number of trees a backup of `input_size` trees produces for one agent:
// |A_i| * input_size^k, or 0 when the result would overflow.
std::size_t backup_count(std::size_t num_actions, std::size_t input_size, std::size_t branches);

// Every depth-(t+1) tree whose children come from the depth-t input, for each
// agent. Order: action-major, then child assignments lexicographic over input
// positions with the first observation most significant. Throws CapacityError
// when an agent's output would exceed `cap`.
CandidateSet exhaustive_backup(const DecPomdp& model, const CandidateSet& sets,
                               std::size_t cap = kDefaultBackupCap);

// Like exhaustive_backup, but only the selected observations receive children;
// the other branches are left empty.
CandidateSet partial_backup(const DecPomdp& model, const CandidateSet& selected, const ObservationSelection& selection,
                            std::size_t cap = kDefaultBackupCap);

// Ranks joint observations by probability after `action` in `previous_belief`
// (ties by lower index), then walks the ranking collecting each agent's
// distinct local observations until every agent has min(max_obs, |O_i|).
ObservationSelection rank_observations(const DecPomdp& model, const BeliefState& previous_belief,
                                       JointActionId action, std::size_t max_obs);

struct FillStats {
    std::size_t sweeps = 0;
    std::size_t swaps = 0;
};

// Completes partial trees. Missing branches start at the first donor; then,
// one agent at a time, every missing branch is moved to the donor that
// maximises the tree's best joint value at `belief` against the other agents'
// current trees, until no single-branch change improves. Rounds over agents
// repeat until nothing changes (bounded by `max_rounds`). Throws DataError
// when a needed donor list is empty.
CandidateSet fill_missing(const DecPomdp& model, const CandidateSet& partials, const CandidateSet& donors,
                          const BeliefState& belief, FillStats* stats = nullptr, std::size_t max_rounds = 50);

// Same, with the donors' value table already at hand.
CandidateSet fill_missing(const DecPomdp& model, const CandidateSet& partials, const LevelTable& donors,
                          const BeliefState& belief, FillStats* stats = nullptr, std::size_t max_rounds = 50);

// Iterated elimination of pointwise-dominated trees: a tree is dropped when
// another tree of the same agent is at least as good against every (state,
// opposing tuple) pair and strictly better for one of them, or identical
// everywhere and listed earlier. Never empties a set. Relative order of the
// survivors is preserved.
CandidateSet pointwise_prune(const DecPomdp& model, const CandidateSet& sets);

}  // namespace mbdp
