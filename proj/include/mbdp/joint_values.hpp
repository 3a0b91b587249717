#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "mbdp/model.hpp"
#include "mbdp/policy.hpp"

namespace mbdp {

// Per-agent lists of policy trees; element i holds agent i's trees.
using TreeSets = std::vector<std::vector<PolicyTree>>;

// A tree expressed relative to a child set: its root action and, per local
// observation, the position of the child in that agent's child list (-1 for a
// missing branch).
struct TreeShape {
    int action = 0;
    std::vector<int> children;
};

// V(q_1..q_n, s) for every cross-agent tuple of trees drawn from a set of
// equal-depth trees. Tuples are flattened mixed-radix with agent 0 most
// significant, matching the joint action encoding.
class LevelTable {
public:
    // Evaluates `sets` bottom-up, building the tables of the distinct
    // children on the way down.
    static LevelTable compute(const DecPomdp& model, TreeSets sets);
    // Evaluates `sets` whose children all belong to `children`.
    static LevelTable compute(const DecPomdp& model, TreeSets sets, const LevelTable& children);

    const TreeSets& sets() const { return sets_; }
    std::size_t num_agents() const { return sets_.size(); }
    std::size_t set_size(std::size_t agent) const { return sets_[agent].size(); }
    std::size_t num_tuples() const { return num_tuples_; }
    std::size_t num_states() const { return num_states_; }
    int depth() const { return depth_; }
    std::size_t stride(std::size_t agent) const { return strides_[agent]; }

    std::size_t tuple_index(std::span<const std::size_t> positions) const;
    std::span<const double> values(std::size_t tuple) const {
        return {values_.data() + tuple * num_states_, num_states_};
    }
    double value(std::size_t tuple, std::size_t state) const { return values_[tuple * num_states_ + state]; }

    // Position of a node in agent i's list, or -1.
    int position(std::size_t agent, const PolicyNode* node) const;

    // Shape of `tree` relative to this table's sets (used when this table
    // holds the children of `tree`).
    TreeShape shape_of(std::size_t agent, const PolicyTree& tree) const;

private:
    TreeSets sets_;
    std::vector<std::unordered_map<const PolicyNode*, int>> positions_;
    std::vector<std::size_t> strides_;
    std::size_t num_tuples_ = 0;
    std::size_t num_states_ = 0;
    int depth_ = 0;
    std::vector<double> values_;

    void index_sets();
};

// Scores trees whose children live in a common LevelTable at a fixed belief.
// For joint action a and joint observation o it precomputes
//   G[a][o][c] = sum_s' w_a(s') O(o|a,s') V(c, s'),   w_a = b propagated under a,
// so a candidate tuple costs one lookup per joint observation.
class BeliefScorer {
public:
    // `children` may be null when the scored trees are leaves.
    BeliefScorer(const DecPomdp& model, const BeliefState& belief, const LevelTable* children);

    double immediate(JointActionId action) const { return immediate_[action]; }

    // Value of the tuple whose member i has shape shapes[i]. Every child slot
    // must be filled.
    double value(std::span<const TreeShape* const> shapes) const;

    // Two-agent fast path.
    double value(const TreeShape& first, const TreeShape& second) const;

private:
    const DecPomdp* model_;
    const LevelTable* children_;
    std::vector<double> immediate_;
    std::vector<double> future_;  // [a][o][child tuple]
    std::size_t child_tuples_ = 0;
    std::vector<std::vector<int>> observation_parts_;  // [o][agent]
    std::vector<std::size_t> action_strides_;
};

}  // namespace mbdp
