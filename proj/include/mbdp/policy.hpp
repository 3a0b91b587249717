#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mbdp/model.hpp"

namespace mbdp {

class PolicyNode;

// Policy trees are immutable and shared: a backup links new roots to existing
// subtrees instead of copying them, so a tree is really a DAG whose size grows
// linearly with its depth.
using PolicyTree = std::shared_ptr<const PolicyNode>;

// One decision node of a single agent's policy tree. A node of depth 1 is a
// leaf. Deeper nodes hold one child slot per local observation; an empty slot
// marks a branch that has not been assigned yet (partial tree).
class PolicyNode {
public:
    int action() const { return action_; }
    int depth() const { return depth_; }
    bool is_leaf() const { return depth_ == 1; }
    // True when every branch at every level below is present.
    bool complete() const { return complete_; }
    const std::vector<PolicyTree>& children() const { return children_; }
    const PolicyTree& child(std::size_t observation) const { return children_[observation]; }

    static PolicyTree leaf(int action);
    // Every present child must have the same depth; at least one must be present.
    static PolicyTree internal(int action, std::vector<PolicyTree> children);

private:
    PolicyNode(int action, int depth, std::vector<PolicyTree> children);

    int action_;
    int depth_;
    bool complete_;
    std::vector<PolicyTree> children_;
};

// Structural equality (same actions, same branch structure), independent of
// node identity.
bool structurally_equal(const PolicyTree& a, const PolicyTree& b);

// Number of distinct nodes reachable from the root.
std::size_t distinct_node_count(const PolicyTree& tree);

// One complete policy tree per agent, all of the same depth.
class JointPolicy {
public:
    JointPolicy() = default;
    // Throws DataError when a tree is missing, incomplete, or depths differ.
    explicit JointPolicy(std::vector<PolicyTree> trees);

    std::size_t num_agents() const { return trees_.size(); }
    int horizon() const { return trees_.empty() ? 0 : trees_.front()->depth(); }
    const PolicyTree& tree(std::size_t agent) const { return trees_[agent]; }
    const std::vector<PolicyTree>& trees() const { return trees_; }

private:
    std::vector<PolicyTree> trees_;
};

// Values of tuples of policy nodes, one entry per state. Keys are node
// identities. Entries are written once; concurrent writers of the same key
// must agree on the value, so insert-if-absent is sufficient.
class ValueTable {
public:
    using Key = std::vector<const PolicyNode*>;

    const std::vector<double>* find(const Key& key) const;
    const std::vector<double>& insert(const Key& key, std::vector<double> values);
    std::size_t size() const;

    struct KeyHash {
        std::size_t operator()(const Key& key) const noexcept;
    };

private:
    mutable std::mutex mutex_;
    std::unordered_map<Key, std::vector<double>, KeyHash> values_;
};

struct EvaluationOptions {
    bool memoize = true;
};

// V(joint, s) for every state s, by backward induction over the depth levels
// of the joint tree. Throws EvaluationError on a missing branch.
std::vector<double> evaluate_all_states(const DecPomdp& model, const JointPolicy& joint,
                                        EvaluationOptions options = {});

double evaluate_at_state(const DecPomdp& model, const JointPolicy& joint, std::size_t state,
                         EvaluationOptions options = {});

// sum_s b(s) V(joint, s)
double evaluate_at_belief(const DecPomdp& model, const JointPolicy& joint, const BeliefState& belief,
                          EvaluationOptions options = {});

struct SimulationResult {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t episodes = 0;
};

// Monte Carlo execution from the model's initial belief. Each agent follows
// its own tree on its own observations. Reproducible for a fixed seed.
SimulationResult simulate(const JointPolicy& joint, const DecPomdp& model, std::size_t episodes,
                          std::uint64_t seed);

}  // namespace mbdp
