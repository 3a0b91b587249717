#include "mbdp/policy.hpp"

#include <cmath>
#include <unordered_set>

#include "mbdp/errors.hpp"
#include "mbdp/random.hpp"

namespace mbdp {

PolicyNode::PolicyNode(int action, int depth, std::vector<PolicyTree> children)
    : action_(action), depth_(depth), complete_(true), children_(std::move(children)) {
    for (const auto& c : children_) {
        if (!c || !c->complete()) complete_ = false;
    }
}

PolicyTree PolicyNode::leaf(int action) {
    return PolicyTree(new PolicyNode(action, 1, {}));
}

PolicyTree PolicyNode::internal(int action, std::vector<PolicyTree> children) {
    int child_depth = 0;
    for (const auto& c : children) {
        if (!c) continue;
        if (child_depth == 0) child_depth = c->depth();
        else if (c->depth() != child_depth) throw DataError("policy node children have different depths");
    }
    if (child_depth == 0) throw DataError("internal policy node needs at least one child");
    return PolicyTree(new PolicyNode(action, child_depth + 1, std::move(children)));
}

bool structurally_equal(const PolicyTree& a, const PolicyTree& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->action() != b->action() || a->depth() != b->depth() || a->children().size() != b->children().size())
        return false;
    for (std::size_t o = 0; o < a->children().size(); ++o) {
        if (!structurally_equal(a->child(o), b->child(o))) return false;
    }
    return true;
}

std::size_t distinct_node_count(const PolicyTree& tree) {
    std::unordered_set<const PolicyNode*> seen;
    std::vector<const PolicyNode*> stack{tree.get()};
    while (!stack.empty()) {
        const PolicyNode* n = stack.back();
        stack.pop_back();
        if (!n || !seen.insert(n).second) continue;
        for (const auto& c : n->children()) stack.push_back(c.get());
    }
    return seen.size();
}

JointPolicy::JointPolicy(std::vector<PolicyTree> trees) : trees_(std::move(trees)) {
    if (trees_.empty()) throw DataError("joint policy has no trees");
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (!trees_[i]) throw DataError("joint policy is missing the tree of agent " + std::to_string(i));
        if (!trees_[i]->complete())
            throw DataError("policy tree of agent " + std::to_string(i) + " is incomplete");
        if (trees_[i]->depth() != trees_.front()->depth())
            throw DataError("policy trees of a joint policy must have equal depth");
    }
}

std::size_t ValueTable::KeyHash::operator()(const Key& key) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const PolicyNode* p : key) {
        h ^= std::hash<const void*>{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

const std::vector<double>* ValueTable::find(const Key& key) const {
    std::lock_guard lock(mutex_);
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

const std::vector<double>& ValueTable::insert(const Key& key, std::vector<double> values) {
    std::lock_guard lock(mutex_);
    return values_.try_emplace(key, std::move(values)).first->second;
}

std::size_t ValueTable::size() const {
    std::lock_guard lock(mutex_);
    return values_.size();
}

namespace {

// One tuple of nodes at some depth level, plus the positions of its child
// tuples in the next level (one per joint observation).
struct LevelEntry {
    ValueTable::Key nodes;
    std::vector<std::size_t> children;
};

void check_joint(const DecPomdp& model, const JointPolicy& joint) {
    if (joint.num_agents() != model.num_agents())
        throw DataError("joint policy has " + std::to_string(joint.num_agents()) + " trees, model has " +
                        std::to_string(model.num_agents()) + " agents");
    for (std::size_t i = 0; i < joint.num_agents(); ++i) {
        const auto& t = joint.tree(i);
        if (t->action() < 0 || static_cast<std::size_t>(t->action()) >= model.num_actions(i))
            throw DataError("policy action out of range for agent " + std::to_string(i));
    }
}

JointActionId tuple_action(const DecPomdp& model, const ValueTable::Key& nodes) {
    std::vector<int> parts(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) parts[i] = nodes[i]->action();
    return model.joint_actions().encode(parts);
}

}  // namespace

std::vector<double> evaluate_all_states(const DecPomdp& model, const JointPolicy& joint, EvaluationOptions options) {
    check_joint(model, joint);
    const std::size_t n = model.num_agents();
    const std::size_t ns = model.num_states();
    const std::size_t nobs = model.num_joint_observations();
    const int horizon = joint.horizon();

    // Top-down: collect the tuples reachable at each depth level.
    std::vector<std::vector<LevelEntry>> levels(static_cast<std::size_t>(horizon));
    {
        ValueTable::Key root(n);
        for (std::size_t i = 0; i < n; ++i) root[i] = joint.tree(i).get();
        levels[0].push_back({root, {}});
    }
    for (std::size_t d = 0; d + 1 < levels.size(); ++d) {
        auto& current = levels[d];
        auto& next = levels[d + 1];
        std::unordered_map<ValueTable::Key, std::size_t, ValueTable::KeyHash> index;
        for (auto& entry : current) {
            entry.children.resize(nobs);
            for (std::size_t o = 0; o < nobs; ++o) {
                ValueTable::Key child(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto local = static_cast<std::size_t>(model.joint_observations().component(o, i));
                    const PolicyTree& c = entry.nodes[i]->child(local);
                    if (!c)
                        throw EvaluationError("policy tree of agent " + std::to_string(i) +
                                              " is missing the branch for observation '" +
                                              model.observation_names(i)[local] + "' at depth " +
                                              std::to_string(entry.nodes[i]->depth()));
                    child[i] = c.get();
                }
                if (options.memoize) {
                    auto [it, inserted] = index.try_emplace(child, next.size());
                    if (inserted) next.push_back({child, {}});
                    entry.children[o] = it->second;
                } else {
                    entry.children[o] = next.size();
                    next.push_back({child, {}});
                }
            }
        }
    }

    // Bottom-up: backward induction. With memoization on, a tuple seen before
    // (at any level) is read back from the table instead of recomputed.
    ValueTable memo;
    std::vector<std::vector<std::vector<double>>> values(levels.size());
    for (std::size_t d = levels.size(); d-- > 0;) {
        values[d].resize(levels[d].size());
        for (std::size_t t = 0; t < levels[d].size(); ++t) {
            const auto& entry = levels[d][t];
            if (options.memoize) {
                if (const auto* cached = memo.find(entry.nodes)) {
                    values[d][t] = *cached;
                    continue;
                }
            }
            const JointActionId a = tuple_action(model, entry.nodes);
            std::vector<double> v(ns, 0.0);
            for (std::size_t s = 0; s < ns; ++s) {
                double total = model.expected_reward(s, a);
                if (!entry.children.empty()) {
                    for (const auto& succ : model.successors(s, a)) {
                        double future = 0.0;
                        for (const auto& obs : model.observations_after(a, succ.state))
                            future += obs.probability * values[d + 1][entry.children[obs.observation]][succ.state];
                        total += succ.probability * future;
                    }
                }
                v[s] = total;
            }
            if (options.memoize) memo.insert(entry.nodes, v);
            values[d][t] = std::move(v);
        }
        if (d + 1 < values.size()) values[d + 1].clear();
    }
    return values[0][0];
}

double evaluate_at_state(const DecPomdp& model, const JointPolicy& joint, std::size_t state,
                         EvaluationOptions options) {
    model.check_state(state);
    return evaluate_all_states(model, joint, options)[state];
}

double evaluate_at_belief(const DecPomdp& model, const JointPolicy& joint, const BeliefState& belief,
                          EvaluationOptions options) {
    if (belief.size() != model.num_states()) throw DataError("belief has wrong number of states");
    const auto v = evaluate_all_states(model, joint, options);
    double total = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) total += belief[s] * v[s];
    return total;
}

SimulationResult simulate(const JointPolicy& joint, const DecPomdp& model, std::size_t episodes, std::uint64_t seed) {
    check_joint(model, joint);
    if (joint.horizon() != model.horizon())
        throw DataError("policy depth " + std::to_string(joint.horizon()) + " does not match model horizon " +
                        std::to_string(model.horizon()));
    Rng rng(seed);
    const auto start = model.initial_belief();
    const std::size_t n = model.num_agents();
    std::vector<const PolicyNode*> nodes(n);
    std::vector<int> actions(n);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
        std::size_t s = sample_index(rng, start.probabilities());
        for (std::size_t i = 0; i < n; ++i) nodes[i] = joint.tree(i).get();
        double total = 0.0;
        for (int step = 0; step < joint.horizon(); ++step) {
            for (std::size_t i = 0; i < n; ++i) actions[i] = nodes[i]->action();
            const JointActionId a = model.joint_actions().encode(actions);
            const std::size_t next = sample_successor(rng, model.successors(s, a));
            total += model.reward(s, a, next);
            if (step + 1 < joint.horizon()) {
                const JointObservationId o = sample_observation(rng, model.observations_after(a, next));
                for (std::size_t i = 0; i < n; ++i)
                    nodes[i] = nodes[i]->child(static_cast<std::size_t>(model.joint_observations().component(o, i))).get();
            }
            s = next;
        }
        // Welford update keeps the variance stable over millions of episodes.
        const double delta = total - mean;
        mean += delta / static_cast<double>(e + 1);
        m2 += delta * (total - mean);
    }
    SimulationResult result;
    result.episodes = episodes;
    result.mean = mean;
    if (episodes > 1) {
        const double variance = m2 / static_cast<double>(episodes - 1);
        result.standard_error = std::sqrt(variance / static_cast<double>(episodes));
    }
    return result;
}

}  // namespace mbdp
