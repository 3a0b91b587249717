#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbdp/model.hpp"
#include "mbdp/policy.hpp"
#include "mbdp/random.hpp"

namespace mbdp {

enum class HeuristicKind { mdp, random, policy_replay };

// A top-down policy used only to reach plausible belief states.
class Heuristic {
public:
    // Finite-horizon value iteration on the fully observable model, up to the
    // model's horizon.
    static Heuristic mdp(const DecPomdp& model);
    static Heuristic random();
    // Replays a solved joint policy; its depth bounds the trajectory length.
    static Heuristic replay(JointPolicy policy);

    HeuristicKind kind() const { return kind_; }
    std::string name() const;

    // MDP tables, indexed by steps remaining k = 0..horizon.
    int mdp_horizon() const { return static_cast<int>(values_.size()) - 1; }
    double mdp_value(int steps_remaining, std::size_t state) const;
    JointActionId mdp_action(int steps_remaining, std::size_t state) const;

    const JointPolicy& policy() const { return policy_; }

private:
    HeuristicKind kind_ = HeuristicKind::random;
    std::vector<std::vector<double>> values_;         // [k][s]
    std::vector<std::vector<JointActionId>> greedy_;  // [k][s], k >= 1
    JointPolicy policy_;
};

// Beliefs b^0..b^d with the joint action taken at each of b^0..b^{d-1}. For a
// replayed policy the sampled joint observations are kept as well and
// consecutive beliefs are Bayes-conditioned on them; otherwise they are
// related by propagate_belief.
struct BeliefTrajectory {
    std::vector<BeliefState> beliefs;
    std::vector<JointActionId> actions;
    std::vector<JointObservationId> observations;

    std::size_t depth() const { return actions.size(); }
    // Recomputes every step from the model; false on any mismatch beyond 1e-9.
    bool consistent(const DecPomdp& model) const;
};

Heuristic solve_underlying_mdp(const DecPomdp& model);

// Walks `depth` steps from the model's initial belief under the heuristic.
// Throws UsageError when depth exceeds the horizon (or the replayed policy).
BeliefTrajectory generate_belief(const Heuristic& h, const DecPomdp& model, int depth, Rng& rng);

Heuristic recursive_wrap(JointPolicy policy);

// Parses a CLI portfolio such as "mdp,random,recursive:1" into heuristic
// kinds and a recursion depth. Throws UsageError on unknown names.
struct PortfolioSpec {
    std::vector<HeuristicKind> base;
    int recursion_depth = 0;
};
PortfolioSpec parse_portfolio(const std::string& text);

}  // namespace mbdp
