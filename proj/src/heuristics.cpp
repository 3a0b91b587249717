#include "mbdp/heuristics.hpp"

#include <cmath>
#include <sstream>

#include "mbdp/errors.hpp"

namespace mbdp {

Heuristic Heuristic::mdp(const DecPomdp& model) {
    Heuristic h;
    h.kind_ = HeuristicKind::mdp;
    const std::size_t ns = model.num_states();
    const std::size_t na = model.num_joint_actions();
    const int horizon = model.horizon();
    h.values_.assign(static_cast<std::size_t>(horizon) + 1, std::vector<double>(ns, 0.0));
    h.greedy_.assign(static_cast<std::size_t>(horizon) + 1, std::vector<JointActionId>(ns, 0));
    for (int k = 1; k <= horizon; ++k) {
        const auto& prev = h.values_[static_cast<std::size_t>(k) - 1];
        auto& cur = h.values_[static_cast<std::size_t>(k)];
        auto& act = h.greedy_[static_cast<std::size_t>(k)];
        for (std::size_t s = 0; s < ns; ++s) {
            double best = 0.0;
            JointActionId arg = 0;
            for (JointActionId a = 0; a < na; ++a) {
                double q = model.expected_reward(s, a);
                for (const auto& succ : model.successors(s, a)) q += succ.probability * prev[succ.state];
                if (a == 0 || q > best) {
                    best = q;
                    arg = a;
                }
            }
            cur[s] = best;
            act[s] = arg;
        }
    }
    return h;
}

Heuristic Heuristic::random() { return Heuristic{}; }

Heuristic Heuristic::replay(JointPolicy policy) {
    if (policy.num_agents() == 0) throw DataError("cannot replay an empty joint policy");
    Heuristic h;
    h.kind_ = HeuristicKind::policy_replay;
    h.policy_ = std::move(policy);
    return h;
}

std::string Heuristic::name() const {
    switch (kind_) {
        case HeuristicKind::mdp: return "mdp";
        case HeuristicKind::random: return "random";
        case HeuristicKind::policy_replay: return "replay";
    }
    return "?";
}

double Heuristic::mdp_value(int steps_remaining, std::size_t state) const {
    if (kind_ != HeuristicKind::mdp) throw DataError("not an MDP heuristic");
    return values_.at(static_cast<std::size_t>(steps_remaining)).at(state);
}

JointActionId Heuristic::mdp_action(int steps_remaining, std::size_t state) const {
    if (kind_ != HeuristicKind::mdp) throw DataError("not an MDP heuristic");
    if (steps_remaining < 1) throw DataError("no action with zero steps remaining");
    return greedy_.at(static_cast<std::size_t>(steps_remaining)).at(state);
}

bool BeliefTrajectory::consistent(const DecPomdp& model) const {
    if (beliefs.size() != actions.size() + 1) return false;
    if (!observations.empty() && observations.size() != actions.size()) return false;
    for (std::size_t k = 0; k < actions.size(); ++k) {
        BeliefState expected;
        try {
            expected = observations.empty() ? propagate_belief(model, beliefs[k], actions[k])
                                            : bayes_update(model, beliefs[k], actions[k], observations[k]);
        } catch (const Error&) {
            return false;
        }
        for (std::size_t s = 0; s < expected.size(); ++s)
            if (std::abs(expected[s] - beliefs[k + 1][s]) > kValidationTolerance) return false;
    }
    return true;
}

Heuristic solve_underlying_mdp(const DecPomdp& model) { return Heuristic::mdp(model); }

BeliefTrajectory generate_belief(const Heuristic& h, const DecPomdp& model, int depth, Rng& rng) {
    if (depth < 0 || depth > model.horizon())
        throw UsageError("belief depth " + std::to_string(depth) + " outside 0.." + std::to_string(model.horizon()));
    BeliefTrajectory traj;
    traj.beliefs.push_back(model.initial_belief());
    const std::size_t na = model.num_joint_actions();

    if (h.kind() == HeuristicKind::policy_replay) {
        const JointPolicy& joint = h.policy();
        if (depth > joint.horizon())
            throw UsageError("replayed policy covers " + std::to_string(joint.horizon()) + " steps, " +
                             std::to_string(depth) + " requested");
        std::vector<const PolicyNode*> nodes;
        for (const auto& t : joint.trees()) nodes.push_back(t.get());
        std::vector<int> parts(model.num_agents());
        for (int k = 0; k < depth; ++k) {
            for (std::size_t i = 0; i < nodes.size(); ++i) parts[i] = nodes[i]->action();
            const JointActionId a = model.joint_actions().encode(parts);
            const auto dist = joint_observation_distribution(model, traj.beliefs.back(), a);
            const JointObservationId o = sample_index(rng, dist);
            traj.actions.push_back(a);
            traj.observations.push_back(o);
            traj.beliefs.push_back(bayes_update(model, traj.beliefs.back(), a, o));
            if (k + 1 < depth)
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    const auto local = static_cast<std::size_t>(model.joint_observations().component(o, i));
                    nodes[i] = nodes[i]->child(local).get();
                }
        }
        return traj;
    }

    if (h.kind() == HeuristicKind::mdp && h.mdp_horizon() < model.horizon())
        throw UsageError("MDP heuristic was built for a shorter horizon");
    for (int k = 0; k < depth; ++k) {
        JointActionId a = 0;
        if (h.kind() == HeuristicKind::mdp)
            a = h.mdp_action(model.horizon() - k, traj.beliefs.back().most_likely_state());
        else
            a = uniform_index(rng, na);
        traj.actions.push_back(a);
        traj.beliefs.push_back(propagate_belief(model, traj.beliefs.back(), a));
    }
    return traj;
}

Heuristic recursive_wrap(JointPolicy policy) { return Heuristic::replay(std::move(policy)); }

PortfolioSpec parse_portfolio(const std::string& text) {
    PortfolioSpec spec;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "mdp") spec.base.push_back(HeuristicKind::mdp);
        else if (item == "random") spec.base.push_back(HeuristicKind::random);
        else if (item.rfind("recursive:", 0) == 0) {
            const std::string digits = item.substr(10);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw UsageError("bad recursion depth in '" + item + "'");
            spec.recursion_depth = std::stoi(digits);
        } else {
            throw UsageError("unknown heuristic '" + item + "' (expected mdp, random or recursive:<depth>)");
        }
    }
    if (spec.base.empty()) throw UsageError("the heuristic portfolio needs mdp and/or random");
    return spec;
}

}  // namespace mbdp
