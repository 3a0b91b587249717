#include "mbdp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mbdp/errors.hpp"
#include "mbdp/heuristics.hpp"
#include "mbdp/random.hpp"

namespace mbdp {

namespace {

// All k-subsets of {0..m-1} as bit masks, in lexicographic order of the
// sorted member lists.
std::vector<std::uint32_t> subsets(std::size_t m, std::size_t k) {
    std::vector<std::uint32_t> out;
    std::vector<int> pick(k);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int from) {
        if (pos == k) {
            std::uint32_t mask = 0;
            for (int p : pick) mask |= 1u << p;
            out.push_back(mask);
            return;
        }
        for (int x = from; x < static_cast<int>(m); ++x) {
            pick[pos] = x;
            rec(pos + 1, x + 1);
        }
    };
    rec(0, 0);
    return out;
}

std::size_t binomial(std::size_t m, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
    return static_cast<std::size_t>(std::llround(r));
}

}  // namespace

EpsilonAt epsilon_at_detail(const DecPomdp& model, const BeliefState& belief, JointActionId action,
                            std::size_t max_obs, std::size_t cap) {
    if (max_obs == 0) throw DataError("maxObs must be at least 1");
    model.check_joint_action(action);
    const std::size_t n = model.num_agents();
    std::vector<std::size_t> k(n);
    double tuples = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (model.num_observations(i) > 32) throw CapacityError("too many local observations to enumerate subsets");
        k[i] = std::min(max_obs, model.num_observations(i));
        tuples *= static_cast<double>(binomial(model.num_observations(i), k[i]));
    }
    if (tuples > static_cast<double>(cap))
        throw CapacityError("epsilon enumeration needs " + std::to_string(static_cast<std::uint64_t>(tuples)) +
                            " subset tuples, above the cap of " + std::to_string(cap));

    bool everything = true;
    for (std::size_t i = 0; i < n; ++i) everything = everything && k[i] == model.num_observations(i);
    if (everything) {
        EpsilonAt all;
        all.selection = ObservationSelection::full(model);
        return all;
    }

    // Mass is monotone in each subset, so subsets of exactly k_i suffice.
    std::vector<std::vector<std::uint32_t>> options(n);
    for (std::size_t i = 0; i < n; ++i) options[i] = subsets(model.num_observations(i), k[i]);
    const auto dist = joint_observation_distribution(model, belief, action);
    const std::size_t nobs = dist.size();
    std::vector<std::vector<int>> parts(nobs);
    for (std::size_t o = 0; o < nobs; ++o) parts[o] = model.joint_observations().decode(o);

    EpsilonAt best;
    best.mass = -1.0;
    std::vector<std::size_t> choice(n, 0);
    while (true) {
        double mass = 0.0;
        for (std::size_t o = 0; o < nobs; ++o) {
            if (dist[o] == 0.0) continue;
            bool inside = true;
            for (std::size_t i = 0; i < n && inside; ++i) inside = (options[i][choice[i]] >> parts[o][i]) & 1u;
            if (inside) mass += dist[o];
        }
        if (mass > best.mass) {
            best.mass = mass;
            best.selection.per_agent.assign(n, {});
            for (std::size_t i = 0; i < n; ++i)
                for (int x = 0; x < static_cast<int>(model.num_observations(i)); ++x)
                    if ((options[i][choice[i]] >> x) & 1u) best.selection.per_agent[i].push_back(x);
        }
        std::size_t i = n;
        while (i-- > 0) {
            if (++choice[i] < options[i].size()) break;
            choice[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
    }
    best.mass = std::min(1.0, best.mass);
    return best;
}

double epsilon_at(const DecPomdp& model, const BeliefState& belief, JointActionId action, std::size_t max_obs) {
    return epsilon_at_detail(model, belief, action, max_obs).mass;
}

double error_bound(double epsilon, int horizon, double reward_max, double reward_min) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DataError("epsilon must lie in [0, 1]");
    if (!(reward_max >= reward_min)) throw DataError("R_max must not be below R_min");
    if (horizon < 1) throw DataError("horizon must be at least 1");
    const double t = static_cast<double>(horizon);
    return t * t * (1.0 - epsilon) * (reward_max - reward_min);
}

EpsilonReport epsilon_global(const DecPomdp& model, std::size_t max_obs, int horizon, const EpsilonOptions& options) {
    if (horizon < 1) throw UsageError("horizon must be at least 1");
    EpsilonReport report;
    report.mode = options.mode;
    report.estimate = options.mode == EpsilonMode::sampled;
    report.epsilon = 2.0;
    const std::size_t na = model.num_joint_actions();
    const std::size_t nobs = model.num_joint_observations();

    std::vector<JointActionId> actions;
    std::vector<JointObservationId> observations;
    auto examine = [&](const BeliefState& b) {
        ++report.histories;
        for (JointActionId a = 0; a < na; ++a) {
            const double e = epsilon_at(model, b, a, max_obs);
            if (e < report.epsilon) {
                report.epsilon = e;
                report.history_actions = actions;
                report.history_observations = observations;
                report.action = a;
            }
        }
    };

    if (options.mode == EpsilonMode::exact) {
        // Depth-first over joint action-observation histories of length
        // 0..T-1; zero-probability branches have no belief and are skipped.
        std::function<void(const BeliefState&, int)> visit = [&](const BeliefState& b, int length) {
            if (report.histories >= options.node_cap)
                throw CapacityError("exact epsilon needs more than " + std::to_string(options.node_cap) +
                                    " beliefs; use the sampled mode");
            examine(b);
            if (length + 1 >= horizon) return;
            for (JointActionId a = 0; a < na; ++a) {
                const auto dist = joint_observation_distribution(model, b, a);
                for (JointObservationId o = 0; o < nobs; ++o) {
                    if (dist[o] <= 0.0) continue;
                    actions.push_back(a);
                    observations.push_back(o);
                    visit(bayes_update(model, b, a, o), length + 1);
                    actions.pop_back();
                    observations.pop_back();
                }
            }
        };
        visit(model.initial_belief(), 0);
    } else {
        if (options.samples == 0) throw UsageError("sampled epsilon needs at least one trajectory");
        const DecPomdp shaped = model.with_horizon(std::max(horizon, model.horizon()));
        const Heuristic mdp = Heuristic::mdp(shaped);
        for (std::size_t k = 0; k < options.samples; ++k) {
            Rng rng = derived_rng(options.seed, k);
            BeliefState b = model.initial_belief();
            actions.clear();
            observations.clear();
            for (int length = 0; length < horizon; ++length) {
                examine(b);
                if (length + 1 >= horizon) break;
                // Alternate the MDP and random heuristics across trajectories.
                const JointActionId a = k % 2 == 0
                                            ? mdp.mdp_action(horizon - length, b.most_likely_state())
                                            : uniform_index(rng, na);
                const auto dist = joint_observation_distribution(model, b, a);
                const JointObservationId o = sample_index(rng, dist);
                actions.push_back(a);
                observations.push_back(o);
                b = bayes_update(model, b, a, o);
            }
        }
    }
    report.epsilon = std::min(1.0, report.epsilon);
    report.bound = error_bound(report.epsilon, horizon, model.reward_max(), model.reward_min());
    return report;
}

}  // namespace mbdp
