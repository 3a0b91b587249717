#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mbdp/backup.hpp"
#include "mbdp/model.hpp"

namespace mbdp {

struct EpsilonAt {
    double mass = 1.0;
    ObservationSelection selection;  // a maximizing choice (first in enumeration order)
};

// Largest probability mass of a product set O_1 x ... x O_n with
// |O_i| <= maxObs, for the joint observation after `action` in `belief`.
// Enumerates every subset tuple; throws CapacityError beyond `cap` tuples.
EpsilonAt epsilon_at_detail(const DecPomdp& model, const BeliefState& belief, JointActionId action,
                            std::size_t max_obs, std::size_t cap = 1'000'000);

double epsilon_at(const DecPomdp& model, const BeliefState& belief, JointActionId action, std::size_t max_obs);

enum class EpsilonMode { exact, sampled };

struct EpsilonOptions {
    EpsilonMode mode = EpsilonMode::exact;
    // exact: most (history, belief) nodes visited before CapacityError.
    std::size_t node_cap = 5'000'000;
    // sampled: number of trajectories and their seed.
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
};

struct EpsilonReport {
    double epsilon = 1.0;
    EpsilonMode mode = EpsilonMode::exact;
    // True for the sampled mode: the minimum over samples can only
    // overestimate the true minimum, so the bound derived from it is not a
    // guarantee.
    bool estimate = false;
    // Witness: the joint action-observation history leading to the worst
    // belief, and the joint action there.
    std::vector<JointActionId> history_actions;
    std::vector<JointObservationId> history_observations;
    JointActionId action = 0;
    std::size_t histories = 0;  // beliefs examined
    double bound = 0.0;         // error_bound(epsilon, T, R_max, R_min)
};

// Minimum of epsilon_at over every joint action and every reachable belief
// after 0..T-1 steps (exact), or over sampled trajectories (sampled).
EpsilonReport epsilon_global(const DecPomdp& model, std::size_t max_obs, int horizon,
                             const EpsilonOptions& options = {});

// T^2 (1 - epsilon) (R_max - R_min). Throws DataError outside 0 <= epsilon <= 1,
// R_max >= R_min, T >= 1.
double error_bound(double epsilon, int horizon, double reward_max, double reward_min);

}  // namespace mbdp
