#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mbdp {

// Joint actions and joint observations are addressed by a single flat index.
// The encoding is mixed radix with agent 0 as the most significant digit, so
// increasing index order is lexicographic order over the per-agent tuples.
using JointActionId = std::size_t;
using JointObservationId = std::size_t;

inline constexpr double kValidationTolerance = 1e-9;

// Probability distribution over states.
class BeliefState {
public:
    BeliefState() = default;
    // Throws DataError unless entries are non-negative and sum to one.
    explicit BeliefState(std::vector<double> probabilities);

    // Scales a non-negative vector to unit sum. Throws DataError on a zero or
    // negative total.
    static BeliefState normalized(std::vector<double> weights);
    static BeliefState point(std::size_t num_states, std::size_t state);
    static BeliefState uniform(std::size_t num_states);

    std::size_t size() const { return probabilities_.size(); }
    double operator[](std::size_t s) const { return probabilities_[s]; }
    std::span<const double> probabilities() const { return probabilities_; }

    // Index of the largest entry, lowest index on ties.
    std::size_t most_likely_state() const;

    friend bool operator==(const BeliefState&, const BeliefState&) = default;

private:
    std::vector<double> probabilities_;
};

// Mixed-radix helper shared by joint actions and joint observations.
class JointSpace {
public:
    JointSpace() = default;
    explicit JointSpace(std::vector<std::size_t> radices);

    std::size_t size() const { return size_; }
    std::size_t num_agents() const { return radices_.size(); }
    std::size_t radix(std::size_t agent) const { return radices_[agent]; }

    std::size_t encode(std::span<const int> parts) const;
    std::vector<int> decode(std::size_t index) const;
    int component(std::size_t index, std::size_t agent) const {
        return static_cast<int>((index / strides_[agent]) % radices_[agent]);
    }

private:
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

struct Successor {
    std::size_t state;
    double probability;
};

struct ObservationEntry {
    JointObservationId observation;
    double probability;
};

// Everything needed to construct a DecPomdp. Tables are dense and laid out as
//   transition[(s * |A| + a) * |S| + s']
//   observation[(a * |S| + s') * |O| + o]
//   reward[(s * |A| + a) * |S| + s']
// where a and o are joint indices.
struct DecPomdpData {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::vector<std::string>> actions;       // per agent
    std::vector<std::vector<std::string>> observations;  // per agent
    std::vector<double> initial_belief;
    std::vector<double> transition;
    std::vector<double> observation;
    std::vector<double> reward;
    int horizon = 1;
};

// A finite-horizon DEC-POMDP. Immutable after construction.
//
// The constructor checks only shapes (table sizes, agent counts); stochastic
// consistency is reported by validate() so that defective models can still be
// inspected.
class DecPomdp {
public:
    explicit DecPomdp(DecPomdpData data);

    const std::string& name() const { return data_.name; }
    std::size_t num_agents() const { return data_.actions.size(); }
    std::size_t num_states() const { return data_.states.size(); }
    std::size_t num_actions(std::size_t agent) const { return data_.actions[agent].size(); }
    std::size_t num_observations(std::size_t agent) const { return data_.observations[agent].size(); }
    std::size_t num_joint_actions() const { return actions_.size(); }
    std::size_t num_joint_observations() const { return observations_.size(); }
    int horizon() const { return data_.horizon; }

    const JointSpace& joint_actions() const { return actions_; }
    const JointSpace& joint_observations() const { return observations_; }

    const std::vector<std::string>& state_names() const { return data_.states; }
    const std::vector<std::string>& action_names(std::size_t agent) const { return data_.actions[agent]; }
    const std::vector<std::string>& observation_names(std::size_t agent) const {
        return data_.observations[agent];
    }

    std::span<const double> initial_belief_raw() const { return data_.initial_belief; }
    // Throws DataError if the stored start distribution is not a distribution.
    BeliefState initial_belief() const { return BeliefState(data_.initial_belief); }

    double transition(std::size_t s, JointActionId a, std::size_t next) const {
        return data_.transition[(s * num_joint_actions() + a) * num_states() + next];
    }
    double observation(JointActionId a, std::size_t next, JointObservationId o) const {
        return data_.observation[(a * num_states() + next) * num_joint_observations() + o];
    }
    double reward(std::size_t s, JointActionId a, std::size_t next) const {
        return data_.reward[(s * num_joint_actions() + a) * num_states() + next];
    }

    // Nonzero entries of P(. | s, a), in state order.
    std::span<const Successor> successors(std::size_t s, JointActionId a) const;
    // Nonzero entries of O(. | a, s'), in observation order.
    std::span<const ObservationEntry> observations_after(JointActionId a, std::size_t next) const;
    // sum_s' P(s'|s,a) R(s,a,s')
    double expected_reward(std::size_t s, JointActionId a) const {
        return expected_reward_[s * num_joint_actions() + a];
    }

    double reward_max() const { return reward_max_; }
    double reward_min() const { return reward_min_; }

    const DecPomdpData& data() const { return data_; }
    DecPomdp with_horizon(int horizon) const;

    // Throws DataError when an index is outside its range.
    void check_state(std::size_t s) const;
    void check_joint_action(JointActionId a) const;
    void check_joint_observation(JointObservationId o) const;

private:
    DecPomdpData data_;
    JointSpace actions_;
    JointSpace observations_;
    std::vector<std::vector<Successor>> successors_;
    std::vector<std::vector<ObservationEntry>> observation_support_;
    std::vector<double> expected_reward_;
    double reward_max_ = 0.0;
    double reward_min_ = 0.0;
};

// Human-readable descriptions of every violated model invariant; empty when
// the model is well formed.
std::vector<std::string> validate(const DecPomdp& model);

// Throws DataError listing the violations, if any.
void require_valid(const DecPomdp& model);

// b'(s') = sum_s b(s) P(s'|s,a)
BeliefState propagate_belief(const DecPomdp& model, const BeliefState& belief, JointActionId action);

// Pr(o) after taking `action` in `belief`: the belief is pushed through the
// transition model first, then the observation model is applied to the
// successor state.
double joint_observation_probability(const DecPomdp& model, const BeliefState& belief,
                                     JointActionId action, JointObservationId observation);

// Full distribution over joint observations, same convention as above.
std::vector<double> joint_observation_distribution(const DecPomdp& model, const BeliefState& belief,
                                                   JointActionId action);

// Bayes filter. Throws ImpossibleEvidence when Pr(o) is zero.
BeliefState bayes_update(const DecPomdp& model, const BeliefState& belief, JointActionId action,
                         JointObservationId observation);

}  // namespace mbdp
