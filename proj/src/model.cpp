#include "mbdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mbdp/errors.hpp"

namespace mbdp {

namespace {

bool is_distribution(std::span<const double> p) {
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
        total += x;
    }
    return std::abs(total - 1.0) <= kValidationTolerance;
}

}  // namespace

BeliefState::BeliefState(std::vector<double> probabilities) : probabilities_(std::move(probabilities)) {
    if (probabilities_.empty() || !is_distribution(probabilities_))
        throw DataError("belief state must be a non-empty probability distribution");
}

BeliefState BeliefState::normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw DataError("belief weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw DataError("belief weights sum to zero");
    for (double& w : weights) w /= total;
    BeliefState b;
    b.probabilities_ = std::move(weights);
    return b;
}

BeliefState BeliefState::point(std::size_t num_states, std::size_t state) {
    std::vector<double> p(num_states, 0.0);
    p.at(state) = 1.0;
    return BeliefState(std::move(p));
}

BeliefState BeliefState::uniform(std::size_t num_states) {
    return BeliefState(std::vector<double>(num_states, 1.0 / static_cast<double>(num_states)));
}

std::size_t BeliefState::most_likely_state() const {
    return static_cast<std::size_t>(std::max_element(probabilities_.begin(), probabilities_.end()) -
                                    probabilities_.begin());
}

JointSpace::JointSpace(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
    strides_.assign(radices_.size(), 1);
    size_ = 1;
    for (std::size_t i = radices_.size(); i-- > 0;) {
        strides_[i] = size_;
        size_ *= radices_[i];
    }
}

std::size_t JointSpace::encode(std::span<const int> parts) const {
    if (parts.size() != radices_.size()) throw DataError("joint index has wrong number of components");
    std::size_t index = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0 || static_cast<std::size_t>(parts[i]) >= radices_[i])
            throw DataError("component " + std::to_string(parts[i]) + " out of range for agent " +
                            std::to_string(i));
        index += static_cast<std::size_t>(parts[i]) * strides_[i];
    }
    return index;
}

std::vector<int> JointSpace::decode(std::size_t index) const {
    std::vector<int> parts(radices_.size());
    for (std::size_t i = 0; i < radices_.size(); ++i) parts[i] = component(index, i);
    return parts;
}

DecPomdp::DecPomdp(DecPomdpData data) : data_(std::move(data)) {
    if (data_.actions.size() < 2) throw DataError("a DEC-POMDP needs at least two agents");
    if (data_.observations.size() != data_.actions.size())
        throw DataError("observation sets must be given for every agent");
    if (data_.states.empty()) throw DataError("state set is empty");
    if (data_.horizon < 1) throw DataError("horizon must be at least 1");

    std::vector<std::size_t> action_radix, observation_radix;
    for (std::size_t i = 0; i < data_.actions.size(); ++i) {
        if (data_.actions[i].empty()) throw DataError("agent " + std::to_string(i) + " has no actions");
        if (data_.observations[i].empty())
            throw DataError("agent " + std::to_string(i) + " has no observations");
        action_radix.push_back(data_.actions[i].size());
        observation_radix.push_back(data_.observations[i].size());
    }
    actions_ = JointSpace(std::move(action_radix));
    observations_ = JointSpace(std::move(observation_radix));

    const std::size_t ns = num_states(), na = num_joint_actions(), no = num_joint_observations();
    if (data_.initial_belief.size() != ns) throw DataError("start distribution has wrong length");
    if (data_.transition.size() != ns * na * ns) throw DataError("transition table has wrong size");
    if (data_.observation.size() != na * ns * no) throw DataError("observation table has wrong size");
    if (data_.reward.size() != ns * na * ns) throw DataError("reward table has wrong size");

    successors_.resize(ns * na);
    expected_reward_.assign(ns * na, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            auto& list = successors_[s * na + a];
            for (std::size_t next = 0; next < ns; ++next) {
                double p = transition(s, a, next);
                if (p != 0.0) {
                    list.push_back({next, p});
                    expected_reward_[s * na + a] += p * reward(s, a, next);
                }
            }
        }
    }
    observation_support_.resize(na * ns);
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t next = 0; next < ns; ++next) {
            auto& list = observation_support_[a * ns + next];
            for (std::size_t o = 0; o < no; ++o) {
                double p = observation(a, next, o);
                if (p != 0.0) list.push_back({o, p});
            }
        }
    }
    reward_max_ = -std::numeric_limits<double>::infinity();
    reward_min_ = std::numeric_limits<double>::infinity();
    for (double r : data_.reward) {
        reward_max_ = std::max(reward_max_, r);
        reward_min_ = std::min(reward_min_, r);
    }
}

std::span<const Successor> DecPomdp::successors(std::size_t s, JointActionId a) const {
    return successors_[s * num_joint_actions() + a];
}

std::span<const ObservationEntry> DecPomdp::observations_after(JointActionId a, std::size_t next) const {
    return observation_support_[a * num_states() + next];
}

DecPomdp DecPomdp::with_horizon(int horizon) const {
    DecPomdpData copy = data_;
    copy.horizon = horizon;
    return DecPomdp(std::move(copy));
}

void DecPomdp::check_state(std::size_t s) const {
    if (s >= num_states()) throw DataError("state index " + std::to_string(s) + " out of range");
}

void DecPomdp::check_joint_action(JointActionId a) const {
    if (a >= num_joint_actions()) throw DataError("joint action index " + std::to_string(a) + " out of range");
}

void DecPomdp::check_joint_observation(JointObservationId o) const {
    if (o >= num_joint_observations())
        throw DataError("joint observation index " + std::to_string(o) + " out of range");
}

namespace {

std::string joint_label(const JointSpace& space, std::size_t index,
                        const std::vector<std::vector<std::string>>& names) {
    std::string out = "<";
    for (std::size_t i = 0; i < space.num_agents(); ++i) {
        if (i) out += ",";
        out += names[i][static_cast<std::size_t>(space.component(index, i))];
    }
    return out + ">";
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

std::vector<std::string> validate(const DecPomdp& model) {
    std::vector<std::string> violations;
    const auto& d = model.data();
    const std::size_t ns = model.num_states(), na = model.num_joint_actions(), no = model.num_joint_observations();

    auto check_probability = [&](double p, const std::string& where) {
        if (!(p >= 0.0 && p <= 1.0)) violations.push_back(where + " probability " + fmt(p) + " outside [0,1]");
    };

    double start_total = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
        check_probability(d.initial_belief[s], "start(" + d.states[s] + ")");
        start_total += d.initial_belief[s];
    }
    if (std::abs(start_total - 1.0) > kValidationTolerance)
        violations.push_back("start distribution sums to " + fmt(start_total));

    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            const std::string cell = "T(" + d.states[s] + ", " + joint_label(model.joint_actions(), a, d.actions) + ")";
            double total = 0.0;
            for (std::size_t next = 0; next < ns; ++next) {
                double p = model.transition(s, a, next);
                check_probability(p, cell + "->" + d.states[next]);
                total += p;
            }
            if (std::abs(total - 1.0) > kValidationTolerance)
                violations.push_back(cell + " row sums to " + fmt(total));
        }
    }
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t next = 0; next < ns; ++next) {
            const std::string cell = "O(" + joint_label(model.joint_actions(), a, d.actions) + ", " + d.states[next] + ")";
            double total = 0.0;
            for (std::size_t o = 0; o < no; ++o) {
                double p = model.observation(a, next, o);
                check_probability(p, cell + "->" + joint_label(model.joint_observations(), o, d.observations));
                total += p;
            }
            if (std::abs(total - 1.0) > kValidationTolerance)
                violations.push_back(cell + " row sums to " + fmt(total));
        }
    }
    for (std::size_t i = 0; i < d.reward.size(); ++i) {
        if (!std::isfinite(d.reward[i])) {
            violations.push_back("reward entry " + std::to_string(i) + " is not finite");
            break;
        }
    }
    return violations;
}

void require_valid(const DecPomdp& model) {
    auto violations = validate(model);
    if (violations.empty()) return;
    std::string message = "model '" + model.name() + "' failed validation: " + violations.front();
    if (violations.size() > 1) message += " (and " + std::to_string(violations.size() - 1) + " more)";
    throw DataError(message);
}

BeliefState propagate_belief(const DecPomdp& model, const BeliefState& belief, JointActionId action) {
    model.check_joint_action(action);
    if (belief.size() != model.num_states()) throw DataError("belief has wrong number of states");
    std::vector<double> next(model.num_states(), 0.0);
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        if (belief[s] == 0.0) continue;
        for (const auto& succ : model.successors(s, action)) next[succ.state] += belief[s] * succ.probability;
    }
    return BeliefState::normalized(std::move(next));
}

std::vector<double> joint_observation_distribution(const DecPomdp& model, const BeliefState& belief,
                                                   JointActionId action) {
    BeliefState next = propagate_belief(model, belief, action);
    std::vector<double> dist(model.num_joint_observations(), 0.0);
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        if (next[s] == 0.0) continue;
        for (const auto& e : model.observations_after(action, s)) dist[e.observation] += next[s] * e.probability;
    }
    return dist;
}

double joint_observation_probability(const DecPomdp& model, const BeliefState& belief, JointActionId action,
                                     JointObservationId observation) {
    model.check_joint_observation(observation);
    BeliefState next = propagate_belief(model, belief, action);
    double p = 0.0;
    for (std::size_t s = 0; s < model.num_states(); ++s) p += next[s] * model.observation(action, s, observation);
    return p;
}

BeliefState bayes_update(const DecPomdp& model, const BeliefState& belief, JointActionId action,
                         JointObservationId observation) {
    model.check_joint_observation(observation);
    BeliefState next = propagate_belief(model, belief, action);
    std::vector<double> posterior(model.num_states(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        posterior[s] = next[s] * model.observation(action, s, observation);
        total += posterior[s];
    }
    if (!(total > 0.0))
        throw ImpossibleEvidence("joint observation " + std::to_string(observation) +
                                 " has zero probability under the given belief and action");
    return BeliefState::normalized(std::move(posterior));
}

}  // namespace mbdp
