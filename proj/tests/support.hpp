#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mbdp/model.hpp"
#include "mbdp/random.hpp"

namespace mbdp::test {

inline std::vector<std::string> names(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Two agents with uniform per-agent sizes. Tables start at zero; the
// callbacks fill them (joint indices as in DecPomdp).
struct ToySpec {
    std::size_t states = 2, actions = 1, observations = 1;
    int horizon = 1;
    std::vector<double> start;  // empty: uniform
    std::function<double(std::size_t s, std::size_t a, std::size_t next)> transition;
    std::function<double(std::size_t a, std::size_t next, std::size_t o)> observation;
    std::function<double(std::size_t s, std::size_t a, std::size_t next)> reward;
};

inline DecPomdp toy(const ToySpec& spec) {
    DecPomdpData d;
    d.name = "toy";
    d.states = names("s", spec.states);
    d.actions = {names("a", spec.actions), names("a", spec.actions)};
    d.observations = {names("o", spec.observations), names("o", spec.observations)};
    d.horizon = spec.horizon;
    const std::size_t S = spec.states, A = spec.actions * spec.actions, O = spec.observations * spec.observations;
    d.initial_belief = spec.start.empty() ? std::vector<double>(S, 1.0 / static_cast<double>(S)) : spec.start;
    d.transition.assign(S * A * S, 0.0);
    d.observation.assign(A * S * O, 0.0);
    d.reward.assign(S * A * S, 0.0);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t n = 0; n < S; ++n) {
                d.transition[(s * A + a) * S + n] = spec.transition ? spec.transition(s, a, n) : (s == n ? 1.0 : 0.0);
                if (spec.reward) d.reward[(s * A + a) * S + n] = spec.reward(s, a, n);
            }
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t n = 0; n < S; ++n)
            for (std::size_t o = 0; o < O; ++o)
                d.observation[(a * S + n) * O + o] =
                    spec.observation ? spec.observation(a, n, o) : (o == 0 ? 1.0 : 0.0);
    return DecPomdp(std::move(d));
}

inline std::vector<double> random_distribution(Rng& rng, std::size_t n, bool sparse = true) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = uniform01(rng);
        if (sparse && uniform01(rng) < 0.3) x = 0.0;
        total += x;
    }
    if (total == 0.0) {
        w[uniform_index(rng, n)] = 1.0;
        return w;
    }
    for (auto& x : w) x /= total;
    return w;
}

// Random two-agent model with the given per-agent sizes.
inline DecPomdp random_model(Rng& rng, std::size_t states, std::size_t actions, std::size_t observations,
                             int horizon) {
    DecPomdpData d;
    d.name = "random";
    d.states = names("s", states);
    d.actions = {names("a", actions), names("a", actions)};
    d.observations = {names("o", observations), names("o", observations)};
    d.horizon = horizon;
    const std::size_t A = actions * actions, O = observations * observations;
    d.initial_belief = random_distribution(rng, states, false);
    for (std::size_t row = 0; row < states * A; ++row) {
        const auto p = random_distribution(rng, states);
        d.transition.insert(d.transition.end(), p.begin(), p.end());
    }
    for (std::size_t row = 0; row < A * states; ++row) {
        const auto p = random_distribution(rng, O);
        d.observation.insert(d.observation.end(), p.begin(), p.end());
    }
    for (std::size_t k = 0; k < states * A * states; ++k) d.reward.push_back(std::floor(uniform01(rng) * 21.0) - 10.0);
    return DecPomdp(std::move(d));
}

}  // namespace mbdp::test
