#include <doctest.h>

#include <cmath>

#include "mbdp/benchmarks.hpp"
#include "mbdp/errors.hpp"
#include "mbdp/policy.hpp"
#include "mbdp/policy_io.hpp"
#include "mbdp/solver.hpp"
#include "support.hpp"

using namespace mbdp;
using test::ToySpec;

namespace {

PolicyTree leaf(int a) { return PolicyNode::leaf(a); }
PolicyTree node(int a, PolicyTree x, PolicyTree y) { return PolicyNode::internal(a, {std::move(x), std::move(y)}); }

// s0 under joint action 0 splits evenly; everything else is deterministic.
// Each agent observes the successor state exactly.
DecPomdp hand_model() {
    ToySpec spec;
    spec.actions = 2;
    spec.observations = 2;
    spec.start = {0.6, 0.4};
    spec.transition = [](std::size_t s, std::size_t a, std::size_t n) {
        if (a == 0) return s == 0 ? 0.5 : (n == s ? 1.0 : 0.0);
        return n == 1 ? 1.0 : 0.0;
    };
    spec.observation = [](std::size_t, std::size_t next, std::size_t o) {
        return o == (next == 0 ? 0u : 3u) ? 1.0 : 0.0;
    };
    spec.reward = [](std::size_t s, std::size_t a, std::size_t) {
        if (s == 0) return a == 0 ? 1.0 : 2.0;
        return a == 3 ? 5.0 : 0.0;
    };
    return test::toy(spec);
}

PolicyTree swap_branches(const PolicyTree& t) {
    if (t->is_leaf()) return t;
    return PolicyNode::internal(t->action(), {swap_branches(t->child(1)), swap_branches(t->child(0))});
}

}  // namespace

TEST_SUITE("policy") {
    TEST_CASE("tree structure") {
        const PolicyTree shared = leaf(1);
        const PolicyTree t = node(0, shared, shared);
        CHECK(t->depth() == 2);
        CHECK(t->complete());
        CHECK(distinct_node_count(t) == 2);
        CHECK(structurally_equal(t, node(0, leaf(1), leaf(1))));
        CHECK_FALSE(structurally_equal(t, node(0, leaf(1), leaf(0))));

        const PolicyTree partial = PolicyNode::internal(0, {shared, nullptr});
        CHECK_FALSE(partial->complete());
        CHECK_THROWS_AS(JointPolicy({partial, t}), DataError);
        CHECK_THROWS_AS(JointPolicy({t, shared}), DataError);
        CHECK_THROWS_AS(PolicyNode::internal(0, {leaf(0), t}), DataError);
    }

    TEST_CASE("zero reward gives zero") {
        ToySpec spec;
        spec.actions = 2;
        spec.observations = 2;
        spec.observation = [](std::size_t, std::size_t, std::size_t) { return 0.25; };
        const DecPomdp m = test::toy(spec);
        const JointPolicy j({node(1, leaf(0), leaf(1)), node(0, leaf(1), leaf(1))});
        CHECK(evaluate_at_belief(m, j, m.initial_belief()) == 0.0);
    }

    TEST_CASE("depth-1 deterministic step") {
        ToySpec spec;
        spec.transition = [](std::size_t, std::size_t, std::size_t n) { return n == 1 ? 1.0 : 0.0; };
        spec.reward = [](std::size_t, std::size_t, std::size_t n) { return n == 1 ? 2.0 : 0.0; };
        const DecPomdp m = test::toy(spec);
        CHECK(evaluate_at_state(m, JointPolicy({leaf(0), leaf(0)}), 0) == 2.0);
    }

    TEST_CASE("depth-2 hand expansion") {
        const DecPomdp m = hand_model();
        const JointPolicy j({node(0, leaf(1), leaf(1)), node(0, leaf(1), leaf(0))});
        // s0: 1 + 0.5 * R(s0, a1a1) + 0.5 * R(s1, a1a0) = 1 + 1 + 0
        CHECK(evaluate_at_state(m, j, 0) == doctest::Approx(2.0));
        CHECK(evaluate_at_state(m, j, 1) == doctest::Approx(0.0));
        CHECK(evaluate_at_belief(m, j, m.initial_belief()) == doctest::Approx(1.2));
        CHECK(evaluate_at_belief(m, j, BeliefState::point(2, 0)) == evaluate_at_state(m, j, 0));
    }

    TEST_CASE("missing branch is an evaluation error") {
        const DecPomdp m = hand_model();
        const PolicyTree partial = PolicyNode::internal(0, {leaf(0), nullptr});
        CHECK_THROWS_AS(JointPolicy({partial, node(0, leaf(0), leaf(0))}), DataError);
    }

    TEST_CASE("MABC horizon 1: one sender delivers") {
        const DecPomdp m = build_mabc(1);
        const JointPolicy j({leaf(0), leaf(1)});
        CHECK(evaluate_at_belief(m, j, m.initial_belief()) == doctest::Approx(1.0));
    }

    TEST_CASE("linearity, memo invariance and relabeling invariance") {
        Rng rng(5);
        for (int trial = 0; trial < 25; ++trial) {
            const DecPomdp m = test::random_model(rng, 3, 2, 2, 3);
            const JointPolicy j = random_joint_policy(m, 3, rng);
            const BeliefState b1 = BeliefState::normalized(test::random_distribution(rng, 3, false));
            const BeliefState b2 = BeliefState::normalized(test::random_distribution(rng, 3, false));
            std::vector<double> mid(3);
            for (std::size_t s = 0; s < 3; ++s) mid[s] = 0.5 * b1[s] + 0.5 * b2[s];
            const double v1 = evaluate_at_belief(m, j, b1), v2 = evaluate_at_belief(m, j, b2);
            CHECK(evaluate_at_belief(m, j, BeliefState::normalized(mid)) == doctest::Approx(0.5 * v1 + 0.5 * v2));
            CHECK(evaluate_at_belief(m, j, b1, {.memoize = false}) == doctest::Approx(v1).epsilon(1e-12));

            // Swap agent 0's two observation labels in the model and in its tree.
            DecPomdpData d = m.data();
            const std::size_t O = m.num_joint_observations(), O1 = m.num_observations(1);
            for (std::size_t row = 0; row < d.observation.size() / O; ++row)
                for (std::size_t o1 = 0; o1 < O1; ++o1)
                    std::swap(d.observation[row * O + o1], d.observation[row * O + O1 + o1]);
            const DecPomdp relabeled{d};
            const JointPolicy swapped({swap_branches(j.tree(0)), j.tree(1)});
            CHECK(evaluate_at_belief(relabeled, swapped, b1) == doctest::Approx(v1).epsilon(1e-12));
        }
    }

    TEST_CASE("simulation") {
        SUBCASE("deterministic model has no variance") {
            ToySpec spec;
            spec.start = {1.0, 0.0};
            spec.horizon = 2;
            spec.reward = [](std::size_t s, std::size_t, std::size_t) { return s == 0 ? 1.5 : 0.0; };
            const DecPomdp m = test::toy(spec);
            const JointPolicy j({PolicyNode::internal(0, {leaf(0)}), PolicyNode::internal(0, {leaf(0)})});
            const auto r = simulate(j, m, 100, 3);
            CHECK(r.mean == doctest::Approx(3.0));
            CHECK(r.standard_error == 0.0);
        }
        SUBCASE("MABC h=4 policy, 200k episodes") {
            const DecPomdp m = build_mabc(4);
            SolverConfig cfg;
            const SolveReport rep = mbdp::mbdp(m, cfg);
            CHECK(rep.value == doctest::Approx(3.89).epsilon(1e-9));
            const auto r = simulate(rep.policy, m, 200000, 17);
            CHECK(std::abs(r.mean - 3.89) <= 3.0 * r.standard_error);
            const auto again = simulate(rep.policy, m, 200000, 17);
            CHECK(again.mean == r.mean);
            CHECK(again.standard_error == r.standard_error);
        }
    }

    TEST_CASE("serialization") {
        const DecPomdp m = hand_model();
        const PolicyTree shared = node(1, leaf(0), leaf(1));
        const JointPolicy j({node(0, shared, shared), node(1, node(0, leaf(0), leaf(0)), node(1, leaf(1), leaf(0)))});
        const std::string text = serialize_policy(j, m);
        const JointPolicy back = deserialize_policy(text, m);
        CHECK(structurally_equal(back.tree(0), j.tree(0)));
        CHECK(structurally_equal(back.tree(1), j.tree(1)));
        CHECK(serialize_policy(back, m) == text);
        CHECK(text.find("\"ref\"") != std::string::npos);

        SUBCASE("truncated input reports a position") {
            try {
                deserialize_policy(text.substr(0, text.size() / 2), m);
                FAIL("expected a parse error");
            } catch (const ParseError& e) {
                CHECK(e.line() > 1);
            }
        }
        SUBCASE("unknown action") {
            std::string bad = text;
            bad.replace(bad.find("\"a1\""), 4, "\"zz\"");
            CHECK_THROWS_AS(deserialize_policy(bad, m), DataError);
        }
        SUBCASE("solver output survives the round trip") {
            const DecPomdp mabc = build_mabc(2);
            const SolveReport rep = mbdp::mbdp(mabc, SolverConfig{});
            const JointPolicy parsed = deserialize_policy(serialize_policy(rep.policy, mabc), mabc);
            CHECK(evaluate_at_belief(mabc, parsed, mabc.initial_belief()) == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
}
