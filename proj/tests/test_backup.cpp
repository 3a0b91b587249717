#include <doctest.h>

#include <algorithm>

#include "mbdp/backup.hpp"
#include "mbdp/benchmarks.hpp"
#include "mbdp/errors.hpp"
#include "support.hpp"

using namespace mbdp;
using test::ToySpec;

namespace {

DecPomdp sized(std::size_t actions, std::size_t observations) {
    ToySpec spec;
    spec.actions = actions;
    spec.observations = observations;
    return test::toy(spec);
}

// `count` distinct leaf objects per agent.
CandidateSet leaves(std::size_t count, std::size_t num_actions) {
    CandidateSet set;
    set.trees.resize(2);
    for (auto& list : set.trees)
        for (std::size_t k = 0; k < count; ++k) list.push_back(PolicyNode::leaf(static_cast<int>(k % num_actions)));
    return set;
}

double best_at(const DecPomdp& model, const TreeSets& sets, const BeliefState& b) {
    const LevelTable table = LevelTable::compute(model, sets);
    double best = -1e300;
    for (std::size_t t = 0; t < table.num_tuples(); ++t) {
        double v = 0.0;
        for (std::size_t s = 0; s < b.size(); ++s) v += b[s] * table.value(t, s);
        best = std::max(best, v);
    }
    return best;
}

}  // namespace

TEST_SUITE("backup") {
    TEST_CASE("count formula") {
        CHECK(backup_count(2, 5, 5) == 6250);
        CHECK(backup_count(2, 5, 2) == 50);
        CHECK(backup_count(2, 3, 2) == 18);
        CHECK(backup_count(3, 7, 1) == 21);
        CHECK(backup_count(2, 1u << 20, 8) == 0);  // overflow
    }

    TEST_CASE("exhaustive backup sizes") {
        SUBCASE("2 actions, 5 observations, 5 trees: 6250 per agent") {
            const DecPomdp m = sized(2, 5);
            const CandidateSet out = exhaustive_backup(m, leaves(5, 2));
            CHECK(out.size(0) == 6250);
            CHECK(out.size(1) == 6250);
            CHECK(out.size(0) * out.size(1) == 39'062'500);
            CHECK(out.depth() == 2);
        }
        SUBCASE("single action and observation") {
            CHECK(exhaustive_backup(sized(1, 1), leaves(1, 1)).size(0) == 1);
        }
        SUBCASE("2 actions, 2 observations, 3 trees") {
            CHECK(exhaustive_backup(sized(2, 2), leaves(3, 2)).size(0) == 18);
        }
        SUBCASE("cap") {
            CHECK_THROWS_AS(exhaustive_backup(sized(2, 5), leaves(5, 2), 6249), CapacityError);
        }
    }

    TEST_CASE("enumeration order is action-major then lexicographic") {
        const DecPomdp m = sized(2, 2);
        const CandidateSet in = leaves(3, 2);
        const CandidateSet out = exhaustive_backup(m, in);
        for (std::size_t k = 0; k < out.size(0); ++k) {
            const PolicyTree& t = out.trees[0][k];
            CHECK(t->action() == static_cast<int>(k / 9));
            CHECK(t->child(0) == in.trees[0][(k / 3) % 3]);
            CHECK(t->child(1) == in.trees[0][k % 3]);
        }
    }

    TEST_CASE("count laws on random dimensions") {
        Rng rng(3);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t A = 1 + uniform_index(rng, 3), O = 1 + uniform_index(rng, 3), M = 1 + uniform_index(rng, 4);
            const DecPomdp m = sized(A, O);
            const CandidateSet in = leaves(M, A);
            CHECK(exhaustive_backup(m, in).size(1) == A * static_cast<std::size_t>(std::pow(M, O)));

            ObservationSelection sel;
            for (int i = 0; i < 2; ++i) {
                const std::size_t k = 1 + uniform_index(rng, O);
                std::vector<int> obs;
                for (std::size_t o = 0; o < k; ++o) obs.push_back(static_cast<int>(o));
                sel.per_agent.push_back(obs);
            }
            const CandidateSet part = partial_backup(m, in, sel);
            for (std::size_t i = 0; i < 2; ++i)
                CHECK(part.size(i) == backup_count(A, M, sel.per_agent[i].size()));
        }
    }

    TEST_CASE("partial backup") {
        const DecPomdp m = sized(2, 3);
        const CandidateSet in = leaves(5, 2);
        SUBCASE("two observations from five trees: 50 trees") {
            const CandidateSet out = partial_backup(m, in, ObservationSelection{{{0, 2}, {1, 2}}});
            CHECK(out.size(0) == 50);
            CHECK(out.trees[0][0]->child(1) == nullptr);
            CHECK(out.trees[1][0]->child(0) == nullptr);
            CHECK_FALSE(out.trees[0][0]->complete());
        }
        SUBCASE("one observation: |A| * maxTrees") {
            CHECK(partial_backup(m, in, ObservationSelection{{{1}, {1}}}).size(0) == 10);
        }
        SUBCASE("full selection equals the exhaustive backup") {
            const CandidateSet a = partial_backup(m, in, ObservationSelection::full(m));
            const CandidateSet b = exhaustive_backup(m, in);
            REQUIRE(a.size(0) == b.size(0));
            for (std::size_t k = 0; k < a.size(0); ++k) CHECK(structurally_equal(a.trees[0][k], b.trees[0][k]));
        }
    }

    TEST_CASE("selection sets") {
        const DecPomdp m = sized(1, 2);
        const ObservationSelection sel{{{1}, {0, 1}}};
        CHECK(sel.joint_in(m) == std::vector<JointObservationId>{2, 3});
        CHECK(sel.joint_out(m) == std::vector<JointObservationId>{0, 1});
        CHECK_FALSE(sel.is_full(m));
        CHECK(ObservationSelection::full(m).is_full(m));
    }

    TEST_CASE("observation ranking") {
        ToySpec spec;
        spec.observations = 2;
        // o0o0: 0.5, o1o1: 0.3, o0o1: 0.2
        spec.observation = [](std::size_t, std::size_t, std::size_t o) {
            const double p[] = {0.5, 0.2, 0.0, 0.3};
            return p[o];
        };
        const DecPomdp m = test::toy(spec);
        const BeliefState b = m.initial_belief();
        CHECK(rank_observations(m, b, 0, 1).per_agent == std::vector<std::vector<int>>{{0}, {0}});
        // Walk: o0o0 adds (0,0); o1o1 adds (1,1).
        CHECK(rank_observations(m, b, 0, 2).per_agent == std::vector<std::vector<int>>{{0, 1}, {0, 1}});
        CHECK(rank_observations(m, b, 0, 2).is_full(m));

        SUBCASE("deterministic observation, fillers follow the ranking") {
            ToySpec det;
            det.observations = 3;
            det.observation = [](std::size_t, std::size_t, std::size_t o) { return o == 4 ? 1.0 : 0.0; };
            const DecPomdp d = test::toy(det);
            CHECK(rank_observations(d, d.initial_belief(), 0, 1).per_agent == std::vector<std::vector<int>>{{1}, {1}});
            // Zero-probability observations tie and fall back to index order.
            CHECK(rank_observations(d, d.initial_belief(), 0, 2).per_agent ==
                  std::vector<std::vector<int>>{{1, 0}, {1, 0}});
        }
    }

    TEST_CASE("fill_missing picks the better donor") {
        ToySpec spec;
        spec.actions = 2;
        spec.observations = 2;
        spec.observation = [](std::size_t, std::size_t next, std::size_t o) {
            return o == (next == 0 ? 0u : 3u) ? 1.0 : 0.0;
        };
        // In s1 joint action (a1, a0) pays 2, (a0, a0) pays 1.
        spec.reward = [](std::size_t s, std::size_t a, std::size_t) {
            if (s != 1) return 0.0;
            return a == 2 ? 2.0 : (a == 0 ? 1.0 : 0.0);
        };
        const DecPomdp m = test::toy(spec);
        CandidateSet donors;
        donors.trees = {{PolicyNode::leaf(0), PolicyNode::leaf(1)}, {PolicyNode::leaf(0)}};
        CandidateSet partial;
        partial.trees = {{PolicyNode::internal(0, {donors.trees[0][0], nullptr})},
                         {PolicyNode::internal(0, {donors.trees[1][0], donors.trees[1][0]})}};
        const BeliefState b = BeliefState::point(2, 1);

        FillStats stats;
        const CandidateSet out = fill_missing(m, partial, donors, b, &stats);
        REQUIRE(out.size(0) == 1);
        CHECK(out.trees[0][0]->complete());
        CHECK(out.trees[0][0]->child(1) == donors.trees[0][1]);
        CHECK(stats.swaps == 1);
        // The complete tree of agent 1 is passed through untouched.
        CHECK(out.trees[1][0] == partial.trees[1][0]);
        CHECK(best_at(m, out.trees, b) == doctest::Approx(3.0));

        SUBCASE("nothing missing: unchanged") {
            const CandidateSet same = fill_missing(m, out, donors, b);
            CHECK(same.trees == out.trees);
        }
        SUBCASE("empty donors") {
            CandidateSet none;
            none.trees = {{}, {PolicyNode::leaf(0)}};
            CHECK_THROWS_AS(fill_missing(m, partial, none, b), DataError);
        }
    }

    TEST_CASE("hill climbing never lowers the best value") {
        Rng rng(21);
        for (int trial = 0; trial < 30; ++trial) {
            const DecPomdp m = test::random_model(rng, 3, 2, 3, 2);
            const CandidateSet donors = one_step_trees(m);
            const ObservationSelection sel{{{static_cast<int>(uniform_index(rng, 3))}, {0, 2}}};
            const CandidateSet partial = partial_backup(m, donors, sel);
            const BeliefState b = m.initial_belief();
            const double start = best_at(m, fill_missing(m, partial, donors, b, nullptr, 0).trees, b);
            const double climbed = best_at(m, fill_missing(m, partial, donors, b).trees, b);
            CHECK(climbed >= start - 1e-12);
        }
    }

    TEST_CASE("pointwise pruning") {
        SUBCASE("duplicates and dominated trees go") {
            ToySpec spec;
            spec.actions = 2;
            // Agent 0's first action pays 1, the other nothing; agent 1 is irrelevant.
            spec.reward = [](std::size_t, std::size_t a, std::size_t) { return a / 2 == 0 ? 1.0 : 0.0; };
            const DecPomdp m = test::toy(spec);
            CandidateSet set;
            set.trees = {{PolicyNode::leaf(1), PolicyNode::leaf(0), PolicyNode::leaf(0)},
                         {PolicyNode::leaf(0), PolicyNode::leaf(1)}};
            const CandidateSet pruned = pointwise_prune(m, set);
            REQUIRE(pruned.size(0) == 1);
            CHECK(pruned.trees[0][0] == set.trees[0][1]);
            REQUIRE(pruned.size(1) == 1);
            CHECK(pruned.trees[1][0] == set.trees[1][0]);
        }
        SUBCASE("never empties a set") {
            const DecPomdp m = sized(2, 1);
            CHECK(pointwise_prune(m, leaves(3, 2)).size(0) == 1);
        }
        SUBCASE("best value at the start belief survives") {
            Rng rng(8);
            for (int trial = 0; trial < 20; ++trial) {
                const DecPomdp m = test::random_model(rng, 2, 2, 2, 2);
                const CandidateSet level = exhaustive_backup(m, one_step_trees(m));
                const CandidateSet pruned = pointwise_prune(m, level);
                CHECK(pruned.size(0) <= level.size(0));
                CHECK(best_at(m, pruned.trees, m.initial_belief()) ==
                      doctest::Approx(best_at(m, level.trees, m.initial_belief())).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("candidate set invariants") {
        CandidateSet set;
        const PolicyTree t = PolicyNode::leaf(0);
        set.trees = {{t, t}, {t}};
        CHECK_THROWS_AS(set.check(), DataError);
    }
}
