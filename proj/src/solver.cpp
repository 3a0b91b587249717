#include "mbdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "mbdp/errors.hpp"
#include "mbdp/parallel.hpp"

namespace mbdp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Below this many tuples a scan is not worth a thread.
constexpr std::size_t kParallelThreshold = 1u << 14;

std::vector<TreeShape> shapes_of(const std::vector<PolicyTree>& trees, std::size_t agent,
                                 const LevelTable* children) {
    std::vector<TreeShape> out;
    out.reserve(trees.size());
    for (const auto& t : trees) out.push_back(children ? children->shape_of(agent, t) : TreeShape{t->action(), {}});
    return out;
}

std::uint64_t stream_id(std::size_t run, int level, std::size_t round) {
    return (static_cast<std::uint64_t>(run) << 48) ^ (static_cast<std::uint64_t>(level) << 24) ^
           static_cast<std::uint64_t>(round);
}

// One pass of the bottom-up loop for a fixed heuristic portfolio.
SolveReport run_loop(const DecPomdp& model, const SolverConfig& cfg, const std::vector<Heuristic>& portfolio,
                     bool full_backups, std::size_t run, std::size_t workers) {
    const int horizon = model.horizon();
    const std::size_t n = model.num_agents();
    SolveReport report;

    CandidateSet q = one_step_trees(model);
    std::optional<LevelTable> children;  // values of the trees q's children come from

    for (int t = 1; t < horizon; ++t) {
        const auto started = Clock::now();
        LevelReport level;
        level.depth = t;

        std::vector<std::vector<TreeShape>> shapes(n);
        for (std::size_t i = 0; i < n; ++i) shapes[i] = shapes_of(q.trees[i], i, children ? &*children : nullptr);

        std::vector<std::vector<std::size_t>> open(n), chosen(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < q.trees[i].size(); ++k) open[i].push_back(k);

        BeliefTrajectory anchor;
        for (std::size_t k = 0; k < cfg.max_trees; ++k) {
            const Heuristic& h = portfolio[k % portfolio.size()];
            Rng rng = derived_rng(cfg.seed, stream_id(run, t, k));
            BeliefTrajectory traj = generate_belief(h, model, horizon - t, rng);
            const BeliefScorer scorer(model, traj.beliefs.back(), children ? &*children : nullptr);

            // Once an agent's pool is used up its candidates are the trees it
            // already selected, so no tree is selected twice.
            std::vector<std::vector<const TreeShape*>> candidates(n);
            std::vector<const std::vector<std::size_t>*> origin(n);
            for (std::size_t i = 0; i < n; ++i) {
                origin[i] = open[i].empty() ? &chosen[i] : &open[i];
                for (std::size_t idx : *origin[i]) candidates[i].push_back(&shapes[i][idx]);
            }
            const TupleChoice choice = best_tuple(scorer, candidates, workers);
            for (std::size_t i = 0; i < n; ++i) {
                if (origin[i] != &open[i]) continue;
                const std::size_t idx = open[i][choice.positions[i]];
                open[i].erase(open[i].begin() + static_cast<std::ptrdiff_t>(choice.positions[i]));
                chosen[i].push_back(idx);
            }
            level.heuristics.push_back(h.name());
            level.selected_values.push_back(choice.value);
            if (k == 0) anchor = std::move(traj);
        }

        CandidateSet selected;
        selected.trees.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t idx : chosen[i]) selected.trees[i].push_back(q.trees[i][idx]);
            level.selected.push_back(selected.trees[i].size());
        }

        // The new trees start one step earlier, at b^{T-t-1}.
        const BeliefState& previous = anchor.beliefs[static_cast<std::size_t>(horizon - t - 1)];
        const JointActionId action = anchor.actions[static_cast<std::size_t>(horizon - t - 1)];
        level.observations = full_backups ? ObservationSelection::full(model)
                                          : rank_observations(model, previous, action, cfg.max_obs);

        LevelTable table = children ? LevelTable::compute(model, selected.trees, *children)
                                    : LevelTable::compute(model, selected.trees);
        CandidateSet next = partial_backup(model, selected, level.observations, cfg.backup_cap);
        if (!level.observations.is_full(model))
            next = fill_missing(model, next, table, previous, &level.fill, cfg.fill_rounds);
        for (std::size_t i = 0; i < n; ++i) level.backed_up.push_back(next.trees[i].size());

        q = std::move(next);
        children = std::move(table);
        level.milliseconds = elapsed_ms(started);
        report.levels.push_back(std::move(level));
    }

    const BeliefScorer scorer(model, model.initial_belief(), children ? &*children : nullptr);
    std::vector<std::vector<TreeShape>> shapes(n);
    std::vector<std::vector<const TreeShape*>> candidates(n);
    for (std::size_t i = 0; i < n; ++i) {
        shapes[i] = shapes_of(q.trees[i], i, children ? &*children : nullptr);
        for (const auto& s : shapes[i]) candidates[i].push_back(&s);
    }
    const TupleChoice choice = best_tuple(scorer, candidates, workers);
    std::vector<PolicyTree> trees;
    for (std::size_t i = 0; i < n; ++i) trees.push_back(q.trees[i][choice.positions[i]]);
    report.policy = JointPolicy(std::move(trees));
    report.value = choice.value;
    return report;
}

SolveReport solve(const DecPomdp& model, const SolverConfig& cfg, bool full_backups, const char* name) {
    const auto started = Clock::now();
    cfg.check();
    require_valid(model);
    for (std::size_t i = 0; i < model.num_agents(); ++i) {
        const std::size_t k = full_backups ? model.num_observations(i) : std::min(cfg.max_obs, model.num_observations(i));
        const std::size_t count = backup_count(model.num_actions(i), cfg.max_trees, k);
        if (count == 0 || count > cfg.backup_cap)
            throw CapacityError("a backup for agent " + std::to_string(i) + " could produce " +
                                (count == 0 ? std::string("more than 2^64") : std::to_string(count)) +
                                " trees, above the cap of " + std::to_string(cfg.backup_cap) +
                                "; lower max-trees or max-obs");
    }
    const std::size_t workers = resolve_threads(cfg.threads);

    std::vector<Heuristic> base;
    for (HeuristicKind kind : cfg.heuristics) {
        if (kind == HeuristicKind::mdp) base.push_back(Heuristic::mdp(model));
        else if (kind == HeuristicKind::random) base.push_back(Heuristic::random());
        else throw UsageError("policy replay is added through the recursion depth, not the portfolio");
    }

    SolveReport best = run_loop(model, cfg, base, full_backups, 0, workers);
    std::vector<double> values{best.value};
    std::size_t chosen = 0;
    for (int r = 1; r <= cfg.recursion_depth; ++r) {
        std::vector<Heuristic> portfolio = base;
        portfolio.push_back(recursive_wrap(best.policy));
        SolveReport next = run_loop(model, cfg, portfolio, full_backups, static_cast<std::size_t>(r), workers);
        values.push_back(next.value);
        if (next.value > best.value) {
            best = std::move(next);
            chosen = static_cast<std::size_t>(r);
        }
    }
    best.algorithm = name;
    best.recursion_values = std::move(values);
    best.chosen_recursion = chosen;
    best.milliseconds = elapsed_ms(started);
    return best;
}

PolicyTree random_tree(int depth, std::size_t actions, std::size_t observations, Rng& rng) {
    const int action = static_cast<int>(uniform_index(rng, actions));
    if (depth == 1) return PolicyNode::leaf(action);
    std::vector<PolicyTree> kids;
    kids.reserve(observations);
    for (std::size_t o = 0; o < observations; ++o) kids.push_back(random_tree(depth - 1, actions, observations, rng));
    return PolicyNode::internal(action, std::move(kids));
}

}  // namespace

void SolverConfig::check() const {
    if (max_trees < 1) throw UsageError("max-trees must be at least 1");
    if (max_obs < 1) throw UsageError("max-obs must be at least 1");
    if (heuristics.empty()) throw UsageError("the heuristic portfolio is empty");
    if (recursion_depth < 0) throw UsageError("recursion depth must be non-negative");
    if (backup_cap < 1) throw UsageError("backup cap must be positive");
    if (fill_rounds < 1) throw UsageError("fill rounds must be positive");
}

TupleChoice best_tuple(const BeliefScorer& scorer, const std::vector<std::vector<const TreeShape*>>& candidates,
                       std::size_t threads) {
    const std::size_t n = candidates.size();
    std::size_t total = 1;
    for (const auto& c : candidates) {
        if (c.empty()) throw DataError("no candidate trees to choose from");
        total *= c.size();
    }
    const std::size_t workers = total < kParallelThreshold ? 1 : std::max<std::size_t>(1, threads);
    const std::size_t chunks = std::min(workers, total);
    std::vector<double> best_value(chunks, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> best_index(chunks, total);

    parallel_chunks(total, workers, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        double bv = -std::numeric_limits<double>::infinity();
        std::size_t bi = total;
        if (n == 2) {
            const std::size_t m = candidates[1].size();
            for (std::size_t flat = begin; flat < end; ++flat) {
                const double v = scorer.value(*candidates[0][flat / m], *candidates[1][flat % m]);
                if (v > bv || bi == total) {
                    bv = v;
                    bi = flat;
                }
            }
        } else {
            std::vector<const TreeShape*> members(n);
            for (std::size_t flat = begin; flat < end; ++flat) {
                std::size_t rest = flat;
                for (std::size_t i = n; i-- > 0;) {
                    members[i] = candidates[i][rest % candidates[i].size()];
                    rest /= candidates[i].size();
                }
                const double v = scorer.value(members);
                if (v > bv || bi == total) {
                    bv = v;
                    bi = flat;
                }
            }
        }
        best_value[chunk] = bv;
        best_index[chunk] = bi;
    });

    std::size_t winner = 0;
    for (std::size_t c = 1; c < chunks; ++c)
        if (best_value[c] > best_value[winner]) winner = c;  // chunks are in index order
    if (std::isnan(best_value[winner])) throw EvaluationError("tuple values are not comparable (NaN)");

    TupleChoice choice;
    choice.value = best_value[winner];
    choice.positions.resize(n);
    std::size_t rest = best_index[winner];
    for (std::size_t i = n; i-- > 0;) {
        choice.positions[i] = rest % candidates[i].size();
        rest /= candidates[i].size();
    }
    return choice;
}

SolveReport improved_mbdp(const DecPomdp& model, const SolverConfig& cfg) {
    return solve(model, cfg, false, "improved-mbdp");
}

SolveReport mbdp(const DecPomdp& model, const SolverConfig& cfg) { return solve(model, cfg, true, "mbdp"); }

ExactResult exact_solve(const DecPomdp& model, int horizon, std::size_t cap, std::size_t threads) {
    const auto started = Clock::now();
    if (horizon < 1) throw UsageError("horizon must be at least 1");
    require_valid(model);
    const std::size_t workers = resolve_threads(threads);
    const std::size_t n = model.num_agents();
    ExactResult result;

    CandidateSet q = one_step_trees(model);
    std::optional<LevelTable> children;
    for (int t = 1; t < horizon; ++t) {
        q = pointwise_prune(model, q);
        std::vector<std::size_t> sizes;
        for (std::size_t i = 0; i < n; ++i) sizes.push_back(q.trees[i].size());
        result.pruned_sizes.push_back(std::move(sizes));
        LevelTable table = children ? LevelTable::compute(model, q.trees, *children) : LevelTable::compute(model, q.trees);
        q = exhaustive_backup(model, q, cap);
        children = std::move(table);
    }

    const BeliefScorer scorer(model, model.initial_belief(), children ? &*children : nullptr);
    std::vector<std::vector<TreeShape>> shapes(n);
    std::vector<std::vector<const TreeShape*>> candidates(n);
    for (std::size_t i = 0; i < n; ++i) {
        shapes[i] = shapes_of(q.trees[i], i, children ? &*children : nullptr);
        for (const auto& s : shapes[i]) candidates[i].push_back(&s);
    }
    const TupleChoice choice = best_tuple(scorer, candidates, workers);
    std::vector<PolicyTree> trees;
    for (std::size_t i = 0; i < n; ++i) trees.push_back(q.trees[i][choice.positions[i]]);
    result.policy = JointPolicy(std::move(trees));
    result.value = choice.value;
    result.milliseconds = elapsed_ms(started);
    return result;
}

JointPolicy random_joint_policy(const DecPomdp& model, int horizon, Rng& rng, std::size_t max_nodes) {
    if (horizon < 1) throw UsageError("horizon must be at least 1");
    std::vector<PolicyTree> trees;
    for (std::size_t i = 0; i < model.num_agents(); ++i) {
        const std::size_t branching = model.num_observations(i);
        std::size_t nodes = 0, layer = 1;
        for (int d = 0; d < horizon; ++d) {
            nodes += layer;
            if (nodes > max_nodes) throw CapacityError("a random tree would exceed " + std::to_string(max_nodes) + " nodes");
            if (d + 1 < horizon && layer > max_nodes / std::max<std::size_t>(branching, 1))
                throw CapacityError("a random tree would exceed " + std::to_string(max_nodes) + " nodes");
            layer *= branching;
        }
        trees.push_back(random_tree(horizon, model.num_actions(i), branching, rng));
    }
    return JointPolicy(std::move(trees));
}

BaselineReport random_policy_baseline(const DecPomdp& model, int horizon, std::uint64_t seed, std::size_t samples) {
    if (horizon < 1) throw UsageError("horizon must be at least 1");
    BaselineReport report;
    report.samples = samples;
    const BeliefState start = model.initial_belief();
    if (samples == 0) {
        const std::size_t ns = model.num_states();
        const std::size_t na = model.num_joint_actions();
        const double share = 1.0 / static_cast<double>(na);
        std::vector<double> belief(start.probabilities().begin(), start.probabilities().end());
        double total = 0.0;
        for (int step = 0; step < horizon; ++step) {
            std::vector<double> next(ns, 0.0);
            for (std::size_t s = 0; s < ns; ++s) {
                if (belief[s] == 0.0) continue;
                for (JointActionId a = 0; a < na; ++a) {
                    total += belief[s] * share * model.expected_reward(s, a);
                    for (const auto& succ : model.successors(s, a))
                        next[succ.state] += belief[s] * share * succ.probability;
                }
            }
            belief = std::move(next);
        }
        report.value = total;
        return report;
    }
    Rng rng = derived_rng(seed, 0);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const JointPolicy joint = random_joint_policy(model, horizon, rng);
        const double v = evaluate_at_belief(model, joint, start);
        const double delta = v - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (v - mean);
    }
    report.value = mean;
    report.standard_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
    return report;
}

}  // namespace mbdp
