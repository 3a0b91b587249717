#include "mbdp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbdp/benchmarks.hpp"
#include "mbdp/errors.hpp"
#include "mbdp/heuristics.hpp"
#include "mbdp/policy_io.hpp"
#include "mbdp/problem_file.hpp"
#include "mbdp/solver.hpp"

namespace mbdp {

using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("failed writing '" + path + "'");
}

const char* command_name(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::exact: return "exact";
        case Command::evaluate: return "evaluate";
        case Command::simulate: return "simulate";
        case Command::bound: return "bound";
        case Command::bench: return "bench";
    }
    return "?";
}

Json record(const char* type) {
    Json j;
    j["schema"] = kReportSchema;
    j["type"] = type;
    return j;
}

Json selection_json(const ObservationSelection& sel, const DecPomdp& model) {
    Json out = Json::array();
    for (std::size_t i = 0; i < sel.per_agent.size(); ++i) {
        Json names = Json::array();
        for (int o : sel.per_agent[i]) names.push_back(model.observation_names(i)[static_cast<std::size_t>(o)]);
        out.push_back(std::move(names));
    }
    return out;
}

Json history_json(const EpsilonReport& e, const DecPomdp& model) {
    Json steps = Json::array();
    for (std::size_t k = 0; k < e.history_actions.size(); ++k) {
        Json step;
        Json acts = Json::array(), obs = Json::array();
        const auto a = model.joint_actions().decode(e.history_actions[k]);
        const auto o = model.joint_observations().decode(e.history_observations[k]);
        for (std::size_t i = 0; i < model.num_agents(); ++i) {
            acts.push_back(model.action_names(i)[static_cast<std::size_t>(a[i])]);
            obs.push_back(model.observation_names(i)[static_cast<std::size_t>(o[i])]);
        }
        step["actions"] = std::move(acts);
        step["observations"] = std::move(obs);
        steps.push_back(std::move(step));
    }
    Json w;
    w["history"] = std::move(steps);
    Json acts = Json::array();
    const auto a = model.joint_actions().decode(e.action);
    for (std::size_t i = 0; i < model.num_agents(); ++i)
        acts.push_back(model.action_names(i)[static_cast<std::size_t>(a[i])]);
    w["action"] = std::move(acts);
    return w;
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string cell(const Json& v, int digits = 2) {
    if (v.is_null()) return "-";
    if (v.is_number_float()) return fixed(v.get<double>(), digits);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// Human-readable rendering of the same records. A bench table comes right
// after its header; everything else follows as key/value blocks.
void render_table(const std::vector<Json>& records, std::ostream& out) {
    std::vector<const Json*> rows, rest;
    for (const auto& r : records) {
        const std::string type = r["type"].get<std::string>();
        if (type == "bench-row") rows.push_back(&r);
        else if (type == "bench")
            out << "problem " << r["problem"].get<std::string>() << ", max-trees " << r["max_trees"].dump()
                << ", max-obs " << cell(r["max_obs"]) << ", best of " << r["seeds"].dump() << " seed(s)\n";
        else rest.push_back(&r);
    }
    if (!rows.empty()) {
        const char* headers[] = {"Horizon", "Optimal", "Random", "MBDP", "Improved MBDP"};
        const char* keys[] = {"horizon", "optimal", "random", "mbdp", "improved_mbdp"};
        const std::size_t widths[] = {7, 9, 9, 9, 14};
        for (int c = 0; c < 5; ++c) out << (c ? "  " : "") << pad(headers[c], widths[c]);
        out << "\n";
        for (const Json* r : rows) {
            for (int c = 0; c < 5; ++c) out << (c ? "  " : "") << pad(cell((*r)[keys[c]]), widths[c]);
            out << "\n";
        }
    }
    for (const Json* r : rest) {
        out << "[" << (*r)["type"].get<std::string>() << "]\n";
        for (const auto& [key, value] : r->items()) {
            if (key == "schema" || key == "type" || key == "levels") continue;
            out << "  " << key << ": " << (value.is_number_float() ? fixed(value.get<double>(), 6) : value.dump()) << "\n";
        }
        if (r->contains("levels")) {
            out << "  levels:\n";
            for (const auto& l : (*r)["levels"]) {
                out << "    depth " << l["depth"].dump() << ": selected " << l["selected"].dump() << ", observations "
                    << l["observations"].dump() << ", backed up " << l["backed_up"].dump() << "\n";
            }
        }
    }
}

bool is_builtin(const std::string& source) { return source.rfind("builtin:", 0) == 0; }

int resolve_horizon(const RunSpec& spec, const DecPomdp& model) {
    if (spec.horizon) {
        if (*spec.horizon < 1) throw UsageError("--horizon must be at least 1");
        return *spec.horizon;
    }
    if (is_builtin(spec.problem)) throw UsageError("--horizon is required for builtin problems");
    return model.horizon();
}

SolverConfig solver_config(const RunSpec& spec) {
    const PortfolioSpec portfolio = parse_portfolio(spec.heuristics);
    SolverConfig cfg;
    cfg.max_trees = spec.max_trees;
    cfg.max_obs = spec.max_obs.value_or(std::numeric_limits<std::size_t>::max());
    cfg.heuristics = portfolio.base;
    cfg.recursion_depth = spec.recursion_depth.value_or(portfolio.recursion_depth);
    cfg.seed = spec.seed;
    cfg.threads = spec.threads;
    return cfg;
}

Json max_obs_json(const RunSpec& spec) {
    return spec.max_obs ? Json(*spec.max_obs) : Json(nullptr);
}

std::size_t effective_max_obs(const RunSpec& spec, const DecPomdp& model) {
    if (spec.max_obs) return *spec.max_obs;
    std::size_t m = 1;
    for (std::size_t i = 0; i < model.num_agents(); ++i) m = std::max(m, model.num_observations(i));
    return m;
}

Json epsilon_fields(Json j, const EpsilonReport& e, const DecPomdp& model) {
    j["epsilon"] = e.epsilon;
    j["epsilon_mode"] = e.mode == EpsilonMode::exact ? "exact" : "sampled";
    j["epsilon_is_estimate"] = e.estimate;
    if (e.estimate) j["epsilon_note"] = "estimate, not a guarantee: sampling can miss the worst history";
    j["beliefs_examined"] = e.histories;
    j["bound"] = e.bound;
    j["reward_max"] = model.reward_max();
    j["reward_min"] = model.reward_min();
    j["witness"] = history_json(e, model);
    return j;
}

EpsilonOptions epsilon_options(const RunSpec& spec) {
    EpsilonOptions opt;
    opt.mode = spec.epsilon_mode;
    opt.samples = spec.epsilon_samples;
    opt.seed = spec.seed;
    return opt;
}

std::vector<std::size_t> node_counts(const JointPolicy& joint) {
    std::vector<std::size_t> out;
    for (const auto& t : joint.trees()) out.push_back(distinct_node_count(t));
    return out;
}

void run_solve(const RunSpec& spec, std::vector<Json>& records) {
    const DecPomdp base = load_problem(spec.problem, spec.boxpush_config);
    const int horizon = resolve_horizon(spec, base);
    const DecPomdp model = base.with_horizon(horizon);
    const SolverConfig cfg = solver_config(spec);
    SolveReport report;
    if (spec.algorithm == "improved") report = improved_mbdp(model, cfg);
    else if (spec.algorithm == "mbdp") report = mbdp::mbdp(model, cfg);
    else throw UsageError("unknown algorithm '" + spec.algorithm + "' (expected improved or mbdp)");

    Json j = record("solve");
    j["problem"] = model.name();
    j["algorithm"] = report.algorithm;
    j["horizon"] = horizon;
    j["max_trees"] = cfg.max_trees;
    j["max_obs"] = max_obs_json(spec);
    j["heuristics"] = spec.heuristics;
    j["recursion_depth"] = cfg.recursion_depth;
    j["seed"] = cfg.seed;
    j["value"] = report.value;
    j["recursion_values"] = report.recursion_values;
    j["chosen_recursion"] = report.chosen_recursion;
    j["policy_nodes"] = node_counts(report.policy);
    Json levels = Json::array();
    for (const auto& l : report.levels) {
        Json lj;
        lj["depth"] = l.depth;
        lj["heuristics"] = l.heuristics;
        lj["selected_values"] = l.selected_values;
        lj["selected"] = l.selected;
        lj["observations"] = selection_json(l.observations, model);
        lj["backed_up"] = l.backed_up;
        lj["fill_sweeps"] = l.fill.sweeps;
        lj["fill_swaps"] = l.fill.swaps;
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);
    if (spec.with_bound) {
        const EpsilonReport e = epsilon_global(model, effective_max_obs(spec, model), horizon, epsilon_options(spec));
        j = epsilon_fields(std::move(j), e, model);
    }
    if (!spec.policy_out.empty()) {
        write_file(spec.policy_out, serialize_policy(report.policy, model));
        j["policy_file"] = spec.policy_out;
    }
    records.push_back(std::move(j));

    Json t = record("timing");
    t["command"] = "solve";
    t["total_ms"] = report.milliseconds;
    Json per_level = Json::array();
    for (const auto& l : report.levels) per_level.push_back(l.milliseconds);
    t["level_ms"] = std::move(per_level);
    records.push_back(std::move(t));
}

void run_exact(const RunSpec& spec, std::vector<Json>& records) {
    const DecPomdp base = load_problem(spec.problem, spec.boxpush_config);
    const int horizon = resolve_horizon(spec, base);
    const DecPomdp model = base.with_horizon(horizon);
    const ExactResult result = exact_solve(model, horizon, kDefaultBackupCap, spec.threads);
    Json j = record("exact");
    j["problem"] = model.name();
    j["horizon"] = horizon;
    j["value"] = result.value;
    j["pruned_sizes"] = result.pruned_sizes;
    j["policy_nodes"] = node_counts(result.policy);
    if (!spec.policy_out.empty()) {
        write_file(spec.policy_out, serialize_policy(result.policy, model));
        j["policy_file"] = spec.policy_out;
    }
    records.push_back(std::move(j));
    Json t = record("timing");
    t["command"] = "exact";
    t["total_ms"] = result.milliseconds;
    records.push_back(std::move(t));
}

// Loads the policy file and sizes the model to its depth.
std::pair<DecPomdp, JointPolicy> load_policy(const RunSpec& spec) {
    if (spec.policy.empty()) throw UsageError("--policy is required");
    const DecPomdp base = load_problem(spec.problem, spec.boxpush_config);
    JointPolicy joint = deserialize_policy(read_file(spec.policy), base);
    if (spec.horizon && *spec.horizon != joint.horizon())
        throw DataError("policy depth " + std::to_string(joint.horizon()) + " differs from --horizon " +
                        std::to_string(*spec.horizon));
    return {base.with_horizon(joint.horizon()), std::move(joint)};
}

void run_evaluate(const RunSpec& spec, std::vector<Json>& records) {
    const auto [model, joint] = load_policy(spec);
    Json j = record("evaluate");
    j["problem"] = model.name();
    j["horizon"] = joint.horizon();
    j["value"] = evaluate_at_belief(model, joint, model.initial_belief());
    records.push_back(std::move(j));
}

void run_simulate(const RunSpec& spec, std::vector<Json>& records) {
    const auto [model, joint] = load_policy(spec);
    if (spec.episodes == 0) throw UsageError("--episodes must be positive");
    const SimulationResult sim = simulate(joint, model, spec.episodes, spec.seed);
    const double exact = evaluate_at_belief(model, joint, model.initial_belief());
    Json j = record("simulate");
    j["problem"] = model.name();
    j["horizon"] = joint.horizon();
    j["episodes"] = sim.episodes;
    j["seed"] = spec.seed;
    j["mean"] = sim.mean;
    j["standard_error"] = sim.standard_error;
    j["exact_value"] = exact;
    j["z_score"] = sim.standard_error > 0.0 ? (sim.mean - exact) / sim.standard_error : 0.0;
    records.push_back(std::move(j));
}

void run_bound(const RunSpec& spec, std::vector<Json>& records) {
    const DecPomdp base = load_problem(spec.problem, spec.boxpush_config);
    const int horizon = resolve_horizon(spec, base);
    const DecPomdp model = base.with_horizon(horizon);
    const EpsilonReport e = epsilon_global(model, effective_max_obs(spec, model), horizon, epsilon_options(spec));
    Json j = record("bound");
    j["problem"] = model.name();
    j["horizon"] = horizon;
    j["max_obs"] = max_obs_json(spec);
    records.push_back(epsilon_fields(std::move(j), e, model));
}

void run_bench(const RunSpec& spec, std::vector<Json>& records) {
    const DecPomdp base = load_problem(spec.problem, spec.boxpush_config);
    const auto horizons = parse_horizon_list(spec.horizons);
    if (spec.seeds == 0) throw UsageError("--seeds must be positive");
    Json head = record("bench");
    head["problem"] = base.name();
    head["max_trees"] = spec.max_trees;
    head["max_obs"] = max_obs_json(spec);
    head["heuristics"] = spec.heuristics;
    head["seeds"] = spec.seeds;
    head["first_seed"] = spec.seed;
    records.push_back(std::move(head));

    Json timing = record("timing");
    timing["command"] = "bench";
    Json timing_rows = Json::array();
    for (int h : horizons) {
        const DecPomdp model = base.with_horizon(h);
        Json row = record("bench-row");
        row["horizon"] = h;
        Json trow;
        trow["horizon"] = h;
        row["optimal"] = nullptr;
        if (h <= spec.exact_max_horizon) {
            try {
                const ExactResult r = exact_solve(model, h, kDefaultBackupCap, spec.threads);
                row["optimal"] = r.value;
                trow["optimal_ms"] = r.milliseconds;
            } catch (const CapacityError&) {
            }
        }
        row["random"] = random_policy_baseline(model, h, spec.seed).value;
        for (const char* algo : {"mbdp", "improved_mbdp"}) {
            RunSpec each = spec;
            SolverConfig cfg = solver_config(each);
            Json best = nullptr;
            double ms = 0.0;
            try {
                for (std::size_t k = 0; k < spec.seeds; ++k) {
                    cfg.seed = spec.seed + k;
                    const SolveReport r = std::string(algo) == "mbdp" ? mbdp::mbdp(model, cfg) : improved_mbdp(model, cfg);
                    ms += r.milliseconds;
                    if (best.is_null() || r.value > best.get<double>()) best = r.value;
                }
            } catch (const CapacityError&) {
                best = nullptr;
            }
            row[algo] = best;
            trow[std::string(algo) + "_ms"] = ms;
        }
        records.push_back(std::move(row));
        timing_rows.push_back(std::move(trow));
    }
    timing["rows"] = std::move(timing_rows);
    records.push_back(std::move(timing));
}

}  // namespace

std::vector<int> parse_horizon_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    auto number = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("bad horizon '" + s + "' in '" + text + "'");
        const int v = std::stoi(s);
        if (v < 1) throw UsageError("horizons must be at least 1");
        return v;
    };
    while (std::getline(in, item, ',')) {
        if (const auto dots = item.find(".."); dots != std::string::npos) {
            const int lo = number(item.substr(0, dots)), hi = number(item.substr(dots + 2));
            if (lo > hi) throw UsageError("empty horizon range '" + item + "'");
            for (int h = lo; h <= hi; ++h) out.push_back(h);
        } else {
            out.push_back(number(item));
        }
    }
    if (out.empty()) throw UsageError("no horizons given");
    return out;
}

DecPomdp load_problem(const std::string& source, const std::string& boxpush_config) {
    if (source.empty()) throw UsageError("--problem is required");
    if (is_builtin(source)) {
        const std::string name = source.substr(8);
        if (!boxpush_config.empty()) {
            if (name != "boxpush") throw UsageError("--boxpush-config only applies to builtin:boxpush");
            return build_boxpush(parse_boxpush_config(read_file(boxpush_config)));
        }
        return builtin(name);
    }
    if (!boxpush_config.empty()) throw UsageError("--boxpush-config only applies to builtin:boxpush");
    return parse_problem_file(source);
}

std::optional<RunSpec> parse_arguments(int argc, const char* const* argv, std::ostream& out) {
    RunSpec spec;
    CLI::App app{"Memory-bounded dynamic programming for finite-horizon DEC-POMDPs", "mbdp"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    int horizon = 0, recursion = -1;
    std::size_t max_obs = 0;
    std::string format = "records", mode = "exact";

    auto problem_opts = [&](CLI::App* sub) {
        sub->add_option("--problem", spec.problem, "builtin:<mabc|tiger|boxpush> or a problem file")->required();
        sub->add_option("--boxpush-config", spec.boxpush_config, "JSON layout for builtin:boxpush");
        sub->add_option("--horizon", horizon, "Planning horizon")->check(CLI::PositiveNumber);
    };
    auto common_opts = [&](CLI::App* sub) {
        sub->add_option("--threads", spec.threads, "Worker threads (default: $MBDP_THREADS or all cores)");
        sub->add_option("--output", spec.output, "Write the report here instead of stdout");
        sub->add_option("--format", format, "records (JSON lines) or table")
            ->check(CLI::IsMember({"records", "json", "table"}));
        sub->add_flag("!--no-timing", spec.timing, "Leave out timing records");
    };
    auto solver_opts = [&](CLI::App* sub) {
        sub->add_option("--max-trees", spec.max_trees, "Trees kept per agent and level")->check(CLI::PositiveNumber);
        sub->add_option("--max-obs", max_obs, "Observations per agent in a partial backup")->check(CLI::PositiveNumber);
        sub->add_option("--heuristics", spec.heuristics, "Portfolio, e.g. mdp,random,recursive:1");
        sub->add_option("--recursion-depth", recursion, "Recursive re-runs seeded with the previous solution")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", spec.seed, "Random seed");
    };
    auto epsilon_opts = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "epsilon computation: exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
        sub->add_option("--samples", spec.epsilon_samples, "Trajectories for the sampled mode");
    };

    auto* solve = app.add_subcommand("solve", "Run (improved) MBDP");
    problem_opts(solve);
    solver_opts(solve);
    common_opts(solve);
    epsilon_opts(solve);
    solve->add_option("--algorithm", spec.algorithm, "improved or mbdp")->check(CLI::IsMember({"improved", "mbdp"}));
    solve->add_flag("--bound", spec.with_bound, "Also report epsilon and the error bound");
    solve->add_option("--policy-out", spec.policy_out, "Write the joint policy here");

    auto* exact = app.add_subcommand("exact", "Exhaustive dynamic programming with pointwise pruning");
    problem_opts(exact);
    common_opts(exact);
    exact->add_option("--policy-out", spec.policy_out, "Write the optimal joint policy here");

    auto* evaluate = app.add_subcommand("evaluate", "Exact value of a policy file");
    problem_opts(evaluate);
    common_opts(evaluate);
    evaluate->add_option("--policy", spec.policy, "Policy file")->required();

    auto* sim = app.add_subcommand("simulate", "Monte Carlo value of a policy file");
    problem_opts(sim);
    common_opts(sim);
    sim->add_option("--policy", spec.policy, "Policy file")->required();
    sim->add_option("--episodes", spec.episodes, "Episodes")->check(CLI::PositiveNumber);
    sim->add_option("--seed", spec.seed, "Random seed");

    auto* bound = app.add_subcommand("bound", "Epsilon and the partial-backup error bound");
    problem_opts(bound);
    common_opts(bound);
    epsilon_opts(bound);
    bound->add_option("--max-obs", max_obs, "Observations per agent")->check(CLI::PositiveNumber);
    bound->add_option("--seed", spec.seed, "Seed for the sampled mode");

    auto* bench = app.add_subcommand("bench", "Value table over several horizons");
    problem_opts(bench);
    solver_opts(bench);
    common_opts(bench);
    bench->add_option("--horizons", spec.horizons, "e.g. 1..4,10,20");
    bench->add_option("--seeds", spec.seeds, "Best over this many consecutive seeds")->check(CLI::PositiveNumber);
    bench->add_option("--exact-max-horizon", spec.exact_max_horizon, "Largest horizon solved exactly");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        std::string detail;
        for (auto* sub : app.get_subcommands())
            if (sub->get_subcommands().empty()) detail = std::string(" [") + sub->get_name() + "]";
        throw UsageError(e.what() + detail);
    }

    const auto chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "solve") spec.command = Command::solve;
    else if (name == "exact") spec.command = Command::exact;
    else if (name == "evaluate") spec.command = Command::evaluate;
    else if (name == "simulate") spec.command = Command::simulate;
    else if (name == "bound") spec.command = Command::bound;
    else spec.command = Command::bench;

    if (chosen->count("--horizon")) spec.horizon = horizon;
    if (chosen->get_option_no_throw("--max-obs") && chosen->count("--max-obs")) spec.max_obs = max_obs;
    if (chosen->get_option_no_throw("--recursion-depth") && chosen->count("--recursion-depth"))
        spec.recursion_depth = recursion;
    spec.format = format == "table" ? OutputFormat::table : OutputFormat::records;
    spec.epsilon_mode = mode == "sampled" ? EpsilonMode::sampled : EpsilonMode::exact;
    return spec;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    std::vector<Json> records;
    auto fail = [&](const char* kind, const std::string& message, int code) {
        Json j = record("error");
        j["command"] = command_name(spec.command);
        j["kind"] = kind;
        j["message"] = message;
        err << j.dump() << "\n";
        return code;
    };
    try {
        switch (spec.command) {
            case Command::solve: run_solve(spec, records); break;
            case Command::exact: run_exact(spec, records); break;
            case Command::evaluate: run_evaluate(spec, records); break;
            case Command::simulate: run_simulate(spec, records); break;
            case Command::bound: run_bound(spec, records); break;
            case Command::bench: run_bench(spec, records); break;
        }
        if (!spec.timing) std::erase_if(records, [](const Json& j) { return j["type"] == "timing"; });

        std::ofstream file;
        std::ostream* sink = &out;
        if (!spec.output.empty()) {
            file.open(spec.output, std::ios::binary);
            if (!file) throw DataError("cannot write '" + spec.output + "'");
            sink = &file;
        }
        if (spec.format == OutputFormat::table) {
            render_table(records, *sink);
        } else {
            for (const auto& r : records) *sink << r.dump() << "\n";
        }
        sink->flush();
        return exit_ok;
    } catch (const UsageError& e) {
        return fail("usage", e.what(), exit_usage);
    } catch (const CapacityError& e) {
        return fail("capacity", e.what(), exit_capacity);
    } catch (const DataError& e) {
        return fail("data", e.what(), exit_data);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), exit_internal);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::optional<RunSpec> spec;
    try {
        spec = parse_arguments(argc, argv, out);
    } catch (const UsageError& e) {
        Json j = record("error");
        j["kind"] = "usage";
        j["message"] = e.what();
        err << j.dump() << "\n";
        return exit_usage;
    }
    if (!spec) return exit_ok;
    return run(*spec, out, err);
}

}  // namespace mbdp
