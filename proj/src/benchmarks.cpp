#include "mbdp/benchmarks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "mbdp/errors.hpp"

namespace mbdp {

namespace {

// Fills dense tables for a 2-agent model from callbacks over local indices.
struct DenseBuilder {
    DecPomdpData data;
    std::size_t S = 0, A = 0, O = 0;
    std::size_t A2 = 0, O2 = 0;

    void allocate() {
        S = data.states.size();
        A2 = data.actions[1].size();
        O2 = data.observations[1].size();
        A = data.actions[0].size() * A2;
        O = data.observations[0].size() * O2;
        data.transition.assign(S * A * S, 0.0);
        data.observation.assign(A * S * O, 0.0);
        data.reward.assign(S * A * S, 0.0);
    }
    double& T(std::size_t s, std::size_t a1, std::size_t a2, std::size_t next) {
        return data.transition[(s * A + a1 * A2 + a2) * S + next];
    }
    double& Obs(std::size_t a1, std::size_t a2, std::size_t next, std::size_t o1, std::size_t o2) {
        return data.observation[((a1 * A2 + a2) * S + next) * O + o1 * O2 + o2];
    }
    double& R(std::size_t s, std::size_t a1, std::size_t a2, std::size_t next) {
        return data.reward[(s * A + a1 * A2 + a2) * S + next];
    }
};

}  // namespace

DecPomdp build_mabc(const MabcConfig& cfg, int horizon) {
    for (double p : cfg.arrival)
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("mabc arrival probability outside [0, 1]");
    if (!(cfg.observation_accuracy >= 0.0 && cfg.observation_accuracy <= 1.0))
        throw DataError("mabc observation accuracy outside [0, 1]");

    // state index = 2 * full1 + full2
    DenseBuilder b;
    b.data.name = "mabc";
    b.data.states = {"empty-empty", "empty-full", "full-empty", "full-full"};
    b.data.actions = {{"send", "wait"}, {"send", "wait"}};
    b.data.observations = {{"full", "empty"}, {"full", "empty"}};
    b.data.initial_belief = {0.0, 0.0, 0.0, 1.0};
    b.data.horizon = horizon;
    b.allocate();

    const double q = cfg.observation_accuracy;
    for (std::size_t s = 0; s < 4; ++s) {
        const std::array<bool, 2> full{(s & 2) != 0, (s & 1) != 0};
        for (std::size_t a1 = 0; a1 < 2; ++a1) {
            for (std::size_t a2 = 0; a2 < 2; ++a2) {
                const std::array<bool, 2> sending{a1 == 0 && full[0], a2 == 0 && full[1]};
                const bool delivered = sending[0] != sending[1];
                std::array<bool, 2> after = full;
                if (delivered) after[sending[0] ? 0 : 1] = false;
                // arrivals into empty buffers
                std::array<std::array<double, 2>, 2> p{};  // p[i][full?]
                for (int i = 0; i < 2; ++i) {
                    const double fill = after[i] ? 1.0 : cfg.arrival[i];
                    p[i][1] = fill;
                    p[i][0] = 1.0 - fill;
                }
                for (std::size_t next = 0; next < 4; ++next) {
                    const double pr = p[0][(next & 2) ? 1 : 0] * p[1][(next & 1) ? 1 : 0];
                    b.T(s, a1, a2, next) = pr;
                    b.R(s, a1, a2, next) = delivered ? 1.0 : 0.0;
                }
            }
        }
    }
    for (std::size_t a1 = 0; a1 < 2; ++a1)
        for (std::size_t a2 = 0; a2 < 2; ++a2)
            for (std::size_t next = 0; next < 4; ++next) {
                const std::array<bool, 2> full{(next & 2) != 0, (next & 1) != 0};
                for (std::size_t o1 = 0; o1 < 2; ++o1)
                    for (std::size_t o2 = 0; o2 < 2; ++o2) {
                        const double p1 = ((o1 == 0) == full[0]) ? q : 1.0 - q;
                        const double p2 = ((o2 == 0) == full[1]) ? q : 1.0 - q;
                        b.Obs(a1, a2, next, o1, o2) = p1 * p2;
                    }
            }
    return DecPomdp(std::move(b.data));
}

DecPomdp build_mabc(int horizon) { return build_mabc(MabcConfig{}, horizon); }

DecPomdp build_tiger(int horizon) {
    enum { listen = 0, open_left = 1, open_right = 2 };
    DenseBuilder b;
    b.data.name = "tiger";
    b.data.states = {"tiger-left", "tiger-right"};
    b.data.actions = {{"listen", "open-left", "open-right"}, {"listen", "open-left", "open-right"}};
    b.data.observations = {{"hear-left", "hear-right"}, {"hear-left", "hear-right"}};
    b.data.initial_belief = {0.5, 0.5};
    b.data.horizon = horizon;
    b.allocate();

    // Single-agent outcome classes relative to the tiger's side.
    auto payoff = [](int a1, int a2, int tiger) {
        auto kind = [tiger](int a) { return a == listen ? 0 : (a == open_left) == (tiger == 0) ? 2 : 1; };
        const int k1 = kind(a1), k2 = kind(a2);  // 0 listen, 1 good door, 2 tiger door
        const int lo = std::min(k1, k2), hi = std::max(k1, k2);
        if (lo == 0 && hi == 0) return -2.0;
        if (lo == 1 && hi == 1) return 20.0;
        if (lo == 2 && hi == 2) return -50.0;
        if (lo == 0 && hi == 2) return -101.0;
        if (lo == 0 && hi == 1) return 9.0;
        return -100.0;  // one good door, one tiger door
    };

    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t a1 = 0; a1 < 3; ++a1)
            for (std::size_t a2 = 0; a2 < 3; ++a2) {
                const bool reset = a1 != listen || a2 != listen;
                for (std::size_t next = 0; next < 2; ++next) {
                    b.T(s, a1, a2, next) = reset ? 0.5 : (next == s ? 1.0 : 0.0);
                    b.R(s, a1, a2, next) = payoff(static_cast<int>(a1), static_cast<int>(a2), static_cast<int>(s));
                }
            }
    for (std::size_t a1 = 0; a1 < 3; ++a1)
        for (std::size_t a2 = 0; a2 < 3; ++a2)
            for (std::size_t next = 0; next < 2; ++next)
                for (std::size_t o1 = 0; o1 < 2; ++o1)
                    for (std::size_t o2 = 0; o2 < 2; ++o2) {
                        if (a1 == listen && a2 == listen) {
                            const double p1 = o1 == next ? 0.85 : 0.15;
                            const double p2 = o2 == next ? 0.85 : 0.15;
                            b.Obs(a1, a2, next, o1, o2) = p1 * p2;
                        } else {
                            b.Obs(a1, a2, next, o1, o2) = 0.25;
                        }
                    }
    return DecPomdp(std::move(b.data));
}

// ---------------------------------------------------------------------------
// Box pushing

namespace {

enum BoxAction { turn_left = 0, turn_right = 1, move_forward = 2, stay = 3 };
enum BoxObservation { obs_empty = 0, obs_wall = 1, obs_agent = 2, obs_small = 3, obs_large = 4 };

constexpr const char* kHeadingNames[] = {"N", "E", "S", "W"};

GridCell ahead(GridCell c, Heading h) {
    switch (h) {
        case Heading::north: return {c.x, c.y - 1};
        case Heading::east: return {c.x + 1, c.y};
        case Heading::south: return {c.x, c.y + 1};
        case Heading::west: return {c.x - 1, c.y};
    }
    return c;
}

Heading rotate(Heading h, int quarter_turns) {
    return static_cast<Heading>((static_cast<int>(h) + quarter_turns + 4) % 4);
}

struct World {
    std::array<AgentPose, 2> agents;
    std::vector<GridCell> small;
    std::vector<GridCell> large;  // west cell of each large box
    friend auto operator<=>(const World&, const World&) = default;
    friend bool operator==(const World&, const World&) = default;
};

class Grid {
public:
    explicit Grid(const BoxPushConfig& cfg) : cfg_(cfg) {}

    bool inside(GridCell c) const { return c.x >= 0 && c.y >= 0 && c.x < cfg_.width && c.y < cfg_.height; }
    bool is_goal(GridCell c) const {
        return std::find(cfg_.goal_cells.begin(), cfg_.goal_cells.end(), c) != cfg_.goal_cells.end();
    }

    static int small_at(const World& w, GridCell c) {
        for (std::size_t i = 0; i < w.small.size(); ++i)
            if (w.small[i] == c) return static_cast<int>(i);
        return -1;
    }
    static int large_at(const World& w, GridCell c) {
        for (std::size_t i = 0; i < w.large.size(); ++i)
            if (w.large[i] == c || GridCell{w.large[i].x + 1, w.large[i].y} == c) return static_cast<int>(i);
        return -1;
    }
    static int agent_at(const World& w, GridCell c) {
        for (int i = 0; i < 2; ++i)
            if (w.agents[i].cell == c) return i;
        return -1;
    }
    bool free(const World& w, GridCell c) const {
        return inside(c) && small_at(w, c) < 0 && large_at(w, c) < 0 && agent_at(w, c) < 0;
    }

    int observe(const World& w, int agent) const {
        const GridCell front = ahead(w.agents[agent].cell, w.agents[agent].heading);
        if (!inside(front)) return obs_wall;
        if (agent_at(w, front) >= 0) return obs_agent;
        if (small_at(w, front) >= 0) return obs_small;
        if (large_at(w, front) >= 0) return obs_large;
        return obs_empty;
    }

private:
    const BoxPushConfig& cfg_;
};

// What a forward move would do if it succeeds, decided from the current world.
struct Intent {
    enum Kind { none, walk, push_small, push_large, blocked } kind = none;
    bool bump = false;
    int box = -1;
};

std::array<Intent, 2> intents(const Grid& grid, const World& w, std::array<int, 2> actions) {
    std::array<Intent, 2> out{};
    std::array<int, 2> large_target{-1, -1};
    for (int i = 0; i < 2; ++i) {
        if (actions[i] != move_forward) continue;
        const AgentPose& pose = w.agents[i];
        const GridCell front = ahead(pose.cell, pose.heading);
        Intent& in = out[i];
        if (!grid.inside(front)) {
            in = {Intent::blocked, true, -1};
        } else if (Grid::agent_at(w, front) >= 0) {
            in = {Intent::blocked, false, -1};
        } else if (int sb = Grid::small_at(w, front); sb >= 0) {
            const GridCell dest = ahead(front, pose.heading);
            if (grid.free(w, dest)) in = {Intent::push_small, false, sb};
            else if (grid.inside(dest) && Grid::agent_at(w, dest) >= 0 && Grid::small_at(w, dest) < 0 &&
                     Grid::large_at(w, dest) < 0)
                in = {Intent::blocked, false, -1};  // held up by the other agent
            else in = {Intent::blocked, true, -1};
        } else if (int lb = Grid::large_at(w, front); lb >= 0) {
            large_target[i] = lb;
            in = {Intent::blocked, true, lb};  // revised below when the push is joint
        } else {
            in = {Intent::walk, false, -1};
        }
    }
    // A large box moves only when both agents push it in the same vertical
    // direction, one against each of its cells, and the cells beyond are free.
    if (large_target[0] >= 0 && large_target[0] == large_target[1] &&
        w.agents[0].heading == w.agents[1].heading &&
        (w.agents[0].heading == Heading::north || w.agents[0].heading == Heading::south) &&
        w.agents[0].cell.x != w.agents[1].cell.x) {
        const int lb = large_target[0];
        const GridCell west = w.large[lb];
        const GridCell d0 = ahead(west, w.agents[0].heading);
        const GridCell d1 = ahead(GridCell{west.x + 1, west.y}, w.agents[0].heading);
        if (grid.free(w, d0) && grid.free(w, d1)) {
            out[0] = {Intent::push_large, false, lb};
            out[1] = {Intent::push_large, false, lb};
        }
    }
    return out;
}

// Deterministic successor for given per-agent success outcomes.
World advance(const World& w, std::array<int, 2> actions, const std::array<Intent, 2>& in,
              std::array<bool, 2> success) {
    World next = w;
    std::array<bool, 2> moving{false, false};
    for (int i = 0; i < 2; ++i) {
        if (!success[i]) continue;
        if (actions[i] == turn_left) next.agents[i].heading = rotate(w.agents[i].heading, -1);
        if (actions[i] == turn_right) next.agents[i].heading = rotate(w.agents[i].heading, 1);
        if (actions[i] != move_forward) continue;
        if (in[i].kind == Intent::walk || in[i].kind == Intent::push_small) moving[i] = true;
        if (in[i].kind == Intent::push_large && success[0] && success[1]) moving[i] = true;
    }

    // Proposed positions; conflicting movers both stay.
    auto propose = [&](std::array<bool, 2> mv) {
        World p = next;
        for (int i = 0; i < 2; ++i) {
            if (!mv[i]) continue;
            const Heading h = w.agents[i].heading;
            p.agents[i].cell = ahead(w.agents[i].cell, h);
            if (in[i].kind == Intent::push_small) p.small[in[i].box] = ahead(w.small[in[i].box], h);
        }
        if (mv[0] && mv[1] && in[0].kind == Intent::push_large) {
            const int lb = in[0].box;
            p.large[lb] = ahead(w.large[lb], w.agents[0].heading);
        }
        return p;
    };
    auto clash = [](const World& p) {
        std::vector<GridCell> cells;
        for (const auto& a : p.agents) cells.push_back(a.cell);
        for (const auto& s : p.small) cells.push_back(s);
        for (const auto& l : p.large) {
            cells.push_back(l);
            cells.push_back({l.x + 1, l.y});
        }
        std::sort(cells.begin(), cells.end());
        return std::adjacent_find(cells.begin(), cells.end()) != cells.end();
    };

    // Moves into occupied cells were already refused, so a clash can only
    // come from the two agents' moves interfering: both stay.
    World p = propose(moving);
    if (clash(p)) p = propose({false, false});
    return p;
}

std::string world_name(const World& w) {
    std::ostringstream os;
    for (int i = 0; i < 2; ++i) {
        if (i) os << '_';
        os << "a" << i << "(" << w.agents[i].cell.x << "," << w.agents[i].cell.y << ","
           << kHeadingNames[static_cast<int>(w.agents[i].heading)] << ")";
    }
    for (const auto& s : w.small) os << "_s(" << s.x << "," << s.y << ")";
    for (const auto& l : w.large) os << "_L(" << l.x << "," << l.y << ")";
    return os.str();
}

Heading heading_from(const std::string& name) {
    if (name == "north" || name == "N") return Heading::north;
    if (name == "east" || name == "E") return Heading::east;
    if (name == "south" || name == "S") return Heading::south;
    if (name == "west" || name == "W") return Heading::west;
    throw DataError("unknown heading '" + name + "'");
}

}  // namespace

void BoxPushConfig::check() const {
    if (width < 1 || height < 1) throw DataError("box-push grid must be at least 1x1");
    auto inside = [&](GridCell c) { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; };
    auto where = [](GridCell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; };
    std::vector<GridCell> used;
    auto claim = [&](GridCell c, const std::string& what) {
        if (!inside(c)) throw DataError(what + " at " + where(c) + " is off the grid");
        if (std::find(used.begin(), used.end(), c) != used.end())
            throw DataError(what + " at " + where(c) + " overlaps another object");
        used.push_back(c);
    };
    for (int i = 0; i < 2; ++i) claim(starts[i].cell, "agent " + std::to_string(i));
    for (const auto& s : small_boxes) claim(s, "small box");
    for (const auto& l : large_boxes) {
        claim(l, "large box");
        claim({l.x + 1, l.y}, "large box");
    }
    for (const auto& g : goal_cells)
        if (!inside(g)) throw DataError("goal cell at " + where(g) + " is off the grid");
    auto goal = [&](GridCell c) { return std::find(goal_cells.begin(), goal_cells.end(), c) != goal_cells.end(); };
    for (const auto& s : small_boxes)
        if (goal(s)) throw DataError("small box at " + where(s) + " starts in the goal area");
    for (const auto& l : large_boxes) {
        if (goal(l) && goal({l.x + 1, l.y})) throw DataError("large box at " + where(l) + " starts in the goal area");
        if (height < 2) throw DataError("large box at " + where(l) + " cannot be pushed by two agents");
    }
    if (!(success_probability >= 0.0 && success_probability <= 1.0))
        throw DataError("success probability outside [0, 1]");
}

BoxPushConfig mirrored(const BoxPushConfig& cfg, bool swap_agents) {
    BoxPushConfig m = cfg;
    auto flip = [&](GridCell c) { return GridCell{cfg.width - 1 - c.x, c.y}; };
    auto flip_heading = [](Heading h) {
        if (h == Heading::east) return Heading::west;
        if (h == Heading::west) return Heading::east;
        return h;
    };
    for (int i = 0; i < 2; ++i) m.starts[i] = {flip(cfg.starts[i].cell), flip_heading(cfg.starts[i].heading)};
    if (swap_agents) std::swap(m.starts[0], m.starts[1]);
    for (auto& s : m.small_boxes) s = flip(s);
    for (auto& l : m.large_boxes) l = GridCell{cfg.width - 2 - l.x, l.y};
    for (auto& g : m.goal_cells) g = flip(g);
    return m;
}

BoxPushConfig parse_boxpush_config(const std::string& json_text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError::at_offset("invalid box-push config", json_text, static_cast<std::size_t>(e.byte));
    }
    if (!j.is_object()) throw DataError("box-push config must be a JSON object");
    BoxPushConfig cfg;
    auto cell = [](const json& v) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
            throw DataError("cells are written as [x, y] integer pairs");
        return GridCell{v[0].get<int>(), v[1].get<int>()};
    };
    auto cells = [&](const json& v) {
        if (!v.is_array()) throw DataError("expected a list of cells");
        std::vector<GridCell> out;
        for (const auto& c : v) out.push_back(cell(c));
        return out;
    };
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "width") cfg.width = value.get<int>();
            else if (key == "height") cfg.height = value.get<int>();
            else if (key == "starts") {
                if (!value.is_array() || value.size() != 2) throw DataError("'starts' needs exactly two poses");
                for (int i = 0; i < 2; ++i)
                    cfg.starts[i] = {cell(value[i].at("cell")), heading_from(value[i].at("heading").get<std::string>())};
            } else if (key == "small_boxes") cfg.small_boxes = cells(value);
            else if (key == "large_boxes") cfg.large_boxes = cells(value);
            else if (key == "goal_cells") cfg.goal_cells = cells(value);
            else if (key == "success_probability") cfg.success_probability = value.get<double>();
            else if (key == "stochastic_turns") cfg.stochastic_turns = value.get<bool>();
            else if (key == "step_reward") cfg.step_reward = value.get<double>();
            else if (key == "bump_reward") cfg.bump_reward = value.get<double>();
            else if (key == "small_goal_reward") cfg.small_goal_reward = value.get<double>();
            else if (key == "large_goal_reward") cfg.large_goal_reward = value.get<double>();
            else throw DataError("unknown box-push config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed box-push config: ") + e.what());
    }
    cfg.check();
    return cfg;
}

DecPomdp build_boxpush(const BoxPushConfig& cfg, int horizon) {
    cfg.check();
    const Grid grid(cfg);
    const World start{cfg.starts, cfg.small_boxes, cfg.large_boxes};

    // Reachable worlds by breadth-first search; goal arrivals collapse into
    // one terminal state per set of delivered boxes.
    struct Terminal {
        std::string key;
        double bonus;
    };
    std::map<World, std::size_t> index;
    std::vector<World> worlds;
    std::map<std::string, std::size_t> terminal_index;
    std::vector<std::string> names;
    std::vector<bool> terminal;

    auto delivered = [&](const World& w) -> std::optional<Terminal> {
        std::string key;
        double bonus = 0.0;
        for (std::size_t i = 0; i < w.small.size(); ++i)
            if (grid.is_goal(w.small[i])) {
                key += (key.empty() ? "" : "+") + std::string("small") + std::to_string(i);
                bonus += cfg.small_goal_reward;
            }
        for (std::size_t i = 0; i < w.large.size(); ++i)
            if (grid.is_goal(w.large[i]) && grid.is_goal({w.large[i].x + 1, w.large[i].y})) {
                key += (key.empty() ? "" : "+") + std::string("large") + std::to_string(i);
                bonus += cfg.large_goal_reward;
            }
        if (key.empty()) return std::nullopt;
        return Terminal{key, bonus};
    };

    struct Edge {
        std::size_t from;
        std::size_t action;
        std::size_t to;
        double probability;
        double reward;
    };
    std::vector<Edge> edges;
    const double p = cfg.success_probability;

    auto state_of = [&](const World& w, std::deque<std::size_t>& frontier) -> std::pair<std::size_t, double> {
        if (auto t = delivered(w)) {
            auto [it, fresh] = terminal_index.emplace(t->key, names.size());
            if (fresh) {
                names.push_back("goal:" + t->key);
                terminal.push_back(true);
                worlds.push_back(w);
            }
            return {it->second, t->bonus};
        }
        auto [it, fresh] = index.emplace(w, names.size());
        if (fresh) {
            names.push_back(world_name(w));
            terminal.push_back(false);
            worlds.push_back(w);
            frontier.push_back(it->second);
        }
        return {it->second, 0.0};
    };

    std::deque<std::size_t> frontier;
    state_of(start, frontier);
    while (!frontier.empty()) {
        const std::size_t s = frontier.front();
        frontier.pop_front();
        const World w = worlds[s];
        for (int a1 = 0; a1 < 4; ++a1)
            for (int a2 = 0; a2 < 4; ++a2) {
                const std::array<int, 2> acts{a1, a2};
                const auto in = intents(grid, w, acts);
                double base = 2.0 * cfg.step_reward;
                for (const auto& i : in)
                    if (i.bump) base += cfg.bump_reward;
                std::array<double, 2> ps{};
                for (int i = 0; i < 2; ++i) {
                    const bool risky = acts[i] == move_forward ||
                                       (cfg.stochastic_turns && (acts[i] == turn_left || acts[i] == turn_right));
                    ps[i] = risky ? p : 1.0;
                }
                for (int o = 0; o < 4; ++o) {
                    const std::array<bool, 2> ok{(o & 2) == 0, (o & 1) == 0};
                    const double pr = (ok[0] ? ps[0] : 1.0 - ps[0]) * (ok[1] ? ps[1] : 1.0 - ps[1]);
                    if (pr <= 0.0) continue;
                    const World next = advance(w, acts, in, ok);
                    auto [to, bonus] = state_of(next, frontier);
                    edges.push_back({s, static_cast<std::size_t>(a1 * 4 + a2), to, pr, base + bonus});
                }
            }
    }

    DenseBuilder b;
    b.data.name = "boxpush";
    b.data.states = names;
    const std::vector<std::string> acts{"turn-left", "turn-right", "move", "stay"};
    const std::vector<std::string> obs{"empty", "wall", "agent", "small-box", "large-box"};
    b.data.actions = {acts, acts};
    b.data.observations = {obs, obs};
    b.data.horizon = horizon;
    b.allocate();
    b.data.initial_belief.assign(b.S, 0.0);
    b.data.initial_belief[0] = 1.0;

    for (const Edge& e : edges) {
        double& t = b.data.transition[(e.from * b.A + e.action) * b.S + e.to];
        double& r = b.data.reward[(e.from * b.A + e.action) * b.S + e.to];
        // Several outcomes may land in the same state; they share the reward
        // since bumps depend only on the attempted actions.
        t += e.probability;
        r = e.reward;
    }
    for (std::size_t s = 0; s < b.S; ++s) {
        if (!terminal[s]) continue;
        for (std::size_t a = 0; a < b.A; ++a) {
            b.data.transition[(s * b.A + a) * b.S + 0] = 1.0;
            b.data.reward[(s * b.A + a) * b.S + 0] = 2.0 * cfg.step_reward;
        }
    }
    for (std::size_t a = 0; a < b.A; ++a)
        for (std::size_t next = 0; next < b.S; ++next) {
            const std::size_t o1 = terminal[next] ? obs_empty : grid.observe(worlds[next], 0);
            const std::size_t o2 = terminal[next] ? obs_empty : grid.observe(worlds[next], 1);
            b.data.observation[(a * b.S + next) * b.O + o1 * b.O2 + o2] = 1.0;
        }
    return DecPomdp(std::move(b.data));
}

DecPomdp builtin(const std::string& name, int horizon) {
    if (name == "mabc") return build_mabc(horizon);
    if (name == "tiger") return build_tiger(horizon);
    if (name == "boxpush") return build_boxpush(BoxPushConfig{}, horizon);
    throw UsageError("unknown builtin problem '" + name + "' (expected mabc, tiger or boxpush)");
}

const std::vector<BenchmarkDescriptor>& benchmark_descriptors() {
    static const std::vector<BenchmarkDescriptor> list{
        {"mabc", "two-node broadcast channel, standard formulation", 4, 2, 2},
        {"tiger", "two-agent tiger, standard payoffs", 2, 3, 2},
        {"boxpush", "cooperative box pushing, small grid", 100, 4, 5},
    };
    return list;
}

}  // namespace mbdp
