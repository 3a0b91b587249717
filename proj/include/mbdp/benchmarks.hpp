#pragma once

#include <array>
#include <string>
#include <vector>

#include "mbdp/model.hpp"

namespace mbdp {

struct BenchmarkDescriptor {
    std::string name;
    std::string summary;
    std::size_t states;
    std::size_t actions;       // per agent
    std::size_t observations;  // per agent
};

// Two-node broadcast channel: each node buffers at most one message, a
// transmission succeeds (reward 1) when exactly one node with a message
// sends, and empty buffers refill at the end of each step. Each agent gets a
// noisy reading of its own buffer. Starts with both buffers full.
struct MabcConfig {
    std::array<double, 2> arrival{0.9, 0.1};
    double observation_accuracy = 0.9;
};

DecPomdp build_mabc(const MabcConfig& cfg, int horizon = 1);
DecPomdp build_mabc(int horizon = 1);

// Two agents facing two doors, one hiding a tiger. Listening is informative
// (0.85 per agent), any door opening resets the problem.
DecPomdp build_tiger(int horizon = 1);

struct GridCell {
    int x = 0;
    int y = 0;
    friend bool operator==(const GridCell&, const GridCell&) = default;
    friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

enum class Heading { north = 0, east = 1, south = 2, west = 3 };

struct AgentPose {
    GridCell cell;
    Heading heading = Heading::north;
    friend bool operator==(const AgentPose&, const AgentPose&) = default;
    friend auto operator<=>(const AgentPose&, const AgentPose&) = default;
};

// Layout and constants of the cooperative box-pushing grid. y grows
// downwards; a large box occupies `cell` and the cell to its east.
struct BoxPushConfig {
    int width = 4;
    int height = 3;
    std::array<AgentPose, 2> starts{AgentPose{{0, 2}, Heading::east}, AgentPose{{3, 2}, Heading::west}};
    std::vector<GridCell> small_boxes{{0, 1}, {3, 1}};
    std::vector<GridCell> large_boxes{{1, 1}};
    std::vector<GridCell> goal_cells{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    double success_probability = 0.9;
    // When false only forward moves can fail; turning always succeeds.
    bool stochastic_turns = false;
    double step_reward = -0.1;   // per agent per step
    double bump_reward = -5.0;   // per agent bumping into a wall or an immovable box
    double small_goal_reward = 10.0;
    double large_goal_reward = 100.0;

    // Throws DataError describing the first problem found.
    void check() const;
};

// Mirror image across the vertical axis; with `swap_agents` the two agents
// also trade places in the agent order.
BoxPushConfig mirrored(const BoxPushConfig& cfg, bool swap_agents);

// Reads a BoxPushConfig from JSON text (see docs/boxpush_config.md).
BoxPushConfig parse_boxpush_config(const std::string& json_text);

DecPomdp build_boxpush(const BoxPushConfig& cfg = {}, int horizon = 1);

// "mabc", "tiger" or "boxpush" with default settings. Throws UsageError on
// unknown names.
DecPomdp builtin(const std::string& name, int horizon = 1);

const std::vector<BenchmarkDescriptor>& benchmark_descriptors();

}  // namespace mbdp
