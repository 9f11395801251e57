#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mrpp/graph.hpp"

namespace mrpp {

/// Timed vertex sequence, one entry per timestep starting at t = 0.
using Path = std::vector<Vertex>;

/// Raised when a solution breaks path structure (wrong endpoints, jumps
/// between non-adjacent vertices). Collisions are reported as values instead.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An MRPP instance: a graph and injective start/goal assignments.
class Instance {
public:
    Instance() = default;
    Instance(Graph graph, std::vector<Vertex> starts, std::vector<Vertex> goals);

    const Graph& graph() const { return graph_; }
    int robot_count() const { return static_cast<int>(starts_.size()); }
    Vertex start(RobotId r) const { return starts_[static_cast<std::size_t>(r)]; }
    Vertex goal(RobotId r) const { return goals_[static_cast<std::size_t>(r)]; }
    std::span<const Vertex> starts() const { return starts_; }
    std::span<const Vertex> goals() const { return goals_; }

private:
    Graph graph_;
    std::vector<Vertex> starts_;
    std::vector<Vertex> goals_;
};

struct Solution {
    std::vector<Path> paths;
};

enum class ConflictKind : std::uint8_t { vertex, edge };

/// Avoidance record for a single robot: do not be in `from` at `time`
/// (vertex kind, from == to), or do not traverse from -> to between
/// `time` and `time + 1` (edge kind).
struct Conflict {
    RobotId robot = 0;
    ConflictKind kind = ConflictKind::vertex;
    Vertex from = kNoVertex;
    Vertex to = kNoVertex;
    int time = 0;

    static Conflict at_vertex(RobotId r, Vertex v, int t) { return {r, ConflictKind::vertex, v, v, t}; }
    static Conflict on_edge(RobotId r, Vertex u, Vertex v, int t) { return {r, ConflictKind::edge, u, v, t}; }

    auto operator<=>(const Conflict&) const = default;
};

/// A discovered violation between two robots. For edge collisions `from -> to`
/// is the move of `first`; `second` moves `to -> from` in the same step.
struct Collision {
    ConflictKind kind = ConflictKind::vertex;
    RobotId first = 0;
    RobotId second = 0;
    Vertex from = kNoVertex;
    Vertex to = kNoVertex;
    int time = 0;

    auto operator<=>(const Collision&) const = default;
};

/// The two avoidance records refining one collision.
struct ConflictPair {
    Conflict first;
    Conflict second;

    static ConflictPair from_collision(const Collision& c);
    auto operator<=>(const ConflictPair&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Conflict& c);
std::ostream& operator<<(std::ostream& os, const Collision& c);

/// Position of a path at time t; paths are padded by staying at their last vertex.
inline Vertex position_at(const Path& path, int t) {
    return path[static_cast<std::size_t>(t) < path.size() ? static_cast<std::size_t>(t) : path.size() - 1];
}

/// Smallest t* with p_t = goal for every t >= t*. Throws std::invalid_argument
/// when the path is empty or does not end at `goal`.
int individual_cost(const Path& path, Vertex goal);

int sum_of_costs(const Solution& solution, const Instance& instance);

/// Largest individual cost, i.e. the horizon once terminal goal-stays are trimmed.
int makespan(const Solution& solution, const Instance& instance);

/// Removes trailing goal-stays so that path.size() == individual_cost + 1.
Path trim_goal_stays(Path path);

/// Checks endpoints and adjacency (throws StructuralError), then returns every
/// vertex and edge collision with shorter paths padded by goal-stays.
std::vector<Collision> validate_solution(const Instance& instance, const Solution& solution);

/// One row of a movingai `.scen` file.
struct ScenarioRow {
    int bucket = 0;
    std::string map_name;
    int map_width = 0;
    int map_height = 0;
    int start_x = 0;
    int start_y = 0;
    int goal_x = 0;
    int goal_y = 0;
    double optimal_length = 0.0;
};

std::vector<ScenarioRow> parse_scenario_rows(std::string_view text);

/// Builds an instance from the given rows (one robot per row, in order).
/// Throws ParseError for out-of-bounds or blocked coordinates and for
/// repeated start or goal cells.
Instance instance_from_rows(const GridMap& map, std::span<const ScenarioRow> rows);

/// First k rows of a scenario become robots 0..k-1.
Instance parse_scenario(std::string_view text, const GridMap& map, int k);

}  // namespace mrpp
