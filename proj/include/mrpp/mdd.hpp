#pragma once

#include <compare>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "mrpp/instance.hpp"

namespace mrpp {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Unweighted shortest-path distances from `source`; kUnreachable where no path exists.
std::vector<int> bfs_distances(const Graph& graph, Vertex source);

/// Directed time-expanded edge from `from` at level t to `to` at level t+1.
/// Wait edges have from == to.
struct MddEdge {
    Vertex from;
    Vertex to;
    auto operator<=>(const MddEdge&) const = default;
};

/// Leveled DAG over time-expanded nodes v^t, t in [0, horizon]. Levels and
/// edge lists are kept sorted, which makes variable allocation and dumps
/// deterministic.
class Mdd {
public:
    Mdd(RobotId robot, Vertex start, Vertex goal, int horizon);

    RobotId robot() const { return robot_; }
    Vertex start() const { return start_; }
    Vertex goal() const { return goal_; }
    int horizon() const { return horizon_; }

    std::span<const Vertex> level(int t) const { return levels_[static_cast<std::size_t>(t)]; }
    /// Edges between level t and t+1, sorted by (from, to).
    std::span<const MddEdge> edges(int t) const { return edges_[static_cast<std::size_t>(t)]; }
    /// Outgoing edges of u^t.
    std::span<const MddEdge> out_edges(int t, Vertex u) const;

    bool has_node(Vertex v, int t) const;
    bool has_edge(int t, Vertex u, Vertex v) const;
    std::size_t node_count() const;
    std::size_t edge_count() const;

    /// Adds a node or edge; returns false when it was already present.
    bool add_node(Vertex v, int t);
    bool add_edge(int t, Vertex u, Vertex v);

    /// All root-to-sink walks (start^0 to goal^horizon), up to `limit` of them.
    std::vector<Path> walks(std::size_t limit = 1'000'000) const;

    /// `robot i horizon mu` header, then one `t u v` line per edge.
    void dump(std::ostream& os) const;

    bool operator==(const Mdd&) const = default;

private:
    RobotId robot_;
    Vertex start_;
    Vertex goal_;
    int horizon_;
    std::vector<std::vector<Vertex>> levels_;
    std::vector<std::vector<MddEdge>> edges_;
};

/// Full MDD: v^t is kept iff dist(start, v) <= t and dist(v, goal) <= horizon - t.
/// Throws std::invalid_argument when the goal is not reachable within the horizon.
Mdd build_mdd(const Graph& graph, RobotId robot, Vertex start, Vertex goal, int horizon);

/// Same, reusing precomputed distance tables.
Mdd build_mdd(const Graph& graph, RobotId robot, Vertex start, Vertex goal, int horizon,
              std::span<const int> from_start, std::span<const int> to_goal);

/// Sparse MDD: the union of the time-expanded nodes and edges of a set of
/// paths, each padded with goal-stays up to the horizon. The union may also
/// contain walks that mix two stored paths; each such walk is still a valid
/// start-to-goal path within the horizon.
class Smdd {
public:
    Smdd(RobotId robot, Vertex start, Vertex goal, int horizon);

    const Mdd& diagram() const { return diagram_; }
    std::span<const Path> paths() const { return paths_; }

    /// Adds a path (its cost must be <= horizon and endpoints must match).
    /// Returns false, leaving the diagram unchanged, if the path was already stored.
    bool insert(const Path& path);

private:
    Mdd diagram_;
    std::vector<Path> paths_;
};

Smdd build_smdd(RobotId robot, std::span<const Path> paths, int horizon);
Smdd smdd_insert(Smdd smdd, const Path& path);

}  // namespace mrpp
