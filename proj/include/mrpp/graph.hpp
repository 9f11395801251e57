#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mrpp {

using Vertex = int;
using RobotId = int;

inline constexpr Vertex kNoVertex = -1;

/// Raised for malformed benchmark files (maps, scenarios, configs, DIMACS).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undirected simple graph with dense vertex ids in [0, vertex_count).
/// Adjacency lists are kept sorted so iteration order is deterministic.
class Graph {
public:
    Graph() = default;
    explicit Graph(int vertex_count);

    /// Builds a graph from an edge list. Throws std::invalid_argument on
    /// self-loops or out-of-range endpoints; duplicate edges are merged.
    static Graph from_edges(int vertex_count, std::span<const std::pair<Vertex, Vertex>> edges);

    void add_edge(Vertex u, Vertex v);

    int vertex_count() const { return static_cast<int>(adjacency_.size()); }
    std::size_t edge_count() const { return edge_count_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    bool adjacent(Vertex u, Vertex v) const;
    bool valid(Vertex v) const { return v >= 0 && v < vertex_count(); }

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// A movingai grid: row-major cells, (x = column, y = row).
struct GridMap {
    int width = 0;
    int height = 0;
    std::vector<bool> passable;

    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    bool is_passable(int x, int y) const { return in_bounds(x, y) && passable[cell(x, y)]; }
    std::size_t cell(int x, int y) const { return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x); }
    std::size_t passable_count() const;
};

/// Parses the movingai `.map` format (`type`, `height`, `width`, `map` header lines).
GridMap parse_map(std::string_view text);
std::string format_map(const GridMap& map);

/// Graph over the passable cells of a grid plus the cell <-> vertex mapping.
struct GridGraph {
    Graph graph;
    std::vector<Vertex> cell_to_vertex;  // kNoVertex for blocked cells
    std::vector<std::pair<int, int>> vertex_to_xy;

    Vertex vertex_at(const GridMap& map, int x, int y) const;
};

/// 4-connected graph: one vertex per passable cell, numbered in row-major order.
GridGraph grid_to_graph(const GridMap& map);

}  // namespace mrpp
