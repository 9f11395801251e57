#include "mrpp/mdd.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mrpp {

std::vector<int> bfs_distances(const Graph& graph, Vertex source) {
    if (!graph.valid(source)) throw std::invalid_argument("bfs source out of range");
    std::vector<int> dist(static_cast<std::size_t>(graph.vertex_count()), kUnreachable);
    std::deque<Vertex> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : graph.neighbors(u)) {
            auto& dw = dist[static_cast<std::size_t>(w)];
            if (dw == kUnreachable) {
                dw = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

Mdd::Mdd(RobotId robot, Vertex start, Vertex goal, int horizon)
    : robot_(robot), start_(start), goal_(goal), horizon_(horizon) {
    if (horizon < 0) throw std::invalid_argument("negative horizon");
    levels_.resize(static_cast<std::size_t>(horizon) + 1);
    edges_.resize(static_cast<std::size_t>(horizon));
}

std::span<const MddEdge> Mdd::out_edges(int t, Vertex u) const {
    if (t < 0 || t >= horizon_) return {};
    const auto& e = edges_[static_cast<std::size_t>(t)];
    auto lo = std::partition_point(e.begin(), e.end(), [u](const MddEdge& x) { return x.from < u; });
    auto hi = std::partition_point(lo, e.end(), [u](const MddEdge& x) { return x.from == u; });
    return {lo, hi};
}

bool Mdd::has_node(Vertex v, int t) const {
    if (t < 0 || t > horizon_) return false;
    const auto& l = levels_[static_cast<std::size_t>(t)];
    return std::binary_search(l.begin(), l.end(), v);
}

bool Mdd::has_edge(int t, Vertex u, Vertex v) const {
    if (t < 0 || t >= horizon_) return false;
    const auto& e = edges_[static_cast<std::size_t>(t)];
    return std::binary_search(e.begin(), e.end(), MddEdge{u, v});
}

std::size_t Mdd::node_count() const {
    std::size_t n = 0;
    for (const auto& l : levels_) n += l.size();
    return n;
}

std::size_t Mdd::edge_count() const {
    std::size_t n = 0;
    for (const auto& e : edges_) n += e.size();
    return n;
}

bool Mdd::add_node(Vertex v, int t) {
    if (t < 0 || t > horizon_) throw std::out_of_range("mdd level out of range");
    auto& l = levels_[static_cast<std::size_t>(t)];
    auto it = std::lower_bound(l.begin(), l.end(), v);
    if (it != l.end() && *it == v) return false;
    l.insert(it, v);
    return true;
}

bool Mdd::add_edge(int t, Vertex u, Vertex v) {
    if (t < 0 || t >= horizon_) throw std::out_of_range("mdd edge level out of range");
    auto& e = edges_[static_cast<std::size_t>(t)];
    MddEdge edge{u, v};
    auto it = std::lower_bound(e.begin(), e.end(), edge);
    if (it != e.end() && *it == edge) return false;
    e.insert(it, edge);
    return true;
}

std::vector<Path> Mdd::walks(std::size_t limit) const {
    std::vector<Path> result;
    if (!has_node(start_, 0)) return result;
    Path current{start_};
    auto dfs = [&](auto&& self, int t) -> void {
        if (result.size() >= limit) return;
        if (t == horizon_) {
            if (current.back() == goal_) result.push_back(current);
            return;
        }
        for (const MddEdge& e : out_edges(t, current.back())) {
            current.push_back(e.to);
            self(self, t + 1);
            current.pop_back();
        }
    };
    dfs(dfs, 0);
    return result;
}

void Mdd::dump(std::ostream& os) const {
    os << "robot " << robot_ << " horizon " << horizon_ << '\n';
    for (int t = 0; t < horizon_; ++t)
        for (const MddEdge& e : edges(t)) os << t << ' ' << e.from << ' ' << e.to << '\n';
}

Mdd build_mdd(const Graph& graph, RobotId robot, Vertex start, Vertex goal, int horizon) {
    auto from_start = bfs_distances(graph, start);
    auto to_goal = bfs_distances(graph, goal);
    return build_mdd(graph, robot, start, goal, horizon, from_start, to_goal);
}

Mdd build_mdd(const Graph& graph, RobotId robot, Vertex start, Vertex goal, int horizon,
              std::span<const int> from_start, std::span<const int> to_goal) {
    const int shortest = from_start[static_cast<std::size_t>(goal)];
    if (shortest == kUnreachable || shortest > horizon)
        throw std::invalid_argument("robot " + std::to_string(robot) + ": goal unreachable within horizon " +
                                    std::to_string(horizon));
    Mdd mdd(robot, start, goal, horizon);
    auto keep = [&](Vertex v, int t) {
        int ds = from_start[static_cast<std::size_t>(v)];
        int dg = to_goal[static_cast<std::size_t>(v)];
        return ds != kUnreachable && dg != kUnreachable && ds <= t && dg <= horizon - t;
    };
    for (int t = 0; t <= horizon; ++t)
        for (Vertex v = 0; v < graph.vertex_count(); ++v)
            if (keep(v, t)) mdd.add_node(v, t);
    // Both endpoints passing the distance test already implies the node lies on
    // some start^0 -> goal^horizon walk, so no dead-node sweep is required.
    for (int t = 0; t < horizon; ++t)
        for (Vertex u : mdd.level(t)) {
            if (mdd.has_node(u, t + 1)) mdd.add_edge(t, u, u);
            for (Vertex w : graph.neighbors(u))
                if (mdd.has_node(w, t + 1)) mdd.add_edge(t, u, w);
        }
    return mdd;
}

Smdd::Smdd(RobotId robot, Vertex start, Vertex goal, int horizon) : diagram_(robot, start, goal, horizon) {}

bool Smdd::insert(const Path& raw) {
    if (raw.empty()) throw std::invalid_argument("cannot insert an empty path");
    if (raw.front() != diagram_.start() || raw.back() != diagram_.goal())
        throw std::invalid_argument("path endpoints do not match the diagram");
    Path path = trim_goal_stays(raw);
    const int horizon = diagram_.horizon();
    if (static_cast<int>(path.size()) - 1 > horizon)
        throw std::invalid_argument("path cost " + std::to_string(path.size() - 1) + " exceeds horizon " +
                                    std::to_string(horizon));
    if (std::find(paths_.begin(), paths_.end(), path) != paths_.end()) return false;
    for (int t = 0; t <= horizon; ++t) {
        diagram_.add_node(position_at(path, t), t);
        if (t < horizon) diagram_.add_edge(t, position_at(path, t), position_at(path, t + 1));
    }
    paths_.push_back(std::move(path));
    return true;
}

Smdd build_smdd(RobotId robot, std::span<const Path> paths, int horizon) {
    if (paths.empty() || paths.front().empty()) throw std::invalid_argument("build_smdd needs at least one path");
    Smdd smdd(robot, paths.front().front(), paths.front().back(), horizon);
    for (const Path& p : paths) smdd.insert(p);
    return smdd;
}

Smdd smdd_insert(Smdd smdd, const Path& path) {
    smdd.insert(path);
    return smdd;
}

}  // namespace mrpp
