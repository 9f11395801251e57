#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrpp/deadline.hpp"
#include "mrpp/instance.hpp"

namespace mrpp {

class PathGenCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-robot conflict records in insertion order, without duplicates.
class ConflictSet {
public:
    explicit ConflictSet(int robots = 0) : per_robot_(static_cast<std::size_t>(robots)), seen_(per_robot_.size()) {}

    /// Returns false if the record was already present.
    bool add(const Conflict& c);
    std::span<const Conflict> of(RobotId r) const { return per_robot_[static_cast<std::size_t>(r)]; }
    std::size_t size(RobotId r) const { return per_robot_[static_cast<std::size_t>(r)].size(); }
    int robot_count() const { return static_cast<int>(per_robot_.size()); }

private:
    std::vector<std::vector<Conflict>> per_robot_;
    std::vector<std::set<Conflict>> seen_;
};

/// Candidate path sets Π(r), one per robot. Paths are stored with terminal
/// goal-stays trimmed; the pool only grows.
class PathPool {
public:
    explicit PathPool(int robots = 0) : paths_(static_cast<std::size_t>(robots)) {}

    bool add(RobotId r, Path path);
    bool contains(RobotId r, const Path& path) const;
    std::span<const Path> of(RobotId r) const { return paths_[static_cast<std::size_t>(r)]; }
    std::size_t total() const;

private:
    std::vector<std::vector<Path>> paths_;
};

/// True iff the path (padded with goal-stays forever) violates none of the
/// given conflicts that belong to `robot`.
bool feasible(const Path& path, RobotId robot, std::span<const Conflict> conflicts);

/// Conflicts of `conflicts` that the padded path violates, as indices.
std::vector<std::size_t> violated(const Path& path, std::span<const Conflict> conflicts);

/// Minimum-cost path over (vertex, t) states with t <= horizon that avoids
/// every conflict in `avoid` (robot field ignored) and has cost <= cost_cap.
/// Absent if no such path exists.
std::optional<Path> conflict_aware_astar(const Graph& graph, Vertex start, Vertex goal,
                                         std::span<const Conflict> avoid, int horizon, int cost_cap);

/// Single-robot search context reused across many queries.
class PathSearch {
public:
    PathSearch(const Graph& graph, Vertex start, Vertex goal);

    /// Like conflict_aware_astar; among minimum-cost paths prefers the one
    /// violating the fewest `penalize` conflicts, then lower vertex ids.
    std::optional<Path> find(std::span<const Conflict> avoid, std::span<const Conflict> penalize, int horizon,
                             int cost_cap, const Deadline& deadline = Deadline::never()) const;

    const Graph& graph() const { return *graph_; }
    Vertex start() const { return start_; }
    Vertex goal() const { return goal_; }
    int shortest() const;

private:
    const Graph* graph_;
    Vertex start_;
    Vertex goal_;
    std::vector<int> to_goal_;
};

struct NewPathsResult {
    std::vector<Path> paths;
    std::size_t searches = 0;
};

/// Extends a robot's pool so that for every subset C' of `conflicts` for which
/// some path of cost <= horizon avoids C', the pool holds a path avoiding C'
/// whose cost is the minimum over such paths. `first_fresh` marks where the
/// conflicts added since the previous call (at the same horizon) begin;
/// subsets drawn only from older conflicts are assumed covered already. Pass 0
/// to recheck everything, e.g. after the horizon grew.
///
/// Subsets are covered by branching on the conflicts the chosen path violates
/// (a path avoiding S also avoids every subset of S), so far fewer than 2^n
/// searches are needed. Branches avoiding fewer conflicts are handled first.
/// Throws PathGenCapExceeded after `max_searches` searches.
NewPathsResult new_paths(const PathSearch& search, std::span<const Path> pool, RobotId robot,
                         std::span<const Conflict> conflicts, std::size_t first_fresh, int horizon,
                         std::size_t max_searches, const Deadline& deadline = Deadline::never());

}  // namespace mrpp
