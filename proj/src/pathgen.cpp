#include "mrpp/pathgen.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "mrpp/mdd.hpp"

namespace mrpp {

bool ConflictSet::add(const Conflict& c) {
    auto r = static_cast<std::size_t>(c.robot);
    if (r >= per_robot_.size()) throw std::out_of_range("conflict robot out of range");
    if (!seen_[r].insert(c).second) return false;
    per_robot_[r].push_back(c);
    return true;
}

bool PathPool::add(RobotId r, Path path) {
    path = trim_goal_stays(std::move(path));
    auto& list = paths_[static_cast<std::size_t>(r)];
    if (std::find(list.begin(), list.end(), path) != list.end()) return false;
    list.push_back(std::move(path));
    return true;
}

bool PathPool::contains(RobotId r, const Path& path) const {
    const auto& list = paths_[static_cast<std::size_t>(r)];
    return std::find(list.begin(), list.end(), trim_goal_stays(path)) != list.end();
}

std::size_t PathPool::total() const {
    std::size_t n = 0;
    for (const auto& p : paths_) n += p.size();
    return n;
}

namespace {

bool violates(const Path& path, const Conflict& c) {
    if (c.kind == ConflictKind::vertex) return position_at(path, c.time) == c.from;
    const auto t = static_cast<std::size_t>(c.time);
    return c.time >= 0 && t + 1 < path.size() && path[t] == c.from && path[t + 1] == c.to;
}

std::uint64_t key(Vertex u, Vertex v, int t) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t)) << 42) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 21) | static_cast<std::uint32_t>(v);
}

}  // namespace

bool feasible(const Path& path, RobotId robot, std::span<const Conflict> conflicts) {
    return std::none_of(conflicts.begin(), conflicts.end(),
                        [&](const Conflict& c) { return c.robot == robot && violates(path, c); });
}

std::vector<std::size_t> violated(const Path& path, std::span<const Conflict> conflicts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < conflicts.size(); ++i)
        if (violates(path, conflicts[i])) out.push_back(i);
    return out;
}

PathSearch::PathSearch(const Graph& graph, Vertex start, Vertex goal)
    : graph_(&graph), start_(start), goal_(goal), to_goal_(bfs_distances(graph, goal)) {
    if (!graph.valid(start)) throw std::invalid_argument("start vertex out of range");
}

int PathSearch::shortest() const { return to_goal_[static_cast<std::size_t>(start_)]; }

std::optional<Path> PathSearch::find(std::span<const Conflict> avoid, std::span<const Conflict> penalize, int horizon,
                                     int cost_cap, const Deadline& deadline) const {
    if (horizon < 0 || cost_cap < 0) return std::nullopt;
    const Graph& g = *graph_;
    const int n = g.vertex_count();

    std::unordered_set<std::uint64_t> blocked;
    int goal_blocked_until = -1;
    for (const Conflict& c : avoid) {
        if (c.kind == ConflictKind::vertex) {
            blocked.insert(key(c.from, c.from, c.time));
            if (c.from == goal_) goal_blocked_until = std::max(goal_blocked_until, c.time);
        } else {
            blocked.insert(key(c.from, c.to, c.time));
        }
    }
    // Penalized goal conflicts after arrival are the same for every path of a
    // given cost, so only the conflicts along the way are counted.
    std::unordered_map<std::uint64_t, int> penalty;
    for (const Conflict& c : penalize) penalty[key(c.from, c.to, c.time)] += 1;
    auto penalty_at = [&](Vertex u, Vertex v, int t) {
        if (penalty.empty()) return 0;
        auto it = penalty.find(key(u, v, t));
        return it == penalty.end() ? 0 : it->second;
    };
    const auto h = [&](Vertex v) { return to_goal_[static_cast<std::size_t>(v)]; };
    if (h(start_) == kUnreachable || h(start_) > cost_cap) return std::nullopt;
    if (blocked.count(key(start_, start_, 0))) return std::nullopt;

    const std::size_t states = static_cast<std::size_t>(horizon + 1) * static_cast<std::size_t>(n);
    std::vector<int> best(states, std::numeric_limits<int>::max());
    std::vector<int> parent(states, -1);
    auto id = [n](Vertex v, int t) { return static_cast<std::size_t>(t) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v); };

    // (f, violations, vertex, t): lexicographic order doubles as the tie-break.
    using Entry = std::tuple<int, int, Vertex, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    const int start_penalty = penalty_at(start_, start_, 0);
    best[id(start_, 0)] = start_penalty;
    open.emplace(h(start_), start_penalty, start_, 0);

    std::size_t pops = 0;
    while (!open.empty()) {
        auto [f, viol, v, t] = open.top();
        open.pop();
        if ((++pops & 1023) == 0 && deadline.expired()) throw DeadlineExceeded();
        if (viol > best[id(v, t)]) continue;
        if (v == goal_ && t > goal_blocked_until) {
            Path path(static_cast<std::size_t>(t) + 1);
            int state = static_cast<int>(id(v, t));
            for (int step = t; step >= 0; --step) {
                path[static_cast<std::size_t>(step)] = static_cast<Vertex>(state % n);
                state = parent[static_cast<std::size_t>(state)];
            }
            return path;
        }
        if (t == horizon) continue;
        auto relax = [&](Vertex w) {
            const int nt = t + 1;
            const int hw = h(w);
            if (hw == kUnreachable || nt + hw > cost_cap) return;
            if (blocked.count(key(w, w, nt))) return;
            if (w != v && blocked.count(key(v, w, t))) return;
            const int nv = viol + penalty_at(w, w, nt) + (w != v ? penalty_at(v, w, t) : 0);
            auto& b = best[id(w, nt)];
            if (nv >= b) return;
            b = nv;
            parent[id(w, nt)] = static_cast<int>(id(v, t));
            open.emplace(nt + hw, nv, w, nt);
        };
        relax(v);
        for (Vertex w : g.neighbors(v)) relax(w);
    }
    return std::nullopt;
}

std::optional<Path> conflict_aware_astar(const Graph& graph, Vertex start, Vertex goal,
                                         std::span<const Conflict> avoid, int horizon, int cost_cap) {
    if (cost_cap > horizon) throw std::invalid_argument("cost cap exceeds horizon");
    return PathSearch(graph, start, goal).find(avoid, {}, horizon, cost_cap);
}

NewPathsResult new_paths(const PathSearch& search, std::span<const Path> pool, RobotId robot,
                         std::span<const Conflict> conflicts, std::size_t first_fresh, int horizon,
                         std::size_t max_searches, const Deadline& deadline) {
    for (const Conflict& c : conflicts)
        if (c.robot != robot) throw std::invalid_argument("conflict of another robot passed to new_paths");

    NewPathsResult result;
    const std::size_t n = conflicts.size();
    if (first_fresh >= n) return result;

    struct Known {
        Path path;
        int cost;
        std::vector<std::size_t> violations;
    };
    std::vector<Known> known;
    for (const Path& p : pool) known.push_back({p, individual_cost(p, search.goal()), violated(p, conflicts)});

    enum : std::uint8_t { kIgnored = 0, kAvoided = 1, kOpen = 2 };
    // Each item covers the subsets C' with avoided ⊆ C' ⊆ avoided ∪ open.
    std::deque<std::vector<std::uint8_t>> work;
    work.emplace_back(n, kOpen);

    std::vector<Conflict> avoid, penalize;
    while (!work.empty()) {
        std::vector<std::uint8_t> item = std::move(work.front());
        work.pop_front();

        bool touches_fresh = false;
        for (std::size_t i = first_fresh; i < n && !touches_fresh; ++i) touches_fresh = item[i] != kIgnored;
        if (!touches_fresh) continue;

        avoid.clear();
        penalize.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (item[i] == kAvoided) avoid.push_back(conflicts[i]);
            if (item[i] == kOpen) penalize.push_back(conflicts[i]);
        }
        if (++result.searches > max_searches)
            throw PathGenCapExceeded("robot " + std::to_string(robot) + ": more than " + std::to_string(max_searches) +
                                     " path searches over " + std::to_string(n) + " conflicts");
        auto found = search.find(avoid, penalize, horizon, horizon, deadline);
        if (!found) continue;  // no subset in this range is satisfiable within the horizon
        const int cost = individual_cost(*found, search.goal());

        auto open_hits = [&](const std::vector<std::size_t>& viol) {
            return std::count_if(viol.begin(), viol.end(), [&](std::size_t i) { return item[i] == kOpen; });
        };
        auto avoids = [&](const std::vector<std::size_t>& viol) {
            return std::none_of(viol.begin(), viol.end(), [&](std::size_t i) { return item[i] == kAvoided; });
        };

        // Prefer a path already in the pool when it is as cheap and no more conflicted.
        std::vector<std::size_t> found_viol = violated(*found, conflicts);
        const Known* chosen = nullptr;
        auto best_hits = open_hits(found_viol);
        for (const Known& k : known) {
            if (k.cost > cost || !avoids(k.violations)) continue;
            auto hits = open_hits(k.violations);
            if (hits <= best_hits) {
                best_hits = hits;
                chosen = &k;
            }
        }
        if (chosen == nullptr) {
            Path trimmed = trim_goal_stays(*found);
            known.push_back({trimmed, cost, std::move(found_viol)});
            result.paths.push_back(std::move(trimmed));
            chosen = &known.back();
        }

        std::vector<std::size_t> branch;
        for (std::size_t i : chosen->violations)
            if (item[i] == kOpen) branch.push_back(i);
        for (std::size_t j = 0; j < branch.size(); ++j) {
            std::vector<std::uint8_t> child = item;
            for (std::size_t l = 0; l < j; ++l) child[branch[l]] = kIgnored;
            child[branch[j]] = kAvoided;
            work.push_back(std::move(child));
        }
    }
    return result;
}

}  // namespace mrpp
