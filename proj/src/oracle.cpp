#include "mrpp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

namespace mrpp {

namespace {

std::vector<int> distances_from(const Graph& g, Vertex source) {
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), std::numeric_limits<int>::max());
    std::deque<Vertex> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(u))
            if (dist[static_cast<std::size_t>(w)] == std::numeric_limits<int>::max()) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

struct JointState {
    std::vector<Vertex> pos;
    std::uint32_t parked = 0;
};

class Codec {
public:
    Codec(int vertices, int robots) : n_(static_cast<std::uint64_t>(vertices)), k_(robots) {
        long double capacity = 1.0L;
        for (int i = 0; i < robots; ++i) capacity *= static_cast<long double>(vertices);
        capacity *= static_cast<long double>(std::uint64_t{1} << robots);
        if (robots > 30 || capacity > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
            throw std::invalid_argument("oracle: joint state space too large to index");
    }

    std::uint64_t encode(const JointState& s) const {
        std::uint64_t key = 0;
        for (int i = k_ - 1; i >= 0; --i) key = key * n_ + static_cast<std::uint64_t>(s.pos[static_cast<std::size_t>(i)]);
        return (key << k_) | s.parked;
    }

    JointState decode(std::uint64_t key) const {
        JointState s;
        s.parked = static_cast<std::uint32_t>(key & ((std::uint64_t{1} << k_) - 1));
        key >>= k_;
        s.pos.resize(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) {
            s.pos[static_cast<std::size_t>(i)] = static_cast<Vertex>(key % n_);
            key /= n_;
        }
        return s;
    }

private:
    std::uint64_t n_;
    int k_;
};

struct Parent {
    std::uint64_t key;
    bool time_step;
};

}  // namespace

std::optional<Solution> joint_bfs_oracle(const Instance& instance, int soc_limit, std::size_t max_states) {
    const Graph& g = instance.graph();
    const int k = instance.robot_count();
    if (k == 0) return Solution{};

    std::vector<std::vector<int>> to_goal;
    for (RobotId r = 0; r < k; ++r) to_goal.push_back(distances_from(g, instance.goal(r)));

    Codec codec(g.vertex_count(), k);
    const std::uint32_t all_parked = (k == 32) ? 0xffffffffu : ((1u << k) - 1u);

    auto heuristic = [&](const JointState& s) {
        long h = 0;
        for (int r = 0; r < k; ++r) {
            if (s.parked & (1u << r)) continue;
            int d = to_goal[static_cast<std::size_t>(r)][static_cast<std::size_t>(s.pos[static_cast<std::size_t>(r)])];
            if (d == std::numeric_limits<int>::max()) return std::numeric_limits<long>::max();
            h += d;
        }
        return h;
    };

    JointState initial;
    initial.pos.assign(instance.starts().begin(), instance.starts().end());
    const std::uint64_t initial_key = codec.encode(initial);

    using Entry = std::pair<long, std::pair<long, std::uint64_t>>;  // (f, (g, key))
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::unordered_map<std::uint64_t, long> best;
    std::unordered_map<std::uint64_t, Parent> parent;

    long h0 = heuristic(initial);
    if (h0 == std::numeric_limits<long>::max() || h0 > soc_limit) return std::nullopt;
    best[initial_key] = 0;
    open.push({h0, {0, initial_key}});

    std::optional<std::uint64_t> terminal;
    std::vector<Vertex> next;
    while (!open.empty()) {
        auto [f, gk] = open.top();
        auto [cost, key] = gk;
        open.pop();
        if (best[key] < cost) continue;
        JointState s = codec.decode(key);
        if (s.parked == all_parked) {
            terminal = key;
            break;
        }

        auto relax = [&](const JointState& succ, long step_cost, bool time_step) {
            long h = heuristic(succ);
            if (h == std::numeric_limits<long>::max()) return;
            long ng = cost + step_cost;
            if (ng + h > soc_limit) return;
            std::uint64_t nk = codec.encode(succ);
            auto it = best.find(nk);
            if (it != best.end() && it->second <= ng) return;
            if (best.size() >= max_states) throw OracleCapExceeded("oracle: state cap exceeded");
            best[nk] = ng;
            parent[nk] = {key, time_step};
            open.push({ng + h, {ng, nk}});
        };

        // Parking is free: a robot at its goal commits to staying there.
        for (int r = 0; r < k; ++r) {
            if ((s.parked & (1u << r)) == 0 && s.pos[static_cast<std::size_t>(r)] == instance.goal(r)) {
                JointState succ = s;
                succ.parked |= 1u << r;
                relax(succ, 0, false);
            }
        }

        const long moving = k - std::popcount(s.parked);
        next.assign(static_cast<std::size_t>(k), kNoVertex);
        std::function<void(int)> assign = [&](int r) {
            if (r == k) {
                JointState succ{next, s.parked};
                if (succ.pos != s.pos) relax(succ, moving, true);
                return;
            }
            Vertex here = s.pos[static_cast<std::size_t>(r)];
            auto try_target = [&](Vertex target) {
                for (int q = 0; q < r; ++q) {
                    Vertex qn = next[static_cast<std::size_t>(q)];
                    if (qn == target) return;
                    if (target != here && qn == here && s.pos[static_cast<std::size_t>(q)] == target) return;
                }
                next[static_cast<std::size_t>(r)] = target;
                assign(r + 1);
            };
            try_target(here);
            if ((s.parked & (1u << r)) == 0)
                for (Vertex w : g.neighbors(here)) try_target(w);
        };
        assign(0);
    }

    if (!terminal) return std::nullopt;

    std::vector<std::vector<Vertex>> timeline;
    std::uint64_t key = *terminal;
    timeline.push_back(codec.decode(key).pos);
    while (key != initial_key) {
        Parent p = parent.at(key);
        if (p.time_step) timeline.push_back(codec.decode(p.key).pos);
        key = p.key;
    }
    std::reverse(timeline.begin(), timeline.end());

    Solution sol;
    sol.paths.resize(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        Path p;
        for (const auto& config : timeline) p.push_back(config[static_cast<std::size_t>(r)]);
        sol.paths[static_cast<std::size_t>(r)] = trim_goal_stays(std::move(p));
    }
    return sol;
}

}  // namespace mrpp
