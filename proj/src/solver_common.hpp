#pragma once

// Shared plumbing for the solver implementations.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "mrpp/deadline.hpp"
#include "mrpp/mdd.hpp"
#include "mrpp/solvers.hpp"

namespace mrpp::detail {

struct Bounds {
    std::vector<int> shortest;
    int sum = 0;
    int max = 0;
};

/// Per-robot shortest distances; nullopt-like empty result when some goal is unreachable.
inline bool lower_bounds(const Instance& instance, Bounds& out) {
    out.shortest.clear();
    for (RobotId r = 0; r < instance.robot_count(); ++r) {
        const int d = bfs_distances(instance.graph(), instance.start(r))[static_cast<std::size_t>(instance.goal(r))];
        if (d == kUnreachable) return false;
        out.shortest.push_back(d);
    }
    out.sum = std::accumulate(out.shortest.begin(), out.shortest.end(), 0);
    out.max = out.shortest.empty() ? 0 : *std::max_element(out.shortest.begin(), out.shortest.end());
    return true;
}

inline SolveOutcome finish(SolveOutcome out, const Stopwatch& clock) {
    out.stats.wall_time_s = clock.seconds();
    return out;
}

inline SolveOutcome unreachable_outcome(const Stopwatch& clock) {
    SolveOutcome out;
    out.status = SolveStatus::resource_cap;
    out.note = "some goal is unreachable from its start";
    return finish(std::move(out), clock);
}

inline SolveOutcome solved_outcome(SolveOutcome out, const Instance& instance, Solution solution,
                                   const Stopwatch& clock) {
    out.status = SolveStatus::solved;
    out.stats.soc = sum_of_costs(solution, instance);
    out.stats.makespan = makespan(solution, instance);
    out.solution = std::move(solution);
    return finish(std::move(out), clock);
}

}  // namespace mrpp::detail
