#include <algorithm>
#include <memory>
#include <queue>
#include <tuple>

#include "solver_common.hpp"

namespace mrpp {

namespace {

// Constraint-tree node. Constraints are stored as a parent chain so children
// share their ancestors' records; paths are shared between siblings too.
struct Node {
    std::shared_ptr<const Node> parent;
    Conflict constraint;  // the one added on top of the parent (unused at the root)
    std::vector<std::shared_ptr<const Path>> paths;
    int soc = 0;
    std::size_t collisions = 0;
};

std::vector<Conflict> constraints_of(const Node& node, RobotId r) {
    std::vector<Conflict> out;
    for (const Node* n = &node; n->parent; n = n->parent.get())
        if (n->constraint.robot == r) out.push_back(n->constraint);
    return out;
}

Solution to_solution(const Node& node) {
    Solution s;
    for (const auto& p : node.paths) s.paths.push_back(*p);
    return s;
}

}  // namespace

SolveOutcome solve_cbs(const Instance& inst, const SolveLimits& limits, const SolveHooks&) {
    Stopwatch clock;
    const Deadline deadline = Deadline::after(limits.timeout_s);
    detail::Bounds lb;
    if (!detail::lower_bounds(inst, lb)) return detail::unreachable_outcome(clock);
    const int k = inst.robot_count();
    const int soc_cap = lb.sum + limits.max_extra_cost;
    const int n = inst.graph().vertex_count();

    std::vector<PathSearch> searches;
    for (RobotId r = 0; r < k; ++r) searches.emplace_back(inst.graph(), inst.start(r), inst.goal(r));

    SolveOutcome out;
    out.stats.iterations = 1;
    auto root = std::make_shared<Node>();
    for (RobotId r = 0; r < k; ++r) {
        const int sp = lb.shortest[static_cast<std::size_t>(r)];
        root->paths.push_back(std::make_shared<const Path>(*searches[static_cast<std::size_t>(r)].find({}, {}, sp, sp)));
        root->soc += sp;
    }
    root->collisions = validate_solution(inst, to_solution(*root)).size();

    // Best-first on SoC, then fewer collisions, then insertion order.
    using Key = std::tuple<int, std::size_t, std::size_t>;
    using Entry = std::pair<Key, std::shared_ptr<const Node>>;
    auto cmp = [](const Entry& a, const Entry& b) { return a.first > b.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);
    std::size_t inserted = 0;
    open.emplace(Key{root->soc, root->collisions, inserted++}, root);
    bool pruned = false;

    try {
        while (!open.empty()) {
            if (deadline.expired()) throw DeadlineExceeded();
            auto node = open.top().second;
            open.pop();
            ++out.stats.cbs_nodes;
            out.stats.final_soc_bound = node->soc;

            Solution current = to_solution(*node);
            const auto collisions = validate_solution(inst, current);
            if (collisions.empty()) return detail::solved_outcome(std::move(out), inst, std::move(current), clock);
            if (out.stats.cbs_nodes >= limits.max_cbs_nodes) {
                out.status = SolveStatus::resource_cap;
                out.note = "constraint-tree node cap reached";
                return detail::finish(std::move(out), clock);
            }
            ++out.stats.collisions;

            const ConflictPair split = ConflictPair::from_collision(collisions.front());
            for (const Conflict& c : {split.first, split.second}) {
                auto child = std::make_shared<Node>();
                child->parent = node;
                child->constraint = c;
                child->paths = node->paths;
                const auto avoid = constraints_of(*child, c.robot);
                int latest = 0;
                for (const Conflict& a : avoid) latest = std::max(latest, a.time);
                // Past the last constraint nothing blocks, so an optimal path
                // never needs more than |V| further steps.
                const int horizon = latest + n + 1;
                const int others = node->soc - individual_cost(*node->paths[static_cast<std::size_t>(c.robot)],
                                                               inst.goal(c.robot));
                const int cap = std::min(horizon, soc_cap - others);
                auto path = searches[static_cast<std::size_t>(c.robot)].find(avoid, {}, horizon, cap, deadline);
                if (!path) {
                    pruned |= cap < horizon;
                    continue;
                }
                child->paths[static_cast<std::size_t>(c.robot)] = std::make_shared<const Path>(std::move(*path));
                child->soc = others + individual_cost(*child->paths[static_cast<std::size_t>(c.robot)], inst.goal(c.robot));
                child->collisions = validate_solution(inst, to_solution(*child)).size();
                open.emplace(Key{child->soc, child->collisions, inserted++}, std::move(child));
            }
        }
        out.status = SolveStatus::resource_cap;
        out.note = pruned ? "sum-of-costs cap reached" : "constraint tree exhausted: no solution";
    } catch (const DeadlineExceeded&) {
        out.status = SolveStatus::timeout;
    }
    return detail::finish(std::move(out), clock);
}

}  // namespace mrpp
