#include <algorithm>
#include <memory>
#include <ostream>
#include <set>

#include "mrpp/encoder.hpp"
#include "solver_common.hpp"

namespace mrpp {

using detail::Bounds;

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::solved: return "solved";
        case SolveStatus::timeout: return "timeout";
        case SolveStatus::resource_cap: return "resource_cap";
    }
    return "unknown";
}

namespace {

class ClauseCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A SAT session plus the bookkeeping every lazy solver needs.
struct Session {
    std::unique_ptr<SatSolver> sat;
    VarMap vars;
    std::size_t clauses = 0;

    void start(const SatFactory& factory, const CnfFormula& formula, VarMap v, std::size_t cap) {
        if (formula.clause_count() > cap)
            throw ClauseCapExceeded("formula has " + std::to_string(formula.clause_count()) + " clauses");
        vars = std::move(v);
        sat = factory();
        sat->reserve_vars(vars.size());
        sat->add_formula(formula);
        clauses = formula.clause_count();
    }
    void add(const std::vector<Lit>& clause) {
        sat->add_clause(clause);
        ++clauses;
    }
};

std::vector<Mdd> full_mdds(const Instance& inst, int horizon) {
    std::vector<Mdd> out;
    for (RobotId r = 0; r < inst.robot_count(); ++r)
        out.push_back(build_mdd(inst.graph(), r, inst.start(r), inst.goal(r), horizon));
    return out;
}

// Shared skeleton of the bound-increment loop: `attempt` returns true when it
// has stored a solution in `out`, false when the current bound is refuted.
template <typename Attempt>
SolveOutcome bound_loop(const Instance& inst, const SolveLimits& limits, const Stopwatch& clock, const Bounds& lb,
                        Attempt&& attempt) {
    SolveOutcome out;
    try {
        for (int extra = 0; extra <= limits.max_extra_cost; ++extra) {
            ++out.stats.iterations;
            out.stats.final_soc_bound = lb.sum + extra;
            out.stats.final_horizon = lb.max + extra;
            if (attempt(extra, out)) {
                Solution sol = std::move(*out.solution);
                return detail::solved_outcome(std::move(out), inst, std::move(sol), clock);
            }
        }
        out.status = SolveStatus::resource_cap;
        out.note = "sum-of-costs cap reached";
    } catch (const DeadlineExceeded&) {
        out.status = SolveStatus::timeout;
    } catch (const PathGenCapExceeded& e) {
        out.status = SolveStatus::resource_cap;
        out.note = e.what();
    } catch (const ClauseCapExceeded& e) {
        out.status = SolveStatus::resource_cap;
        out.note = e.what();
    }
    return detail::finish(std::move(out), clock);
}

SatResult run(Session& s, SolveOutcome& out, const Deadline& deadline) {
    if (deadline.expired()) throw DeadlineExceeded();
    ++out.stats.sat_calls;
    out.stats.variables = s.vars.size();
    out.stats.clauses = s.clauses;
    const SatResult r = s.sat->solve(deadline);
    if (r == SatResult::unknown) throw DeadlineExceeded();
    return r;
}

}  // namespace

SolveOutcome solve_sparse_smt_cbs(const Instance& inst, const SolveLimits& limits, const SolveHooks& hooks) {
    Stopwatch clock;
    const Deadline deadline = Deadline::after(limits.timeout_s);
    Bounds lb;
    if (!detail::lower_bounds(inst, lb)) return detail::unreachable_outcome(clock);
    const int k = inst.robot_count();

    std::vector<PathSearch> searches;
    for (RobotId r = 0; r < k; ++r) searches.emplace_back(inst.graph(), inst.start(r), inst.goal(r));
    PathPool pool(k);
    ConflictSet conflicts(k);
    std::vector<ConflictPair> pairs;
    std::set<ConflictPair> seen_pairs;
    std::vector<bool> saturated(static_cast<std::size_t>(k), false);

    for (RobotId r = 0; r < k; ++r) {
        const int sp = lb.shortest[static_cast<std::size_t>(r)];
        pool.add(r, *searches[static_cast<std::size_t>(r)].find({}, {}, sp, sp));
    }

    return bound_loop(inst, limits, clock, lb, [&](int extra, SolveOutcome& out) {
        const int mu = lb.max + extra;
        const CostBound bound{extra, lb.shortest};

        auto extend = [&](RobotId r, std::size_t first_fresh) {
            if (saturated[static_cast<std::size_t>(r)]) return false;
            const auto& search = searches[static_cast<std::size_t>(r)];
            NewPathsResult found;
            try {
                found = new_paths(search, pool.of(r), r, conflicts.of(r), first_fresh, mu, limits.max_path_searches,
                                  deadline);
            } catch (const PathGenCapExceeded&) {
                if (!limits.full_diagram_fallback) throw;
                // Too many conflict subsets to cover: the robot gets its full
                // diagram from now on, which holds every path of cost <= mu.
                saturated[static_cast<std::size_t>(r)] = true;
                ++out.stats.full_diagram_robots;
                return true;
            }
            bool grew = false;
            for (Path& p : found.paths) grew |= pool.add(r, std::move(p));
            if (hooks.on_new_paths) hooks.on_new_paths({r, conflicts.of(r), pool.of(r), mu, search});
            return grew;
        };
        // A larger horizon may admit cheaper detours for old conflict subsets.
        if (extra > 0)
            for (RobotId r = 0; r < k; ++r)
                if (conflicts.size(r) > 0) extend(r, 0);

        Session session;
        std::vector<Mdd> diagrams;
        bool rebuild = true;
        for (;;) {
            if (rebuild) {
                diagrams.clear();
                for (RobotId r = 0; r < k; ++r)
                    diagrams.push_back(saturated[static_cast<std::size_t>(r)]
                                           ? build_mdd(inst.graph(), r, inst.start(r), inst.goal(r), mu)
                                           : build_smdd(r, pool.of(r), mu).diagram());
                VarMap vars;
                CnfFormula f = encode_incomplete(diagrams, pairs, vars, bound);
                session.start(hooks.sat, f, std::move(vars), limits.max_clauses);
                if (hooks.on_encode) hooks.on_encode(diagrams, lb.sum + extra, mu);
                rebuild = false;
            }
            if (run(session, out, deadline) == SatResult::unsat) return false;

            Solution sol = extract_solution(session.sat->model(), session.vars, diagrams);
            const auto collisions = validate_solution(inst, sol);
            if (collisions.empty()) {
                out.solution = std::move(sol);
                out.stats.paths_generated = pool.total();
                return true;
            }
            std::vector<std::size_t> fresh(static_cast<std::size_t>(k));
            for (RobotId r = 0; r < k; ++r) fresh[static_cast<std::size_t>(r)] = conflicts.size(r);
            for (const Collision& c : collisions) {
                const ConflictPair pair = ConflictPair::from_collision(c);
                if (!seen_pairs.insert(pair).second) throw std::logic_error("collision repeated despite its clause");
                pairs.push_back(pair);
                conflicts.add(pair.first);
                conflicts.add(pair.second);
                ++out.stats.collisions;
                if (auto clause = conflict_clause(pair, session.vars)) session.add(*clause);
            }
            if (session.clauses > limits.max_clauses) throw ClauseCapExceeded("clause cap exceeded during refinement");
            for (RobotId r = 0; r < k; ++r)
                if (conflicts.size(r) > fresh[static_cast<std::size_t>(r)])
                    rebuild |= extend(r, fresh[static_cast<std::size_t>(r)]);
            out.stats.paths_generated = pool.total();
        }
    });
}

SolveOutcome solve_smt_cbs(const Instance& inst, const SolveLimits& limits, const SolveHooks& hooks) {
    Stopwatch clock;
    const Deadline deadline = Deadline::after(limits.timeout_s);
    Bounds lb;
    if (!detail::lower_bounds(inst, lb)) return detail::unreachable_outcome(clock);
    std::vector<ConflictPair> pairs;
    std::set<ConflictPair> seen_pairs;

    return bound_loop(inst, limits, clock, lb, [&](int extra, SolveOutcome& out) {
        const int mu = lb.max + extra;
        const std::vector<Mdd> diagrams = full_mdds(inst, mu);
        Session session;
        {
            VarMap vars;
            CnfFormula f = encode_incomplete(diagrams, pairs, vars, CostBound{extra, lb.shortest});
            session.start(hooks.sat, f, std::move(vars), limits.max_clauses);
        }
        if (hooks.on_encode) hooks.on_encode(diagrams, lb.sum + extra, mu);
        for (;;) {
            if (run(session, out, deadline) == SatResult::unsat) return false;
            Solution sol = extract_solution(session.sat->model(), session.vars, diagrams);
            const auto collisions = validate_solution(inst, sol);
            if (collisions.empty()) {
                out.solution = std::move(sol);
                return true;
            }
            for (const Collision& c : collisions) {
                const ConflictPair pair = ConflictPair::from_collision(c);
                if (!seen_pairs.insert(pair).second) throw std::logic_error("collision repeated despite its clause");
                pairs.push_back(pair);
                ++out.stats.collisions;
                if (auto clause = conflict_clause(pair, session.vars)) session.add(*clause);
            }
            if (session.clauses > limits.max_clauses) throw ClauseCapExceeded("clause cap exceeded during refinement");
        }
    });
}

SolveOutcome solve_mdd_sat(const Instance& inst, const SolveLimits& limits, const SolveHooks& hooks) {
    Stopwatch clock;
    const Deadline deadline = Deadline::after(limits.timeout_s);
    Bounds lb;
    if (!detail::lower_bounds(inst, lb)) return detail::unreachable_outcome(clock);

    return bound_loop(inst, limits, clock, lb, [&](int extra, SolveOutcome& out) {
        const int mu = lb.max + extra;
        const std::vector<Mdd> diagrams = full_mdds(inst, mu);
        Session session;
        {
            VarMap vars;
            CnfFormula f = encode_complete(diagrams, vars, CostBound{extra, lb.shortest});
            session.start(hooks.sat, f, std::move(vars), limits.max_clauses);
        }
        if (hooks.on_encode) hooks.on_encode(diagrams, lb.sum + extra, mu);
        if (run(session, out, deadline) == SatResult::unsat) return false;
        Solution sol = extract_solution(session.sat->model(), session.vars, diagrams);
        if (!validate_solution(inst, sol).empty()) throw std::logic_error("complete model admitted a collision");
        out.solution = std::move(sol);
        return true;
    });
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
    if (name == "cbs") return SolverKind::cbs;
    if (name == "mddsat") return SolverKind::mddsat;
    if (name == "smtcbs") return SolverKind::smtcbs;
    if (name == "sparse") return SolverKind::sparse;
    return std::nullopt;
}

std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::cbs: return "cbs";
        case SolverKind::mddsat: return "mddsat";
        case SolverKind::smtcbs: return "smtcbs";
        case SolverKind::sparse: return "sparse";
    }
    return "unknown";
}

SolveOutcome solve(SolverKind kind, const Instance& instance, const SolveLimits& limits, const SolveHooks& hooks) {
    switch (kind) {
        case SolverKind::cbs: return solve_cbs(instance, limits, hooks);
        case SolverKind::mddsat: return solve_mdd_sat(instance, limits, hooks);
        case SolverKind::smtcbs: return solve_smt_cbs(instance, limits, hooks);
        case SolverKind::sparse: return solve_sparse_smt_cbs(instance, limits, hooks);
    }
    throw std::invalid_argument("unknown solver kind");
}

void write_solution(std::ostream& os, const Solution& solution) {
    for (std::size_t r = 0; r < solution.paths.size(); ++r) {
        os << "robot " << r << ':';
        for (Vertex v : solution.paths[r]) os << ' ' << v;
        os << '\n';
    }
}

}  // namespace mrpp
