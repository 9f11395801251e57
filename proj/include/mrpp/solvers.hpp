#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mrpp/instance.hpp"
#include "mrpp/mdd.hpp"
#include "mrpp/pathgen.hpp"
#include "mrpp/sat_solver.hpp"

namespace mrpp {

struct SolveLimits {
    double timeout_s = 30.0;
    int max_extra_cost = 64;  // SoC cap = sum of shortest + this
    std::size_t max_clauses = 20'000'000;
    std::size_t max_cbs_nodes = 500'000;
    std::size_t max_path_searches = 2'000;  // per new_paths call
    /// Sparse-SMT-CBS: past max_path_searches, give the robot its full diagram
    /// instead of aborting with resource_cap.
    bool full_diagram_fallback = true;
};

enum class SolveStatus { solved, timeout, resource_cap };
std::string_view to_string(SolveStatus s);

struct SolveStats {
    int soc = 0;
    int makespan = 0;
    int iterations = 0;  // bounds tried
    int sat_calls = 0;
    int variables = 0;   // of the last formula handed to the SAT backend
    std::size_t clauses = 0;
    std::size_t collisions = 0;  // collisions refined
    std::size_t paths_generated = 0;
    int full_diagram_robots = 0;  // Sparse-SMT-CBS robots switched to their full diagram
    std::size_t cbs_nodes = 0;
    double wall_time_s = 0.0;
    int final_soc_bound = 0;
    int final_horizon = 0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::resource_cap;
    std::optional<Solution> solution;
    SolveStats stats;
    std::string note;
};

/// Snapshot handed to observers right after new_paths extended a robot's pool.
struct NewPathsEvent {
    RobotId robot;
    std::span<const Conflict> conflicts;
    std::span<const Path> pool;
    int horizon;
    const PathSearch& search;
};

struct SolveHooks {
    SatFactory sat = cdcl_factory();
    std::function<void(const NewPathsEvent&)> on_new_paths;
    /// Called with the diagrams each time a formula is (re)built.
    std::function<void(std::span<const Mdd>, int soc_bound, int horizon)> on_encode;
};

SolveOutcome solve_sparse_smt_cbs(const Instance& instance, const SolveLimits& limits, const SolveHooks& hooks = {});
SolveOutcome solve_smt_cbs(const Instance& instance, const SolveLimits& limits, const SolveHooks& hooks = {});
SolveOutcome solve_mdd_sat(const Instance& instance, const SolveLimits& limits, const SolveHooks& hooks = {});
SolveOutcome solve_cbs(const Instance& instance, const SolveLimits& limits, const SolveHooks& hooks = {});

enum class SolverKind { cbs, mddsat, smtcbs, sparse };
/// Names as used on the command line: cbs, mddsat, smtcbs, sparse.
std::optional<SolverKind> parse_solver_kind(std::string_view name);
std::string_view to_string(SolverKind kind);
SolveOutcome solve(SolverKind kind, const Instance& instance, const SolveLimits& limits, const SolveHooks& hooks = {});

/// `robot <i>: v0 v1 ... vm`, one line per robot.
void write_solution(std::ostream& os, const Solution& solution);

}  // namespace mrpp
