#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrpp/cnf.hpp"
#include "mrpp/deadline.hpp"

namespace mrpp {

enum class SatResult { sat, unsat, unknown };

/// Backend failure (crashed or misbehaving external solver); distinct from UNSAT.
class SatBackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SatStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t solve_calls = 0;
};

/// Incremental SAT session over a monotonically growing clause set.
/// Variables must be registered via reserve_vars before they appear in a clause.
class SatSolver {
public:
    virtual ~SatSolver() = default;

    virtual void reserve_vars(int count) = 0;
    virtual int num_vars() const = 0;
    /// An empty clause is accepted and makes every later solve() return unsat.
    virtual void add_clause(std::span<const Lit> clause) = 0;
    /// unknown is returned only when the deadline expires.
    virtual SatResult solve(const Deadline& deadline = Deadline::never()) = 0;
    /// Total assignment from the last sat answer.
    virtual const Model& model() const = 0;
    virtual SatStats stats() const = 0;
    virtual std::size_t clause_count() const = 0;

    void add_formula(const CnfFormula& formula);
};

using SatFactory = std::function<std::unique_ptr<SatSolver>()>;

/// Conflict-driven clause learning: two watched literals, first-UIP learning
/// with clause minimization, VSIDS-style activities, geometric restarts and
/// phase saving. Learned clauses are kept for the lifetime of the session.
class CdclSolver final : public SatSolver {
public:
    explicit CdclSolver(std::uint64_t seed = 0);

    void reserve_vars(int count) override;
    int num_vars() const override { return static_cast<int>(assigns_.size()); }
    void add_clause(std::span<const Lit> clause) override;
    SatResult solve(const Deadline& deadline = Deadline::never()) override;
    const Model& model() const override { return model_; }
    SatStats stats() const override { return stats_; }
    std::size_t clause_count() const override { return original_clauses_; }
    std::size_t learnt_count() const { return learnt_clauses_; }

private:
    // Internal literal: 2 * var + sign, var 0-based; sign 1 means negated.
    using ILit = int;
    static constexpr std::int8_t kFalse = 0, kTrue = 1, kUndef = 2;

    struct Watch {
        int clause;
        ILit blocker;
    };

    static ILit to_internal(Lit l) { return 2 * (var_of(l) - 1) + (l < 0 ? 1 : 0); }
    std::int8_t value(ILit l) const {
        std::int8_t a = assigns_[static_cast<std::size_t>(l >> 1)];
        return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ (l & 1));
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void enqueue(ILit l, int reason);
    int propagate();
    void analyze(int conflict, std::vector<ILit>& learnt, int& backtrack_level);
    bool redundant(ILit l) const;
    void cancel_until(int level);
    void attach(int clause);
    ILit pick_branch();
    SatResult search(std::uint64_t conflict_budget, const Deadline& deadline);

    void bump(int var);
    void heap_insert(int var);
    void heap_up(std::size_t pos);
    void heap_down(std::size_t pos);
    int heap_pop();

    std::vector<std::vector<ILit>> clauses_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<std::int8_t> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<std::uint8_t> polarity_;
    std::vector<double> activity_;
    std::vector<char> seen_;
    std::vector<ILit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<int> heap_;
    std::vector<int> heap_pos_;  // -1 when not in heap

    double var_inc_ = 1.0;
    bool ok_ = true;
    std::size_t original_clauses_ = 0;
    std::size_t learnt_clauses_ = 0;
    std::mt19937_64 rng_;
    SatStats stats_;
    Model model_;
};

/// Runs an external DIMACS solver per solve() call: writes the accumulated
/// clauses to a temporary file, invokes `command <file>` through /bin/sh and
/// reads the `s`/`v` lines (exit codes 10/20 are accepted as a fallback).
/// Each call starts from scratch.
class ExternalSatSolver final : public SatSolver {
public:
    explicit ExternalSatSolver(std::string command);

    void reserve_vars(int count) override;
    int num_vars() const override { return formula_.num_vars; }
    void add_clause(std::span<const Lit> clause) override;
    SatResult solve(const Deadline& deadline = Deadline::never()) override;
    const Model& model() const override { return model_; }
    SatStats stats() const override { return stats_; }
    std::size_t clause_count() const override { return formula_.clauses.size(); }

private:
    std::string command_;
    CnfFormula formula_;
    SatStats stats_;
    Model model_;
};

/// Status and model parsed from a solver's standard output.
struct ExternalAnswer {
    SatResult result = SatResult::unknown;
    std::vector<Lit> values;
};
ExternalAnswer parse_solver_output(std::string_view output, int exit_code);

SatFactory cdcl_factory(std::uint64_t seed = 0);
SatFactory external_factory(std::string command);

}  // namespace mrpp
