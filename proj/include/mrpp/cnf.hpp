#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrpp/graph.hpp"

namespace mrpp {

/// DIMACS-style literal: +v or -v for variable id v >= 1.
using Lit = int;

inline int var_of(Lit lit) { return lit < 0 ? -lit : lit; }

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<Lit>> clauses;

    void add_clause(std::vector<Lit> clause);
    void add_clause(std::initializer_list<Lit> clause) { add_clause(std::vector<Lit>(clause)); }
    /// Appends the clauses of `other`; variable ids are shared, not renumbered.
    void append(const CnfFormula& other);
    std::size_t clause_count() const { return clauses.size(); }
};

/// Truth assignment indexed by variable id (index 0 unused).
class Model {
public:
    Model() = default;
    explicit Model(std::vector<bool> values) : values_(std::move(values)) {}

    int num_vars() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
    bool value(int var) const { return var > 0 && static_cast<std::size_t>(var) < values_.size() && values_[static_cast<std::size_t>(var)]; }
    bool satisfies(Lit lit) const { return lit > 0 ? value(lit) : !value(-lit); }
    bool satisfies(std::span<const Lit> clause) const;
    bool satisfies(const CnfFormula& formula) const;

private:
    std::vector<bool> values_;
};

/// `p cnf <vars> <clauses>` header, one zero-terminated clause per line.
void write_dimacs(std::ostream& os, const CnfFormula& formula);
CnfFormula parse_dimacs(std::string_view text);

/// Bijection between planning variables and dense SAT variable ids:
/// X(robot, v, t) for diagram nodes, E(robot, u, v, t) for diagram edges,
/// L(robot, t) for late indicators, plus anonymous auxiliary counter ids.
class VarMap {
public:
    enum class Kind : std::uint8_t { node, edge, late, aux };
    struct Entry {
        Kind kind;
        RobotId robot;
        Vertex u;
        Vertex v;
        int time;
    };

    /// Returns the id, allocating a new one if the variable is not known yet.
    int add_node(RobotId r, Vertex v, int t);
    int add_edge(RobotId r, Vertex u, Vertex v, int t);
    int add_late(RobotId r, int t);
    int add_aux();

    /// Returns 0 when the variable has not been allocated.
    int node(RobotId r, Vertex v, int t) const;
    int edge(RobotId r, Vertex u, Vertex v, int t) const;
    int late(RobotId r, int t) const;

    int size() const { return static_cast<int>(entries_.size()); }
    const Entry& entry(int id) const { return entries_[static_cast<std::size_t>(id) - 1]; }
    std::size_t count(Kind kind) const;

    /// Text sidecar: `X r v t id`, `E r u v t id`, `L r t id` lines in id order.
    void write_sidecar(std::ostream& os) const;

private:
    int allocate(Entry e);

    std::unordered_map<std::uint64_t, int> nodes_;
    std::unordered_map<std::uint64_t, int> edges_;
    std::unordered_map<std::uint64_t, int> late_;
    std::vector<Entry> entries_;
};

}  // namespace mrpp
