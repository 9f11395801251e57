#include "mrpp/cnf.hpp"

#include <cstdio>
#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mrpp {

void CnfFormula::add_clause(std::vector<Lit> clause) {
    for (Lit l : clause) {
        if (l == 0) throw std::invalid_argument("literal 0 in clause");
        num_vars = std::max(num_vars, var_of(l));
    }
    clauses.push_back(std::move(clause));
}

void CnfFormula::append(const CnfFormula& other) {
    num_vars = std::max(num_vars, other.num_vars);
    clauses.insert(clauses.end(), other.clauses.begin(), other.clauses.end());
}

bool Model::satisfies(std::span<const Lit> clause) const {
    return std::any_of(clause.begin(), clause.end(), [this](Lit l) { return satisfies(l); });
}

bool Model::satisfies(const CnfFormula& formula) const {
    return std::all_of(formula.clauses.begin(), formula.clauses.end(),
                       [this](const std::vector<Lit>& c) { return satisfies(std::span<const Lit>(c)); });
}

void write_dimacs(std::ostream& os, const CnfFormula& formula) {
    os << "p cnf " << formula.num_vars << ' ' << formula.clauses.size() << '\n';
    for (const auto& clause : formula.clauses) {
        for (Lit l : clause) os << l << ' ';
        os << "0\n";
    }
}

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula formula;
    bool header = false;
    long declared_vars = 0, declared_clauses = 0;
    std::vector<Lit> current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        line.remove_prefix(first);
        if (line[0] == 'c' || line[0] == '%') continue;
        if (line[0] == 'p') {
            if (header) throw ParseError("dimacs: duplicate header");
            char kind[8] = {};
            if (std::sscanf(std::string(line).c_str(), "p %7s %ld %ld", kind, &declared_vars, &declared_clauses) != 3 ||
                std::string_view(kind) != "cnf" || declared_vars < 0 || declared_clauses < 0)
                throw ParseError("dimacs: malformed header '" + std::string(line) + "'");
            header = true;
            continue;
        }
        if (!header) throw ParseError("dimacs: clause before header");
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            auto j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
            Lit lit = 0;
            auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, lit);
            if (ec != std::errc{} || ptr != line.data() + j)
                throw ParseError("dimacs: bad literal '" + std::string(line.substr(i, j - i)) + "'");
            if (lit == 0) {
                formula.clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (var_of(lit) > declared_vars) throw ParseError("dimacs: literal exceeds declared variable count");
                current.push_back(lit);
            }
            i = j;
        }
    }
    if (!header) throw ParseError("dimacs: missing header");
    if (!current.empty()) formula.clauses.push_back(std::move(current));
    if (static_cast<long>(formula.clauses.size()) != declared_clauses)
        throw ParseError("dimacs: header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(formula.clauses.size()));
    formula.num_vars = static_cast<int>(declared_vars);
    return formula;
}

namespace {

// Packed keys: robot < 2^12, vertex < 2^20, time < 2^12.
std::uint64_t pack_node(RobotId r, Vertex v, int t) {
    return (static_cast<std::uint64_t>(r) << 40) | (static_cast<std::uint64_t>(v) << 12) | static_cast<std::uint64_t>(t);
}

std::uint64_t pack_edge(RobotId r, Vertex u, Vertex v, int t) {
    return (static_cast<std::uint64_t>(r) << 52) | (static_cast<std::uint64_t>(u) << 32) |
           (static_cast<std::uint64_t>(v) << 12) | static_cast<std::uint64_t>(t);
}

void check_range(RobotId r, Vertex u, Vertex v, int t) {
    if (r < 0 || r >= (1 << 12) || u < 0 || u >= (1 << 20) || v < 0 || v >= (1 << 20) || t < 0 || t >= (1 << 12))
        throw std::out_of_range("VarMap key out of supported range");
}

}  // namespace

int VarMap::allocate(Entry e) {
    entries_.push_back(e);
    return static_cast<int>(entries_.size());
}

int VarMap::add_node(RobotId r, Vertex v, int t) {
    check_range(r, v, v, t);
    auto [it, inserted] = nodes_.try_emplace(pack_node(r, v, t), 0);
    if (inserted) it->second = allocate({Kind::node, r, v, v, t});
    return it->second;
}

int VarMap::add_edge(RobotId r, Vertex u, Vertex v, int t) {
    check_range(r, u, v, t);
    auto [it, inserted] = edges_.try_emplace(pack_edge(r, u, v, t), 0);
    if (inserted) it->second = allocate({Kind::edge, r, u, v, t});
    return it->second;
}

int VarMap::add_late(RobotId r, int t) {
    check_range(r, 0, 0, t);
    auto [it, inserted] = late_.try_emplace(pack_node(r, 0, t), 0);
    if (inserted) it->second = allocate({Kind::late, r, kNoVertex, kNoVertex, t});
    return it->second;
}

int VarMap::add_aux() { return allocate({Kind::aux, -1, kNoVertex, kNoVertex, -1}); }

int VarMap::node(RobotId r, Vertex v, int t) const {
    if (r < 0 || v < 0 || t < 0) return 0;
    auto it = nodes_.find(pack_node(r, v, t));
    return it == nodes_.end() ? 0 : it->second;
}

int VarMap::edge(RobotId r, Vertex u, Vertex v, int t) const {
    if (r < 0 || u < 0 || v < 0 || t < 0) return 0;
    auto it = edges_.find(pack_edge(r, u, v, t));
    return it == edges_.end() ? 0 : it->second;
}

int VarMap::late(RobotId r, int t) const {
    if (r < 0 || t < 0) return 0;
    auto it = late_.find(pack_node(r, 0, t));
    return it == late_.end() ? 0 : it->second;
}

std::size_t VarMap::count(Kind kind) const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [kind](const Entry& e) { return e.kind == kind; }));
}

void VarMap::write_sidecar(std::ostream& os) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        const auto id = i + 1;
        switch (e.kind) {
            case Kind::node: os << "X " << e.robot << ' ' << e.u << ' ' << e.time << ' ' << id << '\n'; break;
            case Kind::edge: os << "E " << e.robot << ' ' << e.u << ' ' << e.v << ' ' << e.time << ' ' << id << '\n'; break;
            case Kind::late: os << "L " << e.robot << ' ' << e.time << ' ' << id << '\n'; break;
            case Kind::aux: break;
        }
    }
}

}  // namespace mrpp
