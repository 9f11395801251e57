#include "mrpp/encoder.hpp"

#include <algorithm>
#include <string>

namespace mrpp {

namespace {

void pairwise_at_most_one(CnfFormula& f, std::span<const Lit> lits) {
    for (std::size_t a = 0; a < lits.size(); ++a)
        for (std::size_t b = a + 1; b < lits.size(); ++b) f.add_clause({-lits[a], -lits[b]});
}

void check_indexing(std::span<const Mdd> diagrams) {
    for (std::size_t r = 0; r < diagrams.size(); ++r)
        if (diagrams[r].robot() != static_cast<RobotId>(r))
            throw std::invalid_argument("diagram " + std::to_string(r) + " is labelled robot " +
                                        std::to_string(diagrams[r].robot()));
}

}  // namespace

CnfFormula encode_paths(std::span<const Mdd> diagrams, VarMap& vars) {
    check_indexing(diagrams);
    CnfFormula f;
    for (const Mdd& mdd : diagrams) {
        const RobotId r = mdd.robot();
        const int mu = mdd.horizon();
        for (int t = 0; t <= mu; ++t)
            for (Vertex v : mdd.level(t)) vars.add_node(r, v, t);
        for (int t = 0; t < mu; ++t)
            for (const MddEdge& e : mdd.edges(t)) vars.add_edge(r, e.from, e.to, t);

        f.add_clause({vars.node(r, mdd.start(), 0)});
        if (mu > 0) f.add_clause({vars.node(r, mdd.goal(), mu)});

        std::vector<Lit> outgoing;
        for (int t = 0; t < mu; ++t) {
            for (Vertex u : mdd.level(t)) {
                outgoing.clear();
                for (const MddEdge& e : mdd.out_edges(t, u)) outgoing.push_back(vars.edge(r, e.from, e.to, t));
                std::vector<Lit> leave{-vars.node(r, u, t)};
                leave.insert(leave.end(), outgoing.begin(), outgoing.end());
                f.add_clause(std::move(leave));
                pairwise_at_most_one(f, outgoing);
            }
        }
        for (int t = 0; t < mu; ++t)
            for (const MddEdge& e : mdd.edges(t)) {
                Lit edge = vars.edge(r, e.from, e.to, t);
                f.add_clause({-edge, vars.node(r, e.from, t)});
                f.add_clause({-edge, vars.node(r, e.to, t + 1)});
            }
        // Redundant given the clauses above; kept because it strengthens propagation.
        std::vector<Lit> level;
        for (int t = 0; t <= mu; ++t) {
            level.clear();
            for (Vertex v : mdd.level(t)) level.push_back(vars.node(r, v, t));
            pairwise_at_most_one(f, level);
        }
    }
    f.num_vars = vars.size();
    return f;
}

CnfFormula at_most_k(std::span<const Lit> x, int k, VarMap& vars) {
    if (k < 0) throw std::invalid_argument("negative cardinality bound");
    CnfFormula f;
    const std::size_t n = x.size();
    if (n == 0 || static_cast<std::size_t>(k) >= n) return f;
    if (k == 0) {
        for (Lit l : x) f.add_clause({-l});
        f.num_vars = vars.size();
        return f;
    }
    const auto kk = static_cast<std::size_t>(k);
    // s[i][j]: at least j+1 of x[0..i] are true.
    std::vector<std::vector<Lit>> s(n - 1, std::vector<Lit>(kk));
    for (auto& row : s)
        for (Lit& l : row) l = vars.add_aux();

    f.add_clause({-x[0], s[0][0]});
    for (std::size_t j = 1; j < kk; ++j) f.add_clause({-s[0][j]});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        f.add_clause({-x[i], s[i][0]});
        f.add_clause({-s[i - 1][0], s[i][0]});
        for (std::size_t j = 1; j < kk; ++j) {
            f.add_clause({-x[i], -s[i - 1][j - 1], s[i][j]});
            f.add_clause({-s[i - 1][j], s[i][j]});
        }
        f.add_clause({-x[i], -s[i - 1][kk - 1]});
    }
    f.add_clause({-x[n - 1], -s[n - 2][kk - 1]});
    f.num_vars = vars.size();
    return f;
}

CnfFormula encode_cost_bound(std::span<const Mdd> diagrams, VarMap& vars, const CostBound& bound) {
    check_indexing(diagrams);
    if (bound.extra_cost < 0) throw std::invalid_argument("negative extra-cost budget");
    if (bound.shortest.size() != diagrams.size()) throw std::invalid_argument("cost bound / diagram count mismatch");

    CnfFormula f;
    std::vector<Lit> late;
    for (const Mdd& mdd : diagrams) {
        const RobotId r = mdd.robot();
        const int sp = bound.shortest[static_cast<std::size_t>(r)];
        if (sp < 0) throw std::invalid_argument("negative shortest-path length");
        for (int t = sp; t < mdd.horizon(); ++t) {
            const Lit l = vars.add_late(r, t);
            late.push_back(l);
            for (Vertex v : mdd.level(t))
                if (v != mdd.goal()) f.add_clause({-vars.add_node(r, v, t), l});
            if (t > sp) f.add_clause({-l, vars.late(r, t - 1)});
        }
    }
    f.append(at_most_k(late, bound.extra_cost, vars));
    f.num_vars = vars.size();
    return f;
}

CnfFormula encode_complete(std::span<const Mdd> diagrams, VarMap& vars, const CostBound& bound) {
    CnfFormula f = encode_paths(diagrams, vars);
    f.append(encode_cost_bound(diagrams, vars, bound));

    int horizon = 0;
    for (const Mdd& m : diagrams) horizon = std::max(horizon, m.horizon());
    std::vector<Lit> occupants;
    for (int t = 0; t <= horizon; ++t) {
        // Vertex collisions: at most one robot per shared node.
        std::vector<std::pair<Vertex, Lit>> at_level;
        for (const Mdd& m : diagrams) {
            if (t > m.horizon()) continue;
            for (Vertex v : m.level(t)) at_level.emplace_back(v, vars.node(m.robot(), v, t));
        }
        std::stable_sort(at_level.begin(), at_level.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < at_level.size();) {
            std::size_t j = i;
            occupants.clear();
            while (j < at_level.size() && at_level[j].first == at_level[i].first) occupants.push_back(at_level[j++].second);
            pairwise_at_most_one(f, occupants);
            i = j;
        }
        // Edge swaps between every robot pair.
        for (std::size_t a = 0; a < diagrams.size(); ++a) {
            if (t >= diagrams[a].horizon()) continue;
            for (std::size_t b = a + 1; b < diagrams.size(); ++b) {
                if (t >= diagrams[b].horizon()) continue;
                for (const MddEdge& e : diagrams[a].edges(t)) {
                    if (e.from == e.to || !diagrams[b].has_edge(t, e.to, e.from)) continue;
                    f.add_clause({-vars.edge(static_cast<RobotId>(a), e.from, e.to, t),
                                  -vars.edge(static_cast<RobotId>(b), e.to, e.from, t)});
                }
            }
        }
    }
    f.num_vars = vars.size();
    return f;
}

std::optional<std::vector<Lit>> conflict_clause(const ConflictPair& pair, const VarMap& vars) {
    auto lookup = [&](const Conflict& c) {
        return c.kind == ConflictKind::vertex ? vars.node(c.robot, c.from, c.time)
                                              : vars.edge(c.robot, c.from, c.to, c.time);
    };
    const int a = lookup(pair.first);
    const int b = lookup(pair.second);
    if (a == 0 || b == 0) return std::nullopt;
    return std::vector<Lit>{-a, -b};
}

CnfFormula encode_incomplete(std::span<const Mdd> diagrams, std::span<const ConflictPair> conflicts, VarMap& vars,
                             const CostBound& bound) {
    CnfFormula f = encode_paths(diagrams, vars);
    f.append(encode_cost_bound(diagrams, vars, bound));
    for (const ConflictPair& pair : conflicts)
        if (auto clause = conflict_clause(pair, vars)) f.add_clause(std::move(*clause));
    f.num_vars = vars.size();
    return f;
}

Solution extract_solution(const Model& model, const VarMap& vars, std::span<const Mdd> diagrams) {
    Solution sol;
    for (const Mdd& m : diagrams) {
        Path path;
        for (int t = 0; t <= m.horizon(); ++t) {
            Vertex chosen = kNoVertex;
            for (Vertex v : m.level(t)) {
                if (!model.value(vars.node(m.robot(), v, t))) continue;
                if (chosen != kNoVertex)
                    throw DecodeError("robot " + std::to_string(m.robot()) + " occupies two nodes at level " +
                                      std::to_string(t));
                chosen = v;
            }
            if (chosen == kNoVertex)
                throw DecodeError("robot " + std::to_string(m.robot()) + " occupies no node at level " +
                                  std::to_string(t));
            path.push_back(chosen);
        }
        sol.paths.push_back(trim_goal_stays(std::move(path)));
    }
    return sol;
}

}  // namespace mrpp
