#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrpp/cnf.hpp"
#include "mrpp/instance.hpp"
#include "mrpp/mdd.hpp"

namespace mrpp {

/// Raised when a model does not decode to one node per level; signals an encoder bug.
class DecodeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Sum-of-costs budget: `extra_cost` = SoC - sum of `shortest`.
struct CostBound {
    int extra_cost = 0;
    std::vector<int> shortest;  // per robot, dist(start, goal)
};

/// Path-selection skeleton for each diagram (indexed by robot): start and goal
/// units, X -> OR(outgoing E), pairwise at-most-one over outgoing E,
/// E(u,v,t) -> X(u,t) and E(u,v,t) -> X(v,t+1), and pairwise at-most-one over
/// each level's X variables.
CnfFormula encode_paths(std::span<const Mdd> diagrams, VarMap& vars);

/// Late indicators L(r,t) for shortest(r) <= t < horizon, forced by presence
/// at any non-goal node of level t and propagated to earlier levels, so that
/// the number of true indicators equals cost - shortest. A sequential counter
/// then bounds their total by `extra_cost`.
CnfFormula encode_cost_bound(std::span<const Mdd> diagrams, VarMap& vars, const CostBound& bound);

/// Sequential-counter encoding of sum(lits) <= k; allocates auxiliaries from `vars`.
CnfFormula at_most_k(std::span<const Lit> lits, int k, VarMap& vars);

/// Complete model: paths + cost bound + every vertex-collision and
/// edge-swap exclusion between diagrams.
CnfFormula encode_complete(std::span<const Mdd> diagrams, VarMap& vars, const CostBound& bound);

/// Incomplete model: paths + cost bound + one exclusion clause per recorded
/// conflict pair whose variables exist in the diagrams.
CnfFormula encode_incomplete(std::span<const Mdd> diagrams, std::span<const ConflictPair> conflicts, VarMap& vars,
                             const CostBound& bound);

/// Clause forbidding both halves of a conflict pair, or nullopt when one of
/// the variables is absent (the pair cannot occur in these diagrams).
std::optional<std::vector<Lit>> conflict_clause(const ConflictPair& pair, const VarMap& vars);

/// Decodes the true X variables into one path per robot, terminal goal-stays trimmed.
Solution extract_solution(const Model& model, const VarMap& vars, std::span<const Mdd> diagrams);

}  // namespace mrpp
