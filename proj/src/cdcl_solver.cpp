#include <algorithm>
#include <string>

#include "mrpp/sat_solver.hpp"

namespace mrpp {

namespace {

constexpr double kVarDecay = 0.95;
constexpr std::uint64_t kFirstRestart = 100;
constexpr double kRestartGrowth = 1.5;

}  // namespace

void SatSolver::add_formula(const CnfFormula& formula) {
    if (formula.num_vars > num_vars()) reserve_vars(formula.num_vars);
    for (const auto& clause : formula.clauses) add_clause(clause);
}

CdclSolver::CdclSolver(std::uint64_t seed) : rng_(seed) {}

void CdclSolver::reserve_vars(int count) {
    const auto old = assigns_.size();
    if (count <= static_cast<int>(old)) return;
    const auto n = static_cast<std::size_t>(count);
    assigns_.resize(n, kUndef);
    level_.resize(n, 0);
    reason_.resize(n, -1);
    polarity_.resize(n, 1);
    activity_.resize(n, 0.0);
    seen_.resize(n, 0);
    heap_pos_.resize(n, -1);
    watches_.resize(2 * n);
    // Tiny seeded jitter only decides ties between otherwise equal variables.
    std::uniform_real_distribution<double> jitter(0.0, 1e-6);
    for (std::size_t v = old; v < n; ++v) {
        activity_[v] = jitter(rng_);
        heap_insert(static_cast<int>(v));
    }
}

void CdclSolver::add_clause(std::span<const Lit> clause) {
    ++original_clauses_;
    for (Lit l : clause)
        if (l == 0 || var_of(l) > num_vars())
            throw std::invalid_argument("clause uses unregistered variable " + std::to_string(var_of(l)));
    if (!ok_) return;
    cancel_until(0);

    std::vector<ILit> lits;
    lits.reserve(clause.size());
    for (Lit l : clause) lits.push_back(to_internal(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && (lits[i] ^ 1) == lits[i + 1]) return;  // tautology
        auto val = value(lits[i]);
        if (val == kTrue) return;
        if (val == kUndef) lits[keep++] = lits[i];
    }
    lits.resize(keep);

    if (lits.empty()) {
        ok_ = false;
        return;
    }
    if (lits.size() == 1) {
        enqueue(lits[0], -1);
        if (propagate() != -1) ok_ = false;
        return;
    }
    clauses_.push_back(std::move(lits));
    attach(static_cast<int>(clauses_.size()) - 1);
}

void CdclSolver::attach(int clause) {
    const auto& c = clauses_[static_cast<std::size_t>(clause)];
    watches_[static_cast<std::size_t>(c[0] ^ 1)].push_back({clause, c[1]});
    watches_[static_cast<std::size_t>(c[1] ^ 1)].push_back({clause, c[0]});
}

void CdclSolver::enqueue(ILit l, int reason) {
    const auto v = static_cast<std::size_t>(l >> 1);
    assigns_[v] = static_cast<std::int8_t>((l & 1) ? kFalse : kTrue);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
}

int CdclSolver::propagate() {
    int conflict = -1;
    while (qhead_ < trail_.size()) {
        const ILit p = trail_[qhead_++];
        const ILit false_lit = p ^ 1;
        auto& ws = watches_[static_cast<std::size_t>(p)];
        ++stats_.propagations;
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            const Watch w = ws[i];
            if (value(w.blocker) == kTrue) {
                ws[j++] = ws[i++];
                continue;
            }
            auto& c = clauses_[static_cast<std::size_t>(w.clause)];
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            ++i;
            const ILit first = c[0];
            const Watch updated{w.clause, first};
            if (first != w.blocker && value(first) == kTrue) {
                ws[j++] = updated;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != kFalse) {
                    c[1] = c[k];
                    c[k] = false_lit;
                    watches_[static_cast<std::size_t>(c[1] ^ 1)].push_back(updated);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = updated;
            if (value(first) == kFalse) {
                conflict = w.clause;
                qhead_ = trail_.size();
                while (i < ws.size()) ws[j++] = ws[i++];
            } else {
                enqueue(first, w.clause);
            }
        }
        ws.resize(j);
        if (conflict != -1) break;
    }
    return conflict;
}

bool CdclSolver::redundant(ILit l) const {
    const int r = reason_[static_cast<std::size_t>(l >> 1)];
    if (r == -1) return false;
    const auto& c = clauses_[static_cast<std::size_t>(r)];
    for (std::size_t k = 1; k < c.size(); ++k) {
        const auto v = static_cast<std::size_t>(c[k] >> 1);
        if (!seen_[v] && level_[v] > 0) return false;
    }
    return true;
}

void CdclSolver::analyze(int conflict, std::vector<ILit>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(-1);
    int pending = 0;
    ILit p = -1;
    std::size_t index = trail_.size();
    do {
        const auto& c = clauses_[static_cast<std::size_t>(conflict)];
        for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
            const ILit q = c[k];
            const auto v = static_cast<std::size_t>(q >> 1);
            if (seen_[v] || level_[v] == 0) continue;
            bump(static_cast<int>(v));
            seen_[v] = 1;
            if (level_[v] >= decision_level())
                ++pending;
            else
                learnt.push_back(q);
        }
        while (!seen_[static_cast<std::size_t>(trail_[--index] >> 1)]) {
        }
        p = trail_[index];
        conflict = reason_[static_cast<std::size_t>(p >> 1)];
        seen_[static_cast<std::size_t>(p >> 1)] = 0;
        --pending;
    } while (pending > 0);
    learnt[0] = p ^ 1;

    // Drop literals implied by the rest of the clause.
    std::vector<ILit> to_clear(learnt.begin() + 1, learnt.end());
    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k)
        if (!redundant(learnt[k])) learnt[keep++] = learnt[k];
    learnt.resize(keep);
    for (ILit l : to_clear) seen_[static_cast<std::size_t>(l >> 1)] = 0;

    backtrack_level = 0;
    if (learnt.size() > 1) {
        std::size_t best = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
            if (level_[static_cast<std::size_t>(learnt[k] >> 1)] > level_[static_cast<std::size_t>(learnt[best] >> 1)])
                best = k;
        std::swap(learnt[1], learnt[best]);
        backtrack_level = level_[static_cast<std::size_t>(learnt[1] >> 1)];
    }
}

void CdclSolver::cancel_until(int level) {
    if (decision_level() <= level) return;
    const auto stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
    for (std::size_t i = trail_.size(); i-- > stop;) {
        const auto v = static_cast<std::size_t>(trail_[i] >> 1);
        assigns_[v] = kUndef;
        reason_[v] = -1;
        polarity_[v] = static_cast<std::uint8_t>(trail_[i] & 1);
        heap_insert(static_cast<int>(v));
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = stop;
}

void CdclSolver::bump(int var) {
    auto& a = activity_[static_cast<std::size_t>(var)];
    a += var_inc_;
    if (a > 1e100) {
        for (double& x : activity_) x *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[static_cast<std::size_t>(var)] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[static_cast<std::size_t>(var)]));
}

void CdclSolver::heap_insert(int var) {
    if (heap_pos_[static_cast<std::size_t>(var)] >= 0) return;
    heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(heap_.size());
    heap_.push_back(var);
    heap_up(heap_.size() - 1);
}

void CdclSolver::heap_up(std::size_t pos) {
    const int var = heap_[pos];
    const double act = activity_[static_cast<std::size_t>(var)];
    while (pos > 0) {
        const std::size_t parent = (pos - 1) / 2;
        if (activity_[static_cast<std::size_t>(heap_[parent])] >= act) break;
        heap_[pos] = heap_[parent];
        heap_pos_[static_cast<std::size_t>(heap_[pos])] = static_cast<int>(pos);
        pos = parent;
    }
    heap_[pos] = var;
    heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(pos);
}

void CdclSolver::heap_down(std::size_t pos) {
    const int var = heap_[pos];
    const double act = activity_[static_cast<std::size_t>(var)];
    for (;;) {
        std::size_t child = 2 * pos + 1;
        if (child >= heap_.size()) break;
        if (child + 1 < heap_.size() &&
            activity_[static_cast<std::size_t>(heap_[child + 1])] > activity_[static_cast<std::size_t>(heap_[child])])
            ++child;
        if (activity_[static_cast<std::size_t>(heap_[child])] <= act) break;
        heap_[pos] = heap_[child];
        heap_pos_[static_cast<std::size_t>(heap_[pos])] = static_cast<int>(pos);
        pos = child;
    }
    heap_[pos] = var;
    heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(pos);
}

int CdclSolver::heap_pop() {
    const int top = heap_.front();
    heap_pos_[static_cast<std::size_t>(top)] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[static_cast<std::size_t>(last)] = 0;
        heap_down(0);
    }
    return top;
}

CdclSolver::ILit CdclSolver::pick_branch() {
    while (!heap_.empty()) {
        const int v = heap_pop();
        if (assigns_[static_cast<std::size_t>(v)] == kUndef) return 2 * v + polarity_[static_cast<std::size_t>(v)];
    }
    return -1;
}

SatResult CdclSolver::search(std::uint64_t conflict_budget, const Deadline& deadline) {
    std::uint64_t conflicts_here = 0;
    std::vector<ILit> learnt;
    for (std::uint64_t step = 0;; ++step) {
        if ((step & 1023) == 0 && deadline.expired()) {
            cancel_until(0);
            return SatResult::unknown;
        }
        const int conflict = propagate();
        if (conflict != -1) {
            ++stats_.conflicts;
            ++conflicts_here;
            if (decision_level() == 0) return SatResult::unsat;
            int backtrack_level = 0;
            analyze(conflict, learnt, backtrack_level);
            cancel_until(backtrack_level);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                clauses_.push_back(learnt);
                ++learnt_clauses_;
                const int idx = static_cast<int>(clauses_.size()) - 1;
                attach(idx);
                enqueue(learnt[0], idx);
            }
            var_inc_ /= kVarDecay;
            continue;
        }
        if (conflicts_here >= conflict_budget) {
            cancel_until(0);
            return SatResult::unknown;
        }
        const ILit next = pick_branch();
        if (next == -1) return SatResult::sat;
        ++stats_.decisions;
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(next, -1);
    }
}

SatResult CdclSolver::solve(const Deadline& deadline) {
    ++stats_.solve_calls;
    if (!ok_) return SatResult::unsat;
    cancel_until(0);
    if (propagate() != -1) {
        ok_ = false;
        return SatResult::unsat;
    }
    double budget = static_cast<double>(kFirstRestart);
    for (;;) {
        if (deadline.expired()) return SatResult::unknown;
        const SatResult r = search(static_cast<std::uint64_t>(budget), deadline);
        if (r == SatResult::sat) {
            std::vector<bool> values(assigns_.size() + 1, false);
            for (std::size_t v = 0; v < assigns_.size(); ++v) values[v + 1] = assigns_[v] == kTrue;
            model_ = Model(std::move(values));
            cancel_until(0);
            return r;
        }
        if (r == SatResult::unsat) {
            ok_ = false;
            return r;
        }
        budget *= kRestartGrowth;
    }
}

SatFactory cdcl_factory(std::uint64_t seed) {
    return [seed] { return std::make_unique<CdclSolver>(seed); };
}

}  // namespace mrpp
