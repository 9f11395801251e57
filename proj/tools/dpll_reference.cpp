// Deliberately simple DPLL solver (unit propagation + chronological
// backtracking, no learning). It shares no code with the library so it can
// serve as an independent reference through the external-solver adapter.
//
// usage: dpll_reference FILE.cnf
// prints `s SATISFIABLE` + `v ...` lines (exit 10) or `s UNSATISFIABLE` (exit 20).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Formula {
    int vars = 0;
    std::vector<std::vector<int>> clauses;
};

bool read_cnf(const char* path, Formula& f) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ss(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            int n = 0;
            ss >> p >> cnf >> f.vars >> n;
            continue;
        }
        int lit;
        while (ss >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) f.clauses.push_back(current);
    return true;
}

class Dpll {
public:
    explicit Dpll(const Formula& f) : f_(f), value_(static_cast<std::size_t>(f.vars) + 1, 0), occurs_(value_.size()) {
        for (std::size_t c = 0; c < f.clauses.size(); ++c)
            for (int lit : f.clauses[c]) occurs_[static_cast<std::size_t>(std::abs(lit))].push_back(c);
    }

    bool solve() {
        for (const auto& c : f_.clauses)
            if (c.empty()) return false;
        return search();
    }

    int value(int var) const { return value_[static_cast<std::size_t>(var)]; }

private:
    int lit_value(int lit) const {
        int v = value_[static_cast<std::size_t>(std::abs(lit))];
        return lit > 0 ? v : -v;
    }

    // Returns false on a falsified clause; assigned literals are appended to `trail`.
    bool propagate(std::vector<int>& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : f_.clauses) {
                int unassigned = 0, last = 0;
                bool sat = false;
                for (int lit : c) {
                    const int v = lit_value(lit);
                    if (v > 0) {
                        sat = true;
                        break;
                    }
                    if (v == 0) {
                        ++unassigned;
                        last = lit;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    assign(last, trail);
                    changed = true;
                }
            }
        }
        return true;
    }

    void assign(int lit, std::vector<int>& trail) {
        value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : -1;
        trail.push_back(std::abs(lit));
    }

    void undo(const std::vector<int>& trail) {
        for (int v : trail) value_[static_cast<std::size_t>(v)] = 0;
    }

    bool search() {
        std::vector<int> trail;
        if (!propagate(trail)) {
            undo(trail);
            return false;
        }
        int branch = 0;
        for (int v = 1; v <= f_.vars && branch == 0; ++v)
            if (value_[static_cast<std::size_t>(v)] == 0 && !occurs_[static_cast<std::size_t>(v)].empty()) branch = v;
        if (branch == 0) return true;
        for (int lit : {-branch, branch}) {
            std::vector<int> local;
            assign(lit, local);
            if (search()) return true;
            undo(local);
        }
        undo(trail);
        return false;
    }

    const Formula& f_;
    std::vector<int> value_;
    std::vector<std::vector<std::size_t>> occurs_;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: dpll_reference FILE.cnf\n";
        return 1;
    }
    Formula f;
    if (!read_cnf(argv[1], f)) {
        std::cerr << "cannot read " << argv[1] << '\n';
        return 1;
    }
    Dpll solver(f);
    if (!solver.solve()) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
    }
    std::cout << "s SATISFIABLE\nv";
    for (int v = 1; v <= f.vars; ++v) std::cout << ' ' << (solver.value(v) > 0 ? v : -v);
    std::cout << " 0\n";
    return 10;
}
