// Command-line front end: solve one instance, run a benchmark, summarize results.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mrpp/bench.hpp"
#include "mrpp/graph.hpp"
#include "mrpp/solvers.hpp"

namespace {

using namespace mrpp;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sat_command(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("MRPP_SAT_CMD");
    return env ? env : "";
}

void print_outcome(std::ostream& os, std::string_view solver, const SolveOutcome& o) {
    const SolveStats& s = o.stats;
    os << "solver=" << solver << " status=" << to_string(o.status);
    if (o.status == SolveStatus::solved) os << " soc=" << s.soc << " makespan=" << s.makespan;
    os << " time_s=" << s.wall_time_s << " iterations=" << s.iterations << " sat_calls=" << s.sat_calls
       << " vars=" << s.variables << " clauses=" << s.clauses << " collisions=" << s.collisions
       << " paths=" << s.paths_generated << " cbs_nodes=" << s.cbs_nodes << " soc_bound=" << s.final_soc_bound
       << " horizon=" << s.final_horizon;
    if (!o.note.empty()) os << " note=\"" << o.note << '"';
    os << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sum-of-costs optimal multi-robot path planning"};
    app.require_subcommand(1);

    std::string map_path, scen_path, solver_name = "sparse", sat_cmd, solution_out;
    int agents = 0;
    double timeout = 30.0;
    int max_extra = SolveLimits{}.max_extra_cost;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a single instance");
    solve_cmd->add_option("--map", map_path, "movingai .map file")->required();
    solve_cmd->add_option("--scen", scen_path, "movingai .scen file")->required();
    solve_cmd->add_option("--agents", agents, "number of robots (first rows of the scenario)")->required();
    solve_cmd->add_option("--solver", solver_name, "cbs | mddsat | smtcbs | sparse")
        ->check(CLI::IsMember({"cbs", "mddsat", "smtcbs", "sparse"}));
    solve_cmd->add_option("--timeout", timeout, "wall-clock limit in seconds");
    solve_cmd->add_option("--max-extra-cost", max_extra, "give up beyond sum of shortest paths + this");
    solve_cmd->add_option("--sat-cmd", sat_cmd, "external DIMACS solver command (default: $MRPP_SAT_CMD, else embedded)");
    solve_cmd->add_option("--solution-out", solution_out, "write the solution here");

    std::string config_path, bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark configuration");
    bench_cmd->add_option("--config", config_path, "key=value configuration file")->required();
    bench_cmd->add_option("--out", bench_out, "CSV output (overrides the config's output)");

    std::string csv_in, summary_dir;
    auto* sum_cmd = app.add_subcommand("summarize", "Success rates and cactus data from a benchmark CSV");
    sum_cmd->add_option("--in", csv_in, "benchmark CSV")->required();
    sum_cmd->add_option("--out", summary_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            if (agents <= 0) throw ParseError("--agents must be positive");
            const GridMap map = parse_map(read_file(map_path));
            const Instance instance = parse_scenario(read_file(scen_path), map, agents);
            SolveLimits limits;
            limits.timeout_s = timeout;
            limits.max_extra_cost = max_extra;
            SolveHooks hooks;
            if (auto cmd = sat_command(sat_cmd); !cmd.empty()) hooks.sat = external_factory(cmd);
            const SolverKind kind = *parse_solver_kind(solver_name);
            const SolveOutcome outcome = solve(kind, instance, limits, hooks);
            print_outcome(std::cout, solver_name, outcome);
            if (outcome.solution && !solution_out.empty()) {
                std::ofstream out(solution_out);
                write_solution(out, *outcome.solution);
                if (!out) throw std::runtime_error("cannot write " + solution_out);
            }
            return outcome.status == SolveStatus::solved ? 0 : 2;
        }
        if (*bench_cmd) {
            BenchConfig cfg = load_bench_config(config_path);
            if (!bench_out.empty()) cfg.output = bench_out;
            if (cfg.sat_command.empty()) cfg.sat_command = sat_command("");
            std::ofstream csv(cfg.output);
            if (!csv) throw std::runtime_error("cannot write " + cfg.output.string());
            const auto records = run_benchmark(cfg, &csv);
            std::size_t solved = 0;
            for (const auto& r : records) solved += r.status == "solved";
            std::cout << "wrote " << records.size() << " records (" << solved << " solved) to " << cfg.output.string()
                      << '\n';
            return 0;
        }
        if (*sum_cmd) {
            const auto records = parse_csv(read_file(csv_in));
            const BenchSummary summary = summarize(records);
            write_summary(summary, summary_dir);
            std::cout << "solver,k,solved,total,success_rate\n";
            for (const auto& c : summary.success)
                std::cout << c.solver << ',' << c.k << ',' << c.solved << ',' << c.total << ',' << c.rate() << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
