#include "mrpp/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "mrpp/graph.hpp"

namespace mrpp {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        auto end = s.find(sep, pos);
        out.push_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

template <typename T>
T number(std::string_view s, std::string_view what) {
    s = trim(s);
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ParseError(std::string(what) + ": bad number '" + std::string(s) + "'");
    return value;
}

std::vector<int> parse_agents(std::string_view s) {
    std::vector<int> out;
    for (auto part : split(s, ',')) {
        part = trim(part);
        auto dots = part.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(number<int>(part, "agents"));
            continue;
        }
        int step = 1;
        auto rest = part.substr(dots + 2);
        if (auto colon = rest.find(':'); colon != std::string_view::npos) {
            step = number<int>(rest.substr(colon + 1), "agents step");
            rest = rest.substr(0, colon);
        }
        const int lo = number<int>(part.substr(0, dots), "agents"), hi = number<int>(rest, "agents");
        if (step <= 0 || lo > hi) throw ParseError("agents: bad range '" + std::string(part) + "'");
        for (int k = lo; k <= hi; k += step) out.push_back(k);
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

BenchConfig parse_bench_config(std::string_view text, const fs::path& base_dir) {
    BenchConfig cfg;
    std::vector<fs::path> maps, scens;
    bool solvers_set = false;
    auto resolve = [&](std::string_view v) {
        fs::path p{std::string(v)};
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "map") {
            maps.push_back(resolve(value));
        } else if (key == "scen") {
            scens.push_back(resolve(value));
        } else if (key == "agents") {
            cfg.agents = parse_agents(value);
        } else if (key == "instances") {
            cfg.instances = number<int>(value, "instances");
        } else if (key == "timeout") {
            cfg.timeout_s = number<double>(value, "timeout");
        } else if (key == "solvers") {
            if (!solvers_set) cfg.solvers.clear();
            solvers_set = true;
            for (auto name : split(value, ',')) {
                auto kind = parse_solver_kind(trim(name));
                if (!kind) throw ParseError("unknown solver '" + std::string(trim(name)) + "'");
                cfg.solvers.push_back(*kind);
            }
        } else if (key == "seed") {
            cfg.seed = number<std::uint64_t>(value, "seed");
        } else if (key == "output") {
            cfg.output = std::string(value);
        } else if (key == "sat_cmd") {
            cfg.sat_command = std::string(value);
        } else {
            throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (maps.size() != scens.size()) throw ParseError("config: every map needs exactly one scen");
    if (maps.empty()) throw ParseError("config: no map/scen given");
    for (std::size_t i = 0; i < maps.size(); ++i) cfg.inputs.push_back({maps[i], scens[i]});
    if (cfg.agents.empty()) throw ParseError("config: agents missing");
    for (int k : cfg.agents)
        if (k <= 0) throw ParseError("config: robot counts must be positive");
    if (cfg.instances <= 0) throw ParseError("config: instances must be positive");
    if (!(cfg.timeout_s > 0)) throw ParseError("config: timeout must be positive");
    if (cfg.solvers.empty()) throw ParseError("config: no solvers");
    return cfg;
}

BenchConfig load_bench_config(const fs::path& file) {
    return parse_bench_config(slurp(file), file.parent_path());
}

void write_csv_header(std::ostream& os) { os << kBenchCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const BenchRecord& r) {
    if (r.map.find_first_of(",\n") != std::string::npos) throw std::invalid_argument("map name contains a separator");
    char time[32];
    std::snprintf(time, sizeof time, "%.6f", r.time_s);
    os << r.map << ',' << r.k << ',' << r.instance << ',' << r.solver << ',' << r.status << ',';
    if (r.soc) os << *r.soc;
    os << ',' << time << ',' << r.vars << ',' << r.clauses << ',' << r.sat_calls << ',' << r.iterations << '\n';
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
    std::vector<BenchRecord> out;
    bool header = true;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != kBenchCsvHeader) throw ParseError("csv: unexpected header '" + std::string(line) + "'");
            header = false;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 11) throw ParseError("csv: expected 11 fields in '" + std::string(line) + "'");
        BenchRecord r;
        r.map = std::string(f[0]);
        r.k = number<int>(f[1], "k");
        r.instance = number<int>(f[2], "instance");
        r.solver = std::string(f[3]);
        r.status = std::string(f[4]);
        if (!f[5].empty()) r.soc = number<int>(f[5], "soc");
        r.time_s = number<double>(f[6], "time_s");
        r.vars = number<long long>(f[7], "vars");
        r.clauses = number<long long>(f[8], "clauses");
        r.sat_calls = number<long long>(f[9], "sat_calls");
        r.iterations = number<long long>(f[10], "iterations");
        out.push_back(std::move(r));
    }
    if (header) throw ParseError("csv: missing header");
    return out;
}

std::vector<ScenarioRow> select_rows(std::span<const ScenarioRow> rows, int k, int index, std::uint64_t seed) {
    if (rows.empty() || k <= 0) return {};
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    const std::size_t offset = std::uniform_int_distribution<std::size_t>(0, rows.size() - 1)(rng);
    std::vector<ScenarioRow> out;
    std::set<std::pair<int, int>> starts, goals;
    for (std::size_t i = 0; i < rows.size() && static_cast<int>(out.size()) < k; ++i) {
        const ScenarioRow& row = rows[(offset + i) % rows.size()];
        if (starts.count({row.start_x, row.start_y}) || goals.count({row.goal_x, row.goal_y})) continue;
        starts.insert({row.start_x, row.start_y});
        goals.insert({row.goal_x, row.goal_y});
        out.push_back(row);
    }
    if (static_cast<int>(out.size()) < k) out.clear();
    return out;
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config, std::ostream* csv) {
    std::vector<BenchRecord> records;
    if (csv) write_csv_header(*csv);
    SolveLimits limits;
    limits.timeout_s = config.timeout_s;
    SolveHooks hooks;
    if (!config.sat_command.empty()) hooks.sat = external_factory(config.sat_command);

    for (const BenchInput& input : config.inputs) {
        const std::string map_name = input.map.stem().string();
        std::optional<GridMap> map;
        std::vector<ScenarioRow> rows;
        std::string load_error;
        try {
            map = parse_map(slurp(input.map));
            rows = parse_scenario_rows(slurp(input.scen));
        } catch (const std::exception& e) {
            load_error = e.what();
        }
        for (int k : config.agents) {
            for (int i = 0; i < config.instances; ++i) {
                std::optional<Instance> instance;
                if (load_error.empty()) {
                    auto chosen = select_rows(rows, k, i, config.seed);
                    try {
                        if (!chosen.empty()) instance = instance_from_rows(*map, chosen);
                    } catch (const std::exception&) {
                    }
                }
                for (SolverKind kind : config.solvers) {
                    BenchRecord rec;
                    rec.map = map_name;
                    rec.k = k;
                    rec.instance = i;
                    rec.solver = std::string(to_string(kind));
                    rec.status = "error";
                    if (instance) {
                        try {
                            SolveOutcome o = solve(kind, *instance, limits, hooks);
                            rec.status = std::string(to_string(o.status));
                            if (o.status == SolveStatus::solved) rec.soc = o.stats.soc;
                            rec.time_s = o.stats.wall_time_s;
                            rec.vars = o.stats.variables;
                            rec.clauses = static_cast<long long>(o.stats.clauses);
                            rec.sat_calls = o.stats.sat_calls;
                            rec.iterations = o.stats.iterations;
                        } catch (const std::exception&) {
                            rec.status = "error";
                        }
                    }
                    if (csv) {
                        write_csv_row(*csv, rec);
                        csv->flush();
                    }
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    return records;
}

BenchSummary summarize(std::span<const BenchRecord> records) {
    std::map<std::pair<std::string, int>, SuccessCell> cells;
    std::map<std::string, std::vector<double>> times;
    for (const BenchRecord& r : records) {
        auto& cell = cells[{r.solver, r.k}];
        cell.solver = r.solver;
        cell.k = r.k;
        ++cell.total;
        times[r.solver];
        if (r.status == "solved") {
            ++cell.solved;
            times[r.solver].push_back(r.time_s);
        }
    }
    BenchSummary s;
    for (auto& [key, cell] : cells) s.success.push_back(cell);
    for (auto& [solver, t] : times) {
        std::sort(t.begin(), t.end());
        std::vector<CactusPoint> pts;
        for (std::size_t i = 0; i < t.size(); ++i) pts.push_back({static_cast<int>(i) + 1, t[i]});
        s.cactus.emplace_back(solver, std::move(pts));
    }
    return s;
}

void write_summary(const BenchSummary& summary, const fs::path& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "success_rate.csv");
        out << "solver,k,solved,total,success_rate\n";
        char rate[32];
        for (const auto& c : summary.success) {
            std::snprintf(rate, sizeof rate, "%.4f", c.rate());
            out << c.solver << ',' << c.k << ',' << c.solved << ',' << c.total << ',' << rate << '\n';
        }
        if (!out) throw std::runtime_error("cannot write " + (dir / "success_rate.csv").string());
    }
    for (const auto& [solver, pts] : summary.cactus) {
        std::ofstream out(dir / ("cactus_" + solver + ".dat"));
        out << "# rank runtime_s\n";
        char line[64];
        for (const auto& p : pts) {
            std::snprintf(line, sizeof line, "%d %.6f\n", p.rank, p.runtime);
            out << line;
        }
        if (!out) throw std::runtime_error("cannot write cactus file for " + solver);
    }
}

}  // namespace mrpp
