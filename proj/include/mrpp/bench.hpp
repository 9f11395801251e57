#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrpp/solvers.hpp"

namespace mrpp {

struct BenchInput {
    std::filesystem::path map;
    std::filesystem::path scen;
};

struct BenchConfig {
    std::vector<BenchInput> inputs;  // map/scen pairs
    std::vector<int> agents;         // robot-count schedule
    int instances = 1;               // per (map, k)
    double timeout_s = 10.0;
    std::vector<SolverKind> solvers{SolverKind::cbs, SolverKind::mddsat, SolverKind::smtcbs, SolverKind::sparse};
    std::uint64_t seed = 0;
    std::filesystem::path output = "bench.csv";
    std::string sat_command;  // empty: embedded CDCL
};

/// key=value lines; `#` starts a comment. Keys: map, scen (repeatable, paired
/// in order), agents (`2,4,8` or `2..10:2`), instances, timeout, solvers,
/// seed, output, sat_cmd. Relative map/scen paths are resolved against
/// `base_dir`. Throws ParseError on bad input.
BenchConfig parse_bench_config(std::string_view text, const std::filesystem::path& base_dir = {});
BenchConfig load_bench_config(const std::filesystem::path& file);

struct BenchRecord {
    std::string map;
    int k = 0;
    int instance = 0;
    std::string solver;
    std::string status;  // solved | timeout | resource_cap | error
    std::optional<int> soc;
    double time_s = 0.0;
    long long vars = 0;
    long long clauses = 0;
    long long sat_calls = 0;
    long long iterations = 0;

    bool operator==(const BenchRecord&) const = default;
};

inline constexpr std::string_view kBenchCsvHeader = "map,k,instance,solver,status,soc,time_s,vars,clauses,sat_calls,iterations";

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const BenchRecord& r);
std::vector<BenchRecord> parse_csv(std::string_view text);

/// Scenario rows used for instance `index` with k robots: a walk through the
/// scenario in file order starting at an offset fixed by (seed, index, k),
/// skipping rows whose start or goal cell is already taken. Empty when fewer
/// than k compatible rows exist.
std::vector<ScenarioRow> select_rows(std::span<const ScenarioRow> rows, int k, int index, std::uint64_t seed);

/// Runs every (input, k, instance, solver) cell and returns the records in
/// that order; also writes them to `csv` as they complete when given.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config, std::ostream* csv = nullptr);

struct SuccessCell {
    std::string solver;
    int k = 0;
    int solved = 0;
    int total = 0;
    double rate() const { return total == 0 ? 0.0 : static_cast<double>(solved) / total; }
};

struct CactusPoint {
    int rank;
    double runtime;
};

struct BenchSummary {
    std::vector<SuccessCell> success;  // sorted by solver, then k
    std::vector<std::pair<std::string, std::vector<CactusPoint>>> cactus;  // per solver
};

BenchSummary summarize(std::span<const BenchRecord> records);

/// Writes success_rate.csv and cactus_<solver>.dat into `dir`.
void write_summary(const BenchSummary& summary, const std::filesystem::path& dir);

}  // namespace mrpp
