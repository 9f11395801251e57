#include <cstring>
#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "mrpp/sat_solver.hpp"

extern char** environ;

namespace mrpp {

namespace {

namespace fs = std::filesystem;

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    bool signaled = false;
};

fs::path unique_temp_path(const char* suffix) {
    static std::atomic<unsigned> counter{0};
    return fs::temp_directory_path() /
           ("mrpp-sat-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + suffix);
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

ProcessResult run_shell(const std::string& command_line, const fs::path& out_path, const fs::path& err_path,
                        const Deadline& deadline) {
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    std::string shell = "/bin/sh", flag = "-c", cmd = command_line;
    char* argv[] = {shell.data(), flag.data(), cmd.data(), nullptr};
    pid_t pid = 0;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc != 0) throw SatBackendError("failed to spawn external solver: " + std::string(std::strerror(rc)));

    ProcessResult result;
    auto pause = std::chrono::microseconds(200);
    int status = 0;
    for (;;) {
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) throw SatBackendError("waitpid failed for external solver");
        if (deadline.expired()) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            return result;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::microseconds(10'000));
    }
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) result.signaled = true;
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ExternalAnswer parse_solver_output(std::string_view output, int exit_code) {
    ExternalAnswer answer;
    bool have_status = false;
    std::size_t pos = 0;
    while (pos < output.size()) {
        auto end = output.find('\n', pos);
        if (end == std::string_view::npos) end = output.size();
        std::string line(output.substr(pos, end - pos));
        pos = end + 1;
        if (line.size() < 2 || line[1] != ' ') continue;
        if (line[0] == 's') {
            if (line.find("UNSATISFIABLE") != std::string::npos) {
                answer.result = SatResult::unsat;
                have_status = true;
            } else if (line.find("SATISFIABLE") != std::string::npos) {
                answer.result = SatResult::sat;
                have_status = true;
            }
        } else if (line[0] == 'v') {
            std::istringstream values(line.substr(2));
            Lit lit = 0;
            while (values >> lit)
                if (lit != 0) answer.values.push_back(lit);
        }
    }
    if (!have_status) {
        if (exit_code == 10)
            answer.result = SatResult::sat;
        else if (exit_code == 20)
            answer.result = SatResult::unsat;
    }
    return answer;
}

ExternalSatSolver::ExternalSatSolver(std::string command) : command_(std::move(command)) {
    if (command_.empty()) throw std::invalid_argument("empty external solver command");
}

void ExternalSatSolver::reserve_vars(int count) { formula_.num_vars = std::max(formula_.num_vars, count); }

void ExternalSatSolver::add_clause(std::span<const Lit> clause) {
    for (Lit l : clause)
        if (l == 0 || var_of(l) > formula_.num_vars)
            throw std::invalid_argument("clause uses unregistered variable " + std::to_string(var_of(l)));
    formula_.clauses.emplace_back(clause.begin(), clause.end());
}

SatResult ExternalSatSolver::solve(const Deadline& deadline) {
    ++stats_.solve_calls;
    // An empty clause cannot be expressed to every solver reliably; answer it locally.
    for (const auto& c : formula_.clauses)
        if (c.empty()) return SatResult::unsat;

    const fs::path cnf = unique_temp_path(".cnf");
    const fs::path out = unique_temp_path(".out");
    const fs::path err = unique_temp_path(".err");
    {
        std::ofstream file(cnf);
        write_dimacs(file, formula_);
        if (!file) throw SatBackendError("cannot write " + cnf.string());
    }
    ProcessResult proc;
    std::string output;
    try {
        proc = run_shell(command_ + " " + shell_quote(cnf.string()), out, err, deadline);
        output = slurp(out);
    } catch (...) {
        std::error_code ec;
        fs::remove(cnf, ec);
        fs::remove(out, ec);
        fs::remove(err, ec);
        throw;
    }
    const std::string errors = slurp(err);
    std::error_code ec;
    fs::remove(cnf, ec);
    fs::remove(out, ec);
    fs::remove(err, ec);

    if (proc.timed_out) return SatResult::unknown;
    if (proc.signaled) throw SatBackendError("external solver killed by signal");
    ExternalAnswer answer = parse_solver_output(output, proc.exit_code);
    if (answer.result == SatResult::unknown)
        throw SatBackendError("external solver gave no verdict (exit " + std::to_string(proc.exit_code) + "): " +
                              errors.substr(0, 200));
    if (answer.result == SatResult::sat) {
        std::vector<bool> values(static_cast<std::size_t>(formula_.num_vars) + 1, false);
        for (Lit l : answer.values)
            if (l > 0 && l <= formula_.num_vars) values[static_cast<std::size_t>(l)] = true;
        model_ = Model(std::move(values));
    }
    return answer.result;
}

SatFactory external_factory(std::string command) {
    return [command = std::move(command)] { return std::make_unique<ExternalSatSolver>(command); };
}

}  // namespace mrpp
