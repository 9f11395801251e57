#include "mrpp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace mrpp {

Instance::Instance(Graph graph, std::vector<Vertex> starts, std::vector<Vertex> goals)
    : graph_(std::move(graph)), starts_(std::move(starts)), goals_(std::move(goals)) {
    if (starts_.size() != goals_.size()) throw std::invalid_argument("start/goal count mismatch");
    std::unordered_set<Vertex> seen_start, seen_goal;
    for (std::size_t r = 0; r < starts_.size(); ++r) {
        if (!graph_.valid(starts_[r]) || !graph_.valid(goals_[r]))
            throw std::invalid_argument("robot " + std::to_string(r) + ": start/goal vertex out of range");
        if (!seen_start.insert(starts_[r]).second)
            throw std::invalid_argument("start vertex " + std::to_string(starts_[r]) + " used twice");
        if (!seen_goal.insert(goals_[r]).second)
            throw std::invalid_argument("goal vertex " + std::to_string(goals_[r]) + " used twice");
    }
}

ConflictPair ConflictPair::from_collision(const Collision& c) {
    if (c.kind == ConflictKind::vertex)
        return {Conflict::at_vertex(c.first, c.from, c.time), Conflict::at_vertex(c.second, c.from, c.time)};
    return {Conflict::on_edge(c.first, c.from, c.to, c.time), Conflict::on_edge(c.second, c.to, c.from, c.time)};
}

std::ostream& operator<<(std::ostream& os, const Conflict& c) {
    if (c.kind == ConflictKind::vertex) return os << "(r" << c.robot << ", v" << c.from << ", t" << c.time << ')';
    return os << "(r" << c.robot << ", v" << c.from << "->v" << c.to << ", t" << c.time << ')';
}

std::ostream& operator<<(std::ostream& os, const Collision& c) {
    if (c.kind == ConflictKind::vertex)
        return os << "vertex(r" << c.first << ", r" << c.second << ", v" << c.from << ", t" << c.time << ')';
    return os << "edge(r" << c.first << ", r" << c.second << ", v" << c.from << "->v" << c.to << ", t" << c.time
              << ')';
}

int individual_cost(const Path& path, Vertex goal) {
    if (path.empty()) throw std::invalid_argument("empty path");
    if (path.back() != goal) throw std::invalid_argument("path does not end at its goal");
    for (std::size_t t = path.size(); t-- > 0;)
        if (path[t] != goal) return static_cast<int>(t) + 1;
    return 0;
}

int sum_of_costs(const Solution& solution, const Instance& instance) {
    int total = 0;
    for (std::size_t r = 0; r < solution.paths.size(); ++r)
        total += individual_cost(solution.paths[r], instance.goal(static_cast<RobotId>(r)));
    return total;
}

int makespan(const Solution& solution, const Instance& instance) {
    int worst = 0;
    for (std::size_t r = 0; r < solution.paths.size(); ++r)
        worst = std::max(worst, individual_cost(solution.paths[r], instance.goal(static_cast<RobotId>(r))));
    return worst;
}

Path trim_goal_stays(Path path) {
    while (path.size() > 1 && path[path.size() - 1] == path[path.size() - 2]) path.pop_back();
    return path;
}

std::vector<Collision> validate_solution(const Instance& instance, const Solution& solution) {
    const auto k = static_cast<std::size_t>(instance.robot_count());
    if (solution.paths.size() != k)
        throw StructuralError("solution has " + std::to_string(solution.paths.size()) + " paths for " +
                              std::to_string(k) + " robots");
    std::size_t horizon = 0;
    for (std::size_t r = 0; r < k; ++r) {
        const Path& p = solution.paths[r];
        auto robot = static_cast<RobotId>(r);
        if (p.empty()) throw StructuralError("robot " + std::to_string(r) + ": empty path");
        if (p.front() != instance.start(robot)) throw StructuralError("robot " + std::to_string(r) + ": wrong start");
        if (p.back() != instance.goal(robot)) throw StructuralError("robot " + std::to_string(r) + ": wrong goal");
        for (std::size_t t = 0; t + 1 < p.size(); ++t)
            if (p[t] != p[t + 1] && !instance.graph().adjacent(p[t], p[t + 1]))
                throw StructuralError("robot " + std::to_string(r) + ": jump " + std::to_string(p[t]) + "->" +
                                      std::to_string(p[t + 1]) + " at t=" + std::to_string(t));
        horizon = std::max(horizon, p.size());
    }

    std::vector<Collision> collisions;
    for (int t = 0; t < static_cast<int>(horizon); ++t) {
        for (std::size_t i = 0; i < k; ++i) {
            const Path& pi = solution.paths[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                const Path& pj = solution.paths[j];
                Vertex vi = position_at(pi, t), vj = position_at(pj, t);
                if (vi == vj)
                    collisions.push_back({ConflictKind::vertex, static_cast<RobotId>(i), static_cast<RobotId>(j), vi,
                                          vi, t});
                if (t + 1 < static_cast<int>(horizon)) {
                    Vertex ni = position_at(pi, t + 1), nj = position_at(pj, t + 1);
                    if (vi != ni && vi == nj && ni == vj)
                        collisions.push_back({ConflictKind::edge, static_cast<RobotId>(i), static_cast<RobotId>(j),
                                              vi, ni, t});
                }
            }
        }
    }
    return collisions;
}

namespace {

template <typename T>
T parse_number(std::string_view field, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(std::string("scenario: bad ") + what + " '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == '\t' || line[pos] == ' ')) ++pos;
        if (pos >= line.size()) break;
        auto end = pos;
        while (end < line.size() && line[end] != '\t' && line[end] != ' ') ++end;
        fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

}  // namespace

std::vector<ScenarioRow> parse_scenario_rows(std::string_view text) {
    std::vector<ScenarioRow> rows;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (first && line.substr(0, 7) == "version") {
            first = false;
            continue;
        }
        first = false;
        auto f = split_fields(line);
        if (f.size() != 9)
            throw ParseError("scenario: expected 9 fields, got " + std::to_string(f.size()) + " in '" +
                             std::string(line) + "'");
        ScenarioRow row;
        row.bucket = parse_number<int>(f[0], "bucket");
        row.map_name = std::string(f[1]);
        row.map_width = parse_number<int>(f[2], "width");
        row.map_height = parse_number<int>(f[3], "height");
        row.start_x = parse_number<int>(f[4], "start x");
        row.start_y = parse_number<int>(f[5], "start y");
        row.goal_x = parse_number<int>(f[6], "goal x");
        row.goal_y = parse_number<int>(f[7], "goal y");
        row.optimal_length = parse_number<double>(f[8], "optimal length");
        rows.push_back(std::move(row));
    }
    return rows;
}

Instance instance_from_rows(const GridMap& map, std::span<const ScenarioRow> rows) {
    GridGraph gg = grid_to_graph(map);
    std::vector<Vertex> starts, goals;
    std::unordered_set<Vertex> used_starts, used_goals;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        auto lookup = [&](int x, int y, const char* what) {
            if (!map.in_bounds(x, y))
                throw ParseError("scenario row " + std::to_string(i) + ": " + what + " (" + std::to_string(x) + "," +
                                 std::to_string(y) + ") out of bounds");
            Vertex v = gg.vertex_at(map, x, y);
            if (v == kNoVertex)
                throw ParseError("scenario row " + std::to_string(i) + ": " + what + " (" + std::to_string(x) + "," +
                                 std::to_string(y) + ") is blocked");
            return v;
        };
        Vertex s = lookup(row.start_x, row.start_y, "start");
        Vertex g = lookup(row.goal_x, row.goal_y, "goal");
        if (!used_starts.insert(s).second) throw ParseError("scenario row " + std::to_string(i) + ": start reused");
        if (!used_goals.insert(g).second) throw ParseError("scenario row " + std::to_string(i) + ": goal reused");
        starts.push_back(s);
        goals.push_back(g);
    }
    return Instance(std::move(gg.graph), std::move(starts), std::move(goals));
}

Instance parse_scenario(std::string_view text, const GridMap& map, int k) {
    if (k < 0) throw std::invalid_argument("negative robot count");
    auto rows = parse_scenario_rows(text);
    if (rows.size() < static_cast<std::size_t>(k))
        throw ParseError("scenario has " + std::to_string(rows.size()) + " rows, " + std::to_string(k) +
                         " robots requested");
    return instance_from_rows(map, std::span<const ScenarioRow>(rows).first(static_cast<std::size_t>(k)));
}

}  // namespace mrpp
