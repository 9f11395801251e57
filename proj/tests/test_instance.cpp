#include <random>

#include "doctest.h"
#include "mrpp/graph.hpp"
#include "mrpp/instance.hpp"
#include "mrpp/oracle.hpp"
#include "support/brute.hpp"
#include "support/random_instances.hpp"

using namespace mrpp;

namespace {

std::string map_text(int h, int w, const std::vector<std::string>& rows) {
    std::string s = "type octile\nheight " + std::to_string(h) + "\nwidth " + std::to_string(w) + "\nmap\n";
    for (const auto& r : rows) s += r + "\n";
    return s;
}

Graph path_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph cycle_graph(int n) {
    Graph g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}

}  // namespace

TEST_CASE("parse_map") {
    SUBCASE("all passable") {
        auto m = parse_map(map_text(2, 2, {"..", ".."}));
        CHECK(m.width == 2);
        CHECK(m.height == 2);
        CHECK(m.passable_count() == 4);
    }
    SUBCASE("one obstacle") { CHECK(parse_map(map_text(2, 2, {"..", "@."})).passable_count() == 3); }
    SUBCASE("character classes") {
        auto m = parse_map(map_text(1, 7, {".GS@OTW"}));
        CHECK(m.passable_count() == 3);
        CHECK_FALSE(m.is_passable(3, 0));
    }
    SUBCASE("more rows than declared") { CHECK_THROWS_AS(parse_map(map_text(2, 2, {"..", "..", ".."})), ParseError); }
    SUBCASE("fewer rows than declared") { CHECK_THROWS_AS(parse_map(map_text(3, 2, {"..", ".."})), ParseError); }
    SUBCASE("row too long") { CHECK_THROWS_AS(parse_map(map_text(2, 2, {"...", ".."})), ParseError); }
    SUBCASE("unknown character") { CHECK_THROWS_AS(parse_map(map_text(2, 2, {"..", ".x"})), ParseError); }
    SUBCASE("bad header") {
        CHECK_THROWS_AS(parse_map("type octile\nwidth 2\nheight 2\nmap\n..\n..\n"), ParseError);
        CHECK_THROWS_AS(parse_map("height 2\nwidth 2\nmap\n..\n..\n"), ParseError);
        CHECK_THROWS_AS(parse_map(""), ParseError);
    }
    SUBCASE("round trip") {
        auto m = parse_map(map_text(3, 4, {"..@.", "....", "@@.."}));
        CHECK(parse_map(format_map(m)).passable == m.passable);
    }
}

TEST_CASE("grid_to_graph") {
    SUBCASE("1x3 row") {
        auto gg = grid_to_graph(parse_map(map_text(1, 3, {"..."})));
        CHECK(gg.graph.vertex_count() == 3);
        CHECK(gg.graph.edge_count() == 2);
        CHECK(gg.graph.adjacent(0, 1));
        CHECK(gg.graph.adjacent(1, 2));
        CHECK_FALSE(gg.graph.adjacent(0, 2));
    }
    SUBCASE("3x3 open") {
        auto gg = grid_to_graph(parse_map(map_text(3, 3, {"...", "...", "..."})));
        CHECK(gg.graph.vertex_count() == 9);
        CHECK(gg.graph.edge_count() == 12);
        CHECK_FALSE(gg.graph.adjacent(0, 4));  // no diagonals
    }
    SUBCASE("2x2 with blocked corner") {
        auto gg = grid_to_graph(parse_map(map_text(2, 2, {".@", ".."})));
        CHECK(gg.graph.vertex_count() == 3);
        CHECK(gg.graph.edge_count() == 2);
        CHECK(gg.vertex_at(parse_map(map_text(2, 2, {".@", ".."})), 1, 0) == kNoVertex);
    }
    SUBCASE("adjacency symmetric, no self loops") {
        std::mt19937_64 rng(3);
        auto gg = grid_to_graph(testing::random_grid(rng, 7, 5, 0.3));
        for (Vertex v = 0; v < gg.graph.vertex_count(); ++v)
            for (Vertex w : gg.graph.neighbors(v)) {
                CHECK(w != v);
                CHECK(gg.graph.adjacent(w, v));
            }
    }
}

TEST_CASE("Graph rejects bad edges") {
    Graph g(3);
    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 3), std::invalid_argument);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("parse_scenario") {
    const auto map = parse_map(map_text(2, 3, {"...", ".@."}));
    const std::string rows = "version 1\n"
                             "0\tm.map\t3\t2\t0\t0\t2\t0\t2\n"
                             "0\tm.map\t3\t2\t2\t1\t0\t1\t4\n"
                             "0\tm.map\t3\t2\t1\t0\t2\t1\t2\n";
    SUBCASE("two rows") {
        auto inst = parse_scenario(rows, map, 2);
        CHECK(inst.robot_count() == 2);
        auto gg = grid_to_graph(map);
        CHECK(inst.start(0) == gg.vertex_at(map, 0, 0));
        CHECK(inst.goal(0) == gg.vertex_at(map, 2, 0));
        CHECK(inst.start(1) == gg.vertex_at(map, 2, 1));
    }
    SUBCASE("without version line") {
        CHECK(parse_scenario("0\tm.map\t3\t2\t0\t0\t2\t0\t2\n", map, 1).robot_count() == 1);
    }
    SUBCASE("too few rows") { CHECK_THROWS_AS(parse_scenario(rows, map, 5), ParseError); }
    SUBCASE("goal on obstacle") {
        CHECK_THROWS_AS(parse_scenario("0\tm.map\t3\t2\t0\t0\t1\t1\t2\n", map, 1), ParseError);
    }
    SUBCASE("out of bounds") {
        CHECK_THROWS_AS(parse_scenario("0\tm.map\t3\t2\t0\t0\t3\t0\t2\n", map, 1), ParseError);
    }
    SUBCASE("shared start") {
        CHECK_THROWS_AS(parse_scenario("0\tm.map\t3\t2\t0\t0\t2\t0\t2\n0\tm.map\t3\t2\t0\t0\t0\t1\t1\n", map, 2),
                        ParseError);
    }
    SUBCASE("malformed row") { CHECK_THROWS_AS(parse_scenario("0\tm.map\t3\t2\t0\t0\n", map, 1), ParseError); }
}

TEST_CASE("Instance validation") {
    Graph g = path_graph(3);
    CHECK_THROWS(Instance(g, {0, 0}, {1, 2}));
    CHECK_THROWS(Instance(g, {0, 1}, {2, 2}));
    CHECK_THROWS(Instance(g, {0, 5}, {1, 2}));
    CHECK_THROWS(Instance(g, {0}, {1, 2}));
}

TEST_CASE("individual_cost") {
    CHECK(individual_cost({1, 2, 3}, 3) == 2);
    CHECK(individual_cost({1, 1, 2}, 2) == 2);
    CHECK(individual_cost({1, 2, 2, 2}, 2) == 1);
    CHECK(individual_cost({2}, 2) == 0);
    CHECK(individual_cost({2, 1, 2}, 2) == 2);  // leaving and returning is charged
    CHECK_THROWS_AS(individual_cost({1, 2}, 1), std::invalid_argument);
    CHECK_THROWS_AS(individual_cost({}, 1), std::invalid_argument);
}

TEST_CASE("sum_of_costs and makespan") {
    Graph g = path_graph(6);
    SUBCASE("costs 2 and 3") {
        Instance inst(g, {0, 5}, {2, 2 + 1});
        Solution s{{{0, 1, 2}, {5, 4, 4, 3}}};
        CHECK(sum_of_costs(s, inst) == 5);
        CHECK(makespan(s, inst) == 3);
    }
    SUBCASE("everyone home") {
        Instance inst(g, {0, 5}, {0, 5});
        Solution s{{{0}, {5, 5}}};
        CHECK(sum_of_costs(s, inst) == 0);
        CHECK(makespan(s, inst) == 0);
    }
    SUBCASE("two cost-4 paths") {
        Graph grid = grid_to_graph(parse_map(map_text(3, 3, {"...", "...", "..."}))).graph;
        Instance inst(grid, {0, 2}, {8, 6});
        Solution s{{{0, 1, 2, 5, 8}, {2, 2, 1, 0, 3, 6}}};
        CHECK(sum_of_costs(s, inst) == 4 + 5);
        Solution t{{{0, 3, 4, 5, 8}, {2, 1, 0, 3, 6}}};
        CHECK(sum_of_costs(t, inst) == 8);
    }
}

TEST_CASE("validate_solution") {
    Graph g = path_graph(6);
    SUBCASE("disjoint") {
        Instance inst(g, {0}, {2});
        CHECK(validate_solution(inst, Solution{{{0, 1, 2}}}).empty());
    }
    SUBCASE("vertex collision in the centre at t=2") {
        Graph grid = grid_to_graph(parse_map(map_text(3, 3, {"...", "...", "..."}))).graph;
        Instance inst(grid, {0, 2}, {8, 6});
        auto c = validate_solution(inst, Solution{{{0, 1, 4, 7, 8}, {2, 5, 4, 3, 6}}});
        REQUIRE(c.size() == 1);
        CHECK(c[0].kind == ConflictKind::vertex);
        CHECK(c[0].first == 0);
        CHECK(c[0].second == 1);
        CHECK(c[0].from == 4);
        CHECK(c[0].time == 2);
    }
    SUBCASE("swap") {
        Instance inst(g, {0, 1}, {1, 0});
        auto c = validate_solution(inst, Solution{{{0, 1}, {1, 0}}});
        REQUIRE(c.size() == 1);
        CHECK(c[0].kind == ConflictKind::edge);
        CHECK(c[0].from == 0);
        CHECK(c[0].to == 1);
        CHECK(c[0].time == 0);
    }
    SUBCASE("parked robot still blocks its goal") {
        Instance inst(g, {1, 3}, {2, 0});
        auto c = validate_solution(inst, Solution{{{1, 2}, {3, 2, 1, 0}}});
        REQUIRE(c.size() == 1);
        CHECK(c[0].time == 1);
        CHECK(c[0].from == 2);
    }
    SUBCASE("structural errors") {
        Instance inst(g, {0}, {2});
        CHECK_THROWS_AS(validate_solution(inst, Solution{{{0, 2}}}), StructuralError);
        CHECK_THROWS_AS(validate_solution(inst, Solution{{{1, 2}}}), StructuralError);
        CHECK_THROWS_AS(validate_solution(inst, Solution{{{0, 1}}}), StructuralError);
        CHECK_THROWS_AS(validate_solution(inst, Solution{{}}), StructuralError);
    }
    SUBCASE("relabeling symmetry and padding invariance") {
        std::mt19937_64 rng(17);
        Graph c4 = cycle_graph(4);
        for (int trial = 0; trial < 200; ++trial) {
            // random walks ending at chosen goals
            std::vector<Path> paths;
            std::vector<Vertex> starts, goals;
            std::uniform_int_distribution<int> pick(0, 3);
            for (int r = 0; r < 2; ++r) {
                Path p{pick(rng)};
                for (int t = 0; t < 4; ++t) {
                    auto moves = testing::moves_from(c4, p.back());
                    p.push_back(moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]);
                }
                paths.push_back(p);
                starts.push_back(p.front());
                goals.push_back(p.back());
            }
            if (starts[0] == starts[1] || goals[0] == goals[1]) continue;
            Instance a(c4, starts, goals);
            Instance b(c4, {starts[1], starts[0]}, {goals[1], goals[0]});
            auto ca = validate_solution(a, Solution{{paths[0], paths[1]}});
            auto cb = validate_solution(b, Solution{{paths[1], paths[0]}});
            CHECK(ca.size() == cb.size());
            CHECK(ca.empty() == testing::compatible(paths[0], paths[1]));
            Path padded = paths[0];
            padded.push_back(padded.back());
            padded.push_back(padded.back());
            CHECK(validate_solution(a, Solution{{padded, paths[1]}}) == ca);
            CHECK(individual_cost(padded, goals[0]) == individual_cost(paths[0], goals[0]));
        }
    }
}

TEST_CASE("joint_bfs_oracle examples") {
    SUBCASE("one robot on P3") {
        auto s = joint_bfs_oracle(Instance(path_graph(3), {0}, {2}), 10);
        REQUIRE(s);
        CHECK(sum_of_costs(*s, Instance(path_graph(3), {0}, {2})) == 2);
    }
    SUBCASE("swap on P2 is impossible") {
        Instance inst(path_graph(2), {0, 1}, {1, 0});
        CHECK_FALSE(joint_bfs_oracle(inst, 50));
    }
    SUBCASE("swap on C4") {
        Instance inst(cycle_graph(4), {0, 2}, {2, 0});
        auto s = joint_bfs_oracle(inst, 20);
        REQUIRE(s);
        CHECK(sum_of_costs(*s, inst) == 4);
        CHECK(validate_solution(inst, *s).empty());
    }
    SUBCASE("limit below optimum") {
        Instance inst(cycle_graph(4), {0, 2}, {2, 0});
        CHECK_FALSE(joint_bfs_oracle(inst, 3));
    }
    SUBCASE("state cap") {
        Instance inst(cycle_graph(8), {0, 4}, {4, 0});
        CHECK_THROWS_AS(joint_bfs_oracle(inst, 100, 3), OracleCapExceeded);
    }
}

TEST_CASE("joint_bfs_oracle matches exhaustive two-robot search") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 8)(rng);
        Graph g = testing::random_graph(rng, n, 0.35);
        std::uniform_int_distribution<int> pick(0, n - 1);
        Vertex sa = pick(rng), sb = pick(rng), ga = pick(rng), gb = pick(rng);
        if (sa == sb || ga == gb) continue;
        Instance inst(g, {sa, sb}, {ga, gb});
        // Any plan with SoC <= 10 has both individual costs <= 10, so the
        // exhaustive search at horizon 10 sees every candidate.
        const int expected = testing::two_robot_min_soc(g, sa, ga, sb, gb, 10);
        auto s = joint_bfs_oracle(inst, 10);
        if (expected > 10) {
            CHECK_FALSE(s);
            continue;
        }
        REQUIRE(s);
        CHECK(validate_solution(inst, *s).empty());
        CHECK(sum_of_costs(*s, inst) == expected);
        ++checked;
    }
    CHECK(checked > 50);
}
