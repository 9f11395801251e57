#include <climits>
#include <random>

#include "doctest.h"
#include "mrpp/pathgen.hpp"
#include "support/brute.hpp"
#include "support/pool_property.hpp"
#include "support/random_instances.hpp"

using namespace mrpp;

namespace {

Graph path_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph grid(int w, int h) { return grid_to_graph(GridMap{w, h, std::vector<bool>(static_cast<std::size_t>(w * h), true)}).graph; }

}  // namespace

TEST_CASE("ConflictSet and PathPool") {
    ConflictSet cs(2);
    CHECK(cs.add(Conflict::at_vertex(0, 3, 1)));
    CHECK_FALSE(cs.add(Conflict::at_vertex(0, 3, 1)));
    CHECK(cs.add(Conflict::on_edge(1, 3, 4, 1)));
    CHECK(cs.size(0) == 1);
    CHECK(cs.of(1).front().kind == ConflictKind::edge);
    CHECK_THROWS_AS(cs.add(Conflict::at_vertex(2, 0, 0)), std::out_of_range);

    PathPool pool(1);
    CHECK(pool.add(0, {0, 1, 2, 2}));
    CHECK_FALSE(pool.add(0, {0, 1, 2}));
    CHECK(pool.contains(0, {0, 1, 2, 2, 2}));
    CHECK(pool.of(0).front() == Path{0, 1, 2});
    CHECK(pool.total() == 1);
}

TEST_CASE("feasible") {
    const Path p{0, 1, 4, 7, 8};
    CHECK(feasible(p, 0, {}));
    const std::vector<Conflict> centre{Conflict::at_vertex(0, 4, 2)};
    CHECK_FALSE(feasible(p, 0, centre));
    const std::vector<Conflict> other_robot{Conflict::at_vertex(1, 4, 2)};
    CHECK(feasible(p, 0, other_robot));
    const std::vector<Conflict> parked{Conflict::at_vertex(0, 8, 5)};
    CHECK_FALSE(feasible(p, 0, parked));  // waiting at the goal counts
    const std::vector<Conflict> move{Conflict::on_edge(0, 1, 4, 1)};
    CHECK_FALSE(feasible(p, 0, move));
    const std::vector<Conflict> reverse{Conflict::on_edge(0, 4, 1, 1)};
    CHECK(feasible(p, 0, reverse));
}

TEST_CASE("downward closure") {
    std::mt19937_64 rng(12);
    Graph g = grid(3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        Path p{0};
        for (int t = 0; t < 5; ++t) {
            auto moves = testing::moves_from(g, p.back());
            p.push_back(moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]);
        }
        std::vector<Conflict> c;
        for (int i = 0; i < 5; ++i)
            c.push_back(Conflict::at_vertex(0, std::uniform_int_distribution<int>(0, 8)(rng), std::uniform_int_distribution<int>(0, 6)(rng)));
        if (!feasible(p, 0, c)) continue;
        for (unsigned mask = 0; mask < 32; ++mask) {
            std::vector<Conflict> sub;
            for (int i = 0; i < 5; ++i)
                if ((mask >> i) & 1U) sub.push_back(c[static_cast<std::size_t>(i)]);
            CHECK(feasible(p, 0, sub));
        }
    }
}

TEST_CASE("conflict_aware_astar examples") {
    Graph p3 = path_graph(3);
    SUBCASE("no conflicts gives the shortest path") {
        auto p = conflict_aware_astar(p3, 0, 2, {}, 2, 2);
        REQUIRE(p);
        CHECK(*p == Path{0, 1, 2});
    }
    SUBCASE("avoid the middle at t=1: wait first") {
        const std::vector<Conflict> avoid{Conflict::at_vertex(0, 1, 1)};
        auto p = conflict_aware_astar(p3, 0, 2, avoid, 3, 3);
        REQUIRE(p);
        CHECK(*p == Path{0, 0, 1, 2});
        CHECK_FALSE(conflict_aware_astar(p3, 0, 2, avoid, 3, 2));
    }
    SUBCASE("goal blocked at every step") {
        std::vector<Conflict> avoid;
        for (int t = 0; t <= 3; ++t) avoid.push_back(Conflict::at_vertex(0, 2, t));
        CHECK_FALSE(conflict_aware_astar(p3, 0, 2, avoid, 3, 3));
    }
    SUBCASE("late goal block forces a later arrival") {
        const std::vector<Conflict> avoid{Conflict::at_vertex(0, 2, 3)};
        auto p = conflict_aware_astar(p3, 0, 2, avoid, 5, 5);
        REQUIRE(p);
        CHECK(individual_cost(*p, 2) == 4);
    }
    SUBCASE("edge conflict") {
        const std::vector<Conflict> avoid{Conflict::on_edge(0, 0, 1, 0)};
        auto p = conflict_aware_astar(p3, 0, 2, avoid, 3, 3);
        REQUIRE(p);
        CHECK(*p == Path{0, 0, 1, 2});
    }
    SUBCASE("blocked start") {
        const std::vector<Conflict> avoid{Conflict::at_vertex(0, 0, 0)};
        CHECK_FALSE(conflict_aware_astar(p3, 0, 2, avoid, 3, 3));
    }
    SUBCASE("cost cap above horizon is rejected") { CHECK_THROWS_AS(conflict_aware_astar(p3, 0, 2, {}, 2, 3), std::invalid_argument); }
}

TEST_CASE("conflict_aware_astar is optimal against exhaustive enumeration") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 7)(rng);
        Graph g = testing::random_graph(rng, n, 0.4);
        std::uniform_int_distribution<int> pick(0, n - 1);
        const Vertex s = pick(rng), goal = pick(rng);
        const int mu = std::uniform_int_distribution<int>(0, 6)(rng);
        std::vector<Conflict> avoid;
        const int count = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int i = 0; i < count; ++i) {
            const Vertex v = pick(rng);
            const int t = std::uniform_int_distribution<int>(0, mu + 1)(rng);
            if (std::bernoulli_distribution(0.7)(rng) || g.neighbors(v).empty()) {
                avoid.push_back(Conflict::at_vertex(0, v, t));
            } else {
                auto nb = g.neighbors(v);
                avoid.push_back(Conflict::on_edge(0, v, nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)], t));
            }
        }
        int best = INT_MAX;
        testing::for_each_walk(g, s, goal, mu, [&](const std::vector<Vertex>& w) {
            if (testing::avoids_all(w, avoid)) best = std::min(best, testing::brute_cost(w, goal));
        });
        CHECK(testing::reference_min_cost(g, s, goal, avoid, mu) == best);
        auto p = conflict_aware_astar(g, s, goal, avoid, mu, mu);
        CAPTURE(trial);
        if (best == INT_MAX) {
            CHECK_FALSE(p);
            continue;
        }
        REQUIRE(p);
        CHECK(individual_cost(*p, goal) == best);
        CHECK(testing::avoids_all(*p, avoid));
        CHECK(p->front() == s);
        for (std::size_t t = 0; t + 1 < p->size(); ++t)
            CHECK(((*p)[t] == (*p)[t + 1] || g.adjacent((*p)[t], (*p)[t + 1])));
    }
}

TEST_CASE("PathSearch prefers paths touching fewer penalized conflicts") {
    Graph g = grid(3, 3);
    PathSearch search(g, 0, 8);
    const std::vector<Conflict> penalize{Conflict::at_vertex(0, 1, 1), Conflict::at_vertex(0, 4, 2)};
    auto p = search.find({}, penalize, 4, 4);
    REQUIRE(p);
    CHECK(individual_cost(*p, 8) == 4);
    CHECK(violated(*p, penalize).empty());
    CHECK(search.shortest() == 4);
}

TEST_CASE("new_paths examples") {
    Graph g = grid(3, 3);
    PathSearch search(g, 0, 8);
    const Path initial{0, 1, 4, 7, 8};
    SUBCASE("no conflicts") {
        auto r = new_paths(search, std::vector<Path>{initial}, 0, {}, 0, 4, 100);
        CHECK(r.paths.empty());
    }
    SUBCASE("one conflict with an equal-cost alternative") {
        const std::vector<Conflict> c{Conflict::at_vertex(0, 4, 2)};
        auto r = new_paths(search, std::vector<Path>{initial}, 0, c, 0, 4, 100);
        REQUIRE(r.paths.size() == 1);
        CHECK(individual_cost(r.paths[0], 8) == 4);
        CHECK(feasible(r.paths[0], 0, c));
    }
    SUBCASE("a conflict no path can dodge adds nothing") {
        Graph p2 = path_graph(2);
        PathSearch s2(p2, 0, 1);
        const std::vector<Conflict> c{Conflict::at_vertex(0, 1, 1)};
        auto r = new_paths(s2, std::vector<Path>{{0, 1}}, 0, c, 0, 1, 1000);
        CHECK(r.paths.empty());
        int found = 0;
        testing::for_each_walk(p2, 0, 1, 1, [&](const std::vector<Vertex>& w) { found += testing::avoids_all(w, c); });
        CHECK(found == 0);
    }
    SUBCASE("search cap") {
        std::vector<Conflict> c;
        for (int t = 1; t <= 3; ++t)
            for (Vertex v : {1, 3, 4}) c.push_back(Conflict::at_vertex(0, v, t));
        CHECK_THROWS_AS(new_paths(search, std::vector<Path>{initial}, 0, c, 0, 6, 2), PathGenCapExceeded);
    }
    SUBCASE("foreign conflicts are rejected") {
        const std::vector<Conflict> c{Conflict::at_vertex(1, 4, 2)};
        CHECK_THROWS_AS(new_paths(search, std::vector<Path>{initial}, 0, c, 0, 4, 100), std::invalid_argument);
    }
}

TEST_CASE("new_paths establishes the pool property incrementally") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 120; ++trial) {
        Instance inst = testing::random_grid_instance(rng, 4, 4, 0.15, 1);
        const Graph& g = inst.graph();
        PathSearch search(g, inst.start(0), inst.goal(0));
        const int horizon = search.shortest() + std::uniform_int_distribution<int>(0, 3)(rng);
        std::vector<Path> pool{*search.find({}, {}, search.shortest(), search.shortest())};
        std::vector<Conflict> conflicts;
        std::size_t checked = 0;
        // Add conflicts in batches the way the solver does, taken from pooled paths.
        for (int batch = 0; batch < 4 && conflicts.size() < 8; ++batch) {
            const std::size_t fresh = conflicts.size();
            const Path& victim = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
            const int adds = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int i = 0; i < adds; ++i) {
                const int t = std::uniform_int_distribution<int>(0, horizon)(rng);
                Conflict c = Conflict::at_vertex(0, position_at(victim, t), t);
                if (t + 1 < static_cast<int>(victim.size()) && victim[static_cast<std::size_t>(t)] != victim[static_cast<std::size_t>(t) + 1] &&
                    std::bernoulli_distribution(0.3)(rng))
                    c = Conflict::on_edge(0, victim[static_cast<std::size_t>(t)], victim[static_cast<std::size_t>(t) + 1], t);
                if (std::find(conflicts.begin(), conflicts.end(), c) == conflicts.end()) conflicts.push_back(c);
            }
            // The very first batch is checked from scratch; later ones only add fresh conflicts.
            auto result = new_paths(search, pool, 0, conflicts, batch == 0 ? 0 : fresh, horizon, 100000);
            for (Path& p : result.paths) {
                CHECK(std::find(pool.begin(), pool.end(), p) == pool.end());
                CHECK(individual_cost(p, inst.goal(0)) <= horizon);
                pool.push_back(std::move(p));
            }
            auto problem = testing::check_pool_property(g, inst.start(0), inst.goal(0), conflicts, pool, horizon);
            CAPTURE(trial);
            CHECK_MESSAGE(!problem, problem.value_or(""));
            ++checked;
        }
        CHECK(checked > 0);
    }
}
