#include "basic/errors.hpp"
#include "basic/graph.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

using namespace basic;

namespace {

std::string write_temp(const std::string& content) {
    static int counter = 0;
    std::string path = "test_graph_tmp_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path);
    out << content;
    return path;
}

SymmetricAdjacency triangle() {
    return SymmetricAdjacency(3, {{0, 1}, {1, 2}, {0, 2}});
}

} // namespace

TEST_CASE("load_edge_list collapses duplicates and drops self-loops") {
    auto path = write_temp("1 2\n2 1\n1 1\n");
    auto load = load_edge_list(path, GraphKind::Primary, 2);
    CHECK(load.edges.size() == 1);
    CHECK(load.edges[0] == Edge{0, 1});
    CHECK(load.self_loops_dropped == 1);
    CHECK(load.duplicates_dropped == 1);
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list empty file") {
    auto path = write_temp("");
    auto load = load_edge_list(path, GraphKind::Primary, 3);
    auto a = make_primary(load);
    CHECK(a.edge_count() == 0);
    CHECK(density(a) == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list bipartite placement") {
    auto path = write_temp("1 3\n2 1\n");
    auto load = load_edge_list(path, GraphKind::Bipartite, 2, 3);
    auto b = make_bipartite(load);
    Eigen::MatrixXd d = b.dense();
    CHECK(d(0, 2) == 1.0);
    CHECK(d(1, 0) == 1.0);
    CHECK(d.sum() == 2.0);
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list parse errors carry line numbers") {
    auto path = write_temp("1 2\nnot numbers\n");
    CHECK_THROWS_AS(load_edge_list(path, GraphKind::Primary, 5), ParseError);
    std::remove(path.c_str());

    auto path2 = write_temp("1 9\n");
    CHECK_THROWS_AS(load_edge_list(path2, GraphKind::Primary, 3), ParseError);
    std::remove(path2.c_str());
}

TEST_CASE("load_edge_list reads the #dims header") {
    auto path = write_temp("#dims 4 6\n1 6\n");
    auto load = load_edge_list(path, GraphKind::Bipartite);
    CHECK(load.n == 4);
    CHECK(load.m == 6);
    std::remove(path.c_str());
}

TEST_CASE("edge list save/load round-trips the edge set exactly") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<Index> node(0, 19);
    std::vector<Edge> edges;
    for (int e = 0; e < 60; ++e) {
        Index i = node(rng), j = node(rng);
        if (i != j) edges.emplace_back(i, j);
    }
    SymmetricAdjacency a(20, edges);
    std::string path = "test_graph_roundtrip.txt";
    save_edge_list(path, a);
    auto back = make_primary(load_edge_list(path, GraphKind::Primary));
    CHECK(back.node_count() == a.node_count());
    CHECK(back.edges() == a.edges());
    std::remove(path.c_str());
}

TEST_CASE("c_core keeps a triangle at c=2") {
    auto s = c_core(triangle(), 2);
    CHECK(s.kept == std::vector<Index>{0, 1, 2});
}

TEST_CASE("c_core empties a path at c=2") {
    SymmetricAdjacency path(3, {{0, 1}, {1, 2}});
    CHECK(c_core(path, 2).size() == 0);
}

TEST_CASE("c_core strips a pendant from a 4-clique") {
    SymmetricAdjacency g(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}});
    auto s = c_core(g, 3);
    CHECK(s.kept == std::vector<Index>{0, 1, 2, 3});
}

TEST_CASE("c_core fixed point and monotonicity") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Index> node(0, 29);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Edge> edges;
        for (int e = 0; e < 80; ++e) {
            Index i = node(rng), j = node(rng);
            if (i != j) edges.emplace_back(i, j);
        }
        SymmetricAdjacency a(30, edges);
        for (Index c = 1; c <= 4; ++c) {
            auto s = c_core(a, c);
            if (s.size() == 0) continue;
            auto sub = restrict_to(a, s);
            for (Index v = 0; v < sub.node_count(); ++v) CHECK(sub.degree(v) >= c);
            // fixed point
            CHECK(c_core(sub, c).size() == sub.node_count());
            // monotone: higher c keeps a subset
            if (c > 1) {
                auto prev = c_core(a, c - 1);
                for (Index v : s.kept) CHECK(prev.contains(v));
            }
        }
    }
}

TEST_CASE("largest_connected_component tie broken by smallest index") {
    SymmetricAdjacency g(7, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    CHECK(largest_connected_component(g).kept == std::vector<Index>{0, 1, 2});
}

TEST_CASE("largest_connected_component whole graph and edgeless cases") {
    SymmetricAdjacency edge(2, {{0, 1}});
    CHECK(largest_connected_component(edge).kept == std::vector<Index>{0, 1});
    SymmetricAdjacency empty(3, {});
    CHECK(largest_connected_component(empty).kept == std::vector<Index>{0});
}

TEST_CASE("density") {
    CHECK(density(triangle()) == 1.0);
    SymmetricAdjacency g(4, {{0, 1}, {2, 3}});
    CHECK(density(g) == doctest::Approx(2.0 / 6.0));
    SymmetricAdjacency single(1, {});
    CHECK_THROWS_AS(density(single), DomainError);
}

TEST_CASE("density at the published core-network scale") {
    // 737 nodes, 2453 edges -> 0.904%
    std::vector<Edge> edges;
    Index i = 0, j = 1;
    for (int e = 0; e < 2453; ++e) {
        edges.emplace_back(i, j);
        if (++j == 737) { ++i; j = i + 1; }
    }
    SymmetricAdjacency g(737, edges);
    CHECK(std::abs(density(g) - 0.00904) < 5e-5);
}

TEST_CASE("restrict_to") {
    auto s = NodeSubset::of({0, 1}, 3);
    auto sub = restrict_to(triangle(), s);
    CHECK(sub.node_count() == 2);
    CHECK(sub.edges() == std::vector<Edge>{{0, 1}});

    auto all = NodeSubset::of({0, 1, 2}, 3);
    CHECK(restrict_to(triangle(), all).edges() == triangle().edges());

    SymmetricAdjacency path(3, {{0, 1}, {1, 2}});
    auto ends = restrict_to(path, NodeSubset::of({0, 2}, 3));
    CHECK(ends.node_count() == 2);
    CHECK(ends.edge_count() == 0);
}

TEST_CASE("restrict_rows keeps surviving primary rows only") {
    BipartiteAdjacency b(3, 2, {{0, 0}, {1, 1}, {2, 0}});
    auto r = restrict_rows(b, NodeSubset::of({0, 2}, 3));
    CHECK(r.primary_count() == 2);
    CHECK(r.side_count() == 2);
    CHECK(r.edges() == std::vector<Edge>{{0, 0}, {1, 0}});
}
