#include <catch2/catch_amalgamated.hpp>

#include "routesim/rng.hpp"
#include "routesim/topology.hpp"

#include "oracles.hpp"

using namespace routesim;

TEST_CASE("grid3x3 structure") {
    Topology g = builtin_grid3x3();
    CHECK(g.n_nodes() == 9);
    CHECK(g.edges().size() == 24);  // 12 bidirectional pairs
    CHECK(g.neighbors(4) == std::vector<NodeId>{1, 3, 5, 7});
    CHECK(g.neighbors(0) == std::vector<NodeId>{1, 3});
    CHECK(g.is_symmetric());
    CHECK(g.is_connected());
}

TEST_CASE("att25 counts, labels, connectivity") {
    Topology a = builtin_att25();
    CHECK(a.n_nodes() == 25);
    CHECK(a.edges().size() == 112);  // 56 bidirectional pairs
    CHECK(a.node_labels().at(0) == "New York City");
    CHECK(a.is_symmetric());
    CHECK(a.is_connected());
}

TEST_CASE("edge list parsing") {
    Topology two = load_topology("nodes 2\n0 1\n");
    CHECK(two.edges() == std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 0}});

    Topology path = load_topology("nodes 3\n0 1\n1 2\n");
    CHECK(path.neighbors(1) == std::vector<NodeId>{0, 2});

    Topology grid = load_topology_file(default_data_dir() + "/grid3x3.edges");
    CHECK(grid == builtin_grid3x3());
}

TEST_CASE("edge list parse errors carry line numbers") {
    CHECK_THROWS_AS(load_topology("nodes 2\n0 1\n1 0\n"), ParseError);  // duplicate pair
    CHECK_THROWS_AS(load_topology("nodes 2\n0 2\n"), ParseError);       // out of range
    CHECK_THROWS_AS(load_topology("nodes 2\n1 1\n"), ParseError);       // self-loop
    CHECK_THROWS_AS(load_topology("nodes 2\n0 x\n"), ParseError);       // malformed
    CHECK_THROWS_AS(load_topology("0 1\n"), ParseError);                // missing header
    try {
        load_topology("nodes 3\n0 1\n0 1\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("hop distances on grid3x3") {
    Topology g = builtin_grid3x3();
    HopDistanceTable d = hop_distances(g);
    CHECK(d.hops(0, 8) == 4);
    CHECK(d.hops(0, 4) == 2);
    for (NodeId i = 0; i < 9; ++i) CHECK(d.hops(i, i) == 0);
}

TEST_CASE("next hops on shortest paths") {
    Topology g = builtin_grid3x3();
    HopDistanceTable d = hop_distances(g);
    CHECK(next_hops_on_shortest_path(g, d, 0, 8) == std::vector<NodeId>{1, 3});
    CHECK(next_hops_on_shortest_path(g, d, 7, 8) == std::vector<NodeId>{8});
    CHECK(next_hops_on_shortest_path(g, d, 4, 2) == std::vector<NodeId>{1, 5});
}

TEST_CASE("unreachable destinations") {
    Topology disconnected = load_topology("nodes 3\n0 1\n");
    HopDistanceTable d = hop_distances(disconnected);
    CHECK(!d.reachable(0, 2));
    CHECK(!d.try_hops(0, 2).has_value());
    CHECK_THROWS_AS(next_hops_on_shortest_path(disconnected, d, 0, 2), Error);
    CHECK_THROWS_AS(d.hops(0, 2), Error);
}

TEST_CASE("distance table properties on bundled topologies") {
    for (const Topology& topo : {builtin_grid3x3(), builtin_att25()}) {
        HopDistanceTable d = hop_distances(topo);
        const int n = topo.n_nodes();
        // symmetry of bidirectional graphs
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j) CHECK(d.hops(i, j) == d.hops(j, i));
        // unit-weight Lipschitz along every edge
        for (auto [u, v] : topo.edges())
            for (NodeId t = 0; t < n; ++t)
                CHECK(std::abs(d.hops(u, t) - d.hops(v, t)) <= 1);
        // triangle inequality through every midpoint
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j)
                for (NodeId k = 0; k < n; ++k)
                    CHECK(d.hops(i, k) <= d.hops(i, j) + d.hops(j, k));
        // BFS agrees with Bellman-Ford relaxation
        auto bf = oracles::bellman_ford_distances(topo);
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j) CHECK(d.hops(i, j) == bf[i][j]);
    }
}

TEST_CASE("serialize round-trips") {
    CHECK(load_topology(serialize_topology(builtin_grid3x3())) == builtin_grid3x3());
    Topology att = builtin_att25();
    CHECK(load_topology(serialize_topology(att)) == att);

    // random symmetric graphs
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + rng.uniform_int(10);
        std::vector<std::pair<NodeId, NodeId>> directed;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (rng.bernoulli(0.4)) {
                    directed.emplace_back(u, v);
                    directed.emplace_back(v, u);
                }
        if (directed.empty()) continue;
        Topology t(n, directed);
        CHECK(load_topology(serialize_topology(t)) == t);
    }
}

TEST_CASE("topology hash distinguishes graphs") {
    CHECK(topology_hash(builtin_grid3x3()) != topology_hash(builtin_att25()));
    CHECK(topology_hash(builtin_grid3x3()) == topology_hash(builtin_grid3x3_from_file()));
}
