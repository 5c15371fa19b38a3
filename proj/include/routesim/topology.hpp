#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "routesim/error.hpp"

namespace routesim {

using NodeId = std::int32_t;

// Immutable directed graph of router nodes. Adjacency lists are kept sorted
// ascending; that order defines the action-index <-> neighbor mapping used by
// every policy and network output layer.
class Topology {
public:
    Topology(int n_nodes, std::vector<std::pair<NodeId, NodeId>> directed_edges,
             std::string name = "")
        : n_nodes_(n_nodes), name_(std::move(name)), adjacency_(n_nodes) {
        if (n_nodes <= 0) throw ParseError("topology must have at least one node");
        std::set<std::pair<NodeId, NodeId>> seen;
        for (auto [u, v] : directed_edges) {
            if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes)
                throw ParseError("edge endpoint out of range");
            if (u == v) throw ParseError("self-loop not allowed");
            if (!seen.insert({u, v}).second) throw ParseError("duplicate edge");
        }
        edges_.assign(seen.begin(), seen.end());
        for (auto [u, v] : edges_) adjacency_[u].push_back(v);
        // set iteration is lexicographic, so each list is already sorted
    }

    int n_nodes() const { return n_nodes_; }
    const std::string& name() const { return name_; }
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::vector<NodeId>& neighbors(NodeId n) const { return adjacency_[n]; }
    int degree(NodeId n) const { return static_cast<int>(adjacency_[n].size()); }

    // Index of v within neighbors(n), or -1.
    int neighbor_index(NodeId n, NodeId v) const {
        const auto& adj = adjacency_[n];
        auto it = std::lower_bound(adj.begin(), adj.end(), v);
        if (it == adj.end() || *it != v) return -1;
        return static_cast<int>(it - adj.begin());
    }

    bool has_edge(NodeId u, NodeId v) const { return neighbor_index(u, v) >= 0; }

    bool is_symmetric() const {
        for (auto [u, v] : edges_)
            if (!has_edge(v, u)) return false;
        return true;
    }

    bool is_connected() const {
        std::vector<char> seen(n_nodes_, 0);
        std::deque<NodeId> frontier{0};
        seen[0] = 1;
        int count = 1;
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop_front();
            for (NodeId v : adjacency_[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    frontier.push_back(v);
                }
        }
        return count == n_nodes_;
    }

    const std::vector<std::string>& node_labels() const { return node_labels_; }
    void set_node_labels(std::vector<std::string> labels) { node_labels_ = std::move(labels); }

    bool operator==(const Topology& o) const {
        return n_nodes_ == o.n_nodes_ && edges_ == o.edges_;
    }

private:
    int n_nodes_;
    std::string name_;
    std::vector<std::pair<NodeId, NodeId>> edges_;  // directed, sorted
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::string> node_labels_;
};

// Edge-list document: first line "nodes <N>", then one "u v" per line, each
// declaring a bidirectional pair. '#' starts a comment line.
inline Topology load_topology(const std::string& text, std::string name = "") {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int n_nodes = -1;
    std::vector<std::pair<NodeId, NodeId>> directed;
    std::set<std::pair<NodeId, NodeId>> seen;
    auto fail = [&](const std::string& msg) {
        throw ParseError("edge list line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n_nodes < 0) {
            std::string kw;
            if (!(ls >> kw)) continue;  // blank before header
            int n = 0;
            if (kw != "nodes" || !(ls >> n) || n <= 0) fail("expected header 'nodes <N>'");
            std::string rest;
            if (ls >> rest) fail("trailing tokens after node count");
            n_nodes = n;
            continue;
        }
        long u, v;
        if (!(ls >> u)) continue;  // blank line
        if (!(ls >> v)) fail("expected 'u v'");
        std::string rest;
        if (ls >> rest) fail("trailing tokens after edge");
        if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes) fail("node id out of range");
        if (u == v) fail("self-loop not allowed");
        auto a = static_cast<NodeId>(u), b = static_cast<NodeId>(v);
        if (!seen.insert(std::minmax(a, b)).second) fail("duplicate edge");
        directed.emplace_back(a, b);
        directed.emplace_back(b, a);
    }
    if (n_nodes < 0) throw ParseError("edge list: missing 'nodes <N>' header");
    return Topology(n_nodes, std::move(directed), std::move(name));
}

inline Topology load_topology_file(const std::string& path, std::string name = "") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open topology file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (name.empty()) name = path;
    return load_topology(buf.str(), std::move(name));
}

// Canonical edge-list document for a symmetric topology; inverse of
// load_topology.
inline std::string serialize_topology(const Topology& topo) {
    if (!topo.is_symmetric())
        throw Error("serialize_topology requires a symmetric topology");
    std::ostringstream out;
    out << "nodes " << topo.n_nodes() << "\n";
    for (auto [u, v] : topo.edges())
        if (u < v) out << u << " " << v << "\n";
    return out.str();
}

// FNV-1a over the canonical serialization; used to bind checkpoints to the
// topology they were trained on.
inline std::uint64_t topology_hash(const Topology& topo) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : serialize_topology(topo)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

// All-pairs minimum hop counts. Unreachable pairs hold an explicit sentinel
// exposed only through reachable()/try_hops().
class HopDistanceTable {
public:
    HopDistanceTable(int n, std::vector<int> dist) : n_(n), dist_(std::move(dist)) {}

    bool reachable(NodeId from, NodeId to) const { return at(from, to) != kUnreachable; }

    int hops(NodeId from, NodeId to) const {
        int d = at(from, to);
        if (d == kUnreachable) throw Error("hops() on unreachable pair");
        return d;
    }

    std::optional<int> try_hops(NodeId from, NodeId to) const {
        int d = at(from, to);
        if (d == kUnreachable) return std::nullopt;
        return d;
    }

    int n_nodes() const { return n_; }

    static constexpr int unreachable_sentinel() { return kUnreachable; }

private:
    static constexpr int kUnreachable = -1;
    int at(NodeId from, NodeId to) const {
        return dist_[static_cast<std::size_t>(from) * n_ + to];
    }
    int n_;
    std::vector<int> dist_;
};

// Unit-weight BFS from every source.
inline HopDistanceTable hop_distances(const Topology& topo) {
    const int n = topo.n_nodes();
    std::vector<int> dist(static_cast<std::size_t>(n) * n, HopDistanceTable::unreachable_sentinel());
    std::vector<int> row(n);
    std::deque<NodeId> frontier;
    for (NodeId s = 0; s < n; ++s) {
        std::fill(row.begin(), row.end(), HopDistanceTable::unreachable_sentinel());
        row[s] = 0;
        frontier.assign(1, s);
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop_front();
            for (NodeId v : topo.neighbors(u))
                if (row[v] == HopDistanceTable::unreachable_sentinel()) {
                    row[v] = row[u] + 1;
                    frontier.push_back(v);
                }
        }
        std::copy(row.begin(), row.end(), dist.begin() + static_cast<std::size_t>(s) * n);
    }
    return HopDistanceTable(n, std::move(dist));
}

// All neighbors of n that lie on some minimum-hop path to d, ascending.
inline std::vector<NodeId> next_hops_on_shortest_path(const Topology& topo,
                                                      const HopDistanceTable& table,
                                                      NodeId n, NodeId d) {
    if (n == d) throw Error("next_hops_on_shortest_path: already at destination");
    if (!table.reachable(n, d))
        throw Error("next_hops_on_shortest_path: destination unreachable");
    std::vector<NodeId> out;
    const int dn = table.hops(n, d);
    for (NodeId v : topo.neighbors(n))
        if (table.reachable(v, d) && 1 + table.hops(v, d) == dn) out.push_back(v);
    return out;  // adjacency is sorted, so out is ascending
}

// The 3x3 grid: node i at (row i/3, col i%3), links between grid neighbors.
inline Topology builtin_grid3x3() {
    std::vector<std::pair<NodeId, NodeId>> directed;
    auto link = [&](NodeId u, NodeId v) {
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    };
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            NodeId i = r * 3 + c;
            if (c < 2) link(i, i + 1);
            if (r < 2) link(i, i + 3);
        }
    return Topology(9, std::move(directed), "grid3x3");
}

namespace detail {
inline const std::array<const char*, 25>& att25_labels() {
    static const std::array<const char*, 25> labels = {
        "New York City", "Newark",        "Philadelphia", "Washington DC", "Cambridge",
        "Buffalo",       "Pittsburgh",    "Cleveland",    "Chicago",       "Detroit",
        "Indianapolis",  "St. Louis",     "Nashville",    "Atlanta",       "Orlando",
        "Miami",         "New Orleans",   "Houston",      "Dallas",        "Kansas City",
        "Denver",        "Salt Lake City","Phoenix",      "Los Angeles",   "San Francisco"};
    return labels;
}
}  // namespace detail

inline std::string default_data_dir() {
    if (const char* env = std::getenv("ROUTE_SIM_DATA_DIR")) return env;
#ifdef ROUTESIM_DATA_DIR
    return ROUTESIM_DATA_DIR;
#else
    return "data";
#endif
}

// AT&T North America backbone (25 nodes, 56 bidirectional pairs), loaded from
// the bundled edge list.
inline Topology builtin_att25(const std::string& data_dir = default_data_dir()) {
    Topology topo = load_topology_file(data_dir + "/att25.edges", "att25");
    if (topo.n_nodes() != 25 || topo.edges().size() != 112)
        throw ParseError("att25.edges: expected 25 nodes and 56 bidirectional pairs");
    const auto& labels = detail::att25_labels();
    topo.set_node_labels(std::vector<std::string>(labels.begin(), labels.end()));
    return topo;
}

inline Topology builtin_grid3x3_from_file(const std::string& data_dir = default_data_dir()) {
    return load_topology_file(data_dir + "/grid3x3.edges", "grid3x3");
}

}  // namespace routesim
