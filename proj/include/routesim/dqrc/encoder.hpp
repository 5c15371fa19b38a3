#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "routesim/nn/network.hpp"
#include "routesim/policy.hpp"
#include "routesim/topology.hpp"

namespace routesim::dqrc {

enum class Variant { full, no_comm, no_lstm, dqr };

inline Variant variant_from_string(const std::string& s) {
    if (s == "dqrc") return Variant::full;
    if (s == "dqrc_nocomm") return Variant::no_comm;
    if (s == "dqrc_nolstm") return Variant::no_lstm;
    if (s == "dqr") return Variant::dqr;
    throw ParseError("unknown dqrc variant: " + s);
}

inline std::string variant_to_string(Variant v) {
    switch (v) {
        case Variant::full: return "dqrc";
        case Variant::no_comm: return "dqrc_nocomm";
        case Variant::no_lstm: return "dqrc_nolstm";
        case Variant::dqr: return "dqr";
    }
    return "dqrc";
}

// State layout: four one-hot blocks over the node set — current destination,
// the next hops taken by the last k packets (newest first), the destinations
// of the next m queued packets, and the neighbor holding the longest
// advertised queue. The dqr variant keps only the first block.
struct EncoderConfig {
    int k = 5;
    int m = 5;
    int n_nodes = 0;

    int state_width(Variant variant) const {
        if (variant == Variant::dqr) return n_nodes;
        return (1 + k + m + 1) * n_nodes;
    }

    std::vector<int> block_widths(Variant variant) const {
        if (variant == Variant::dqr) return {n_nodes};
        return {n_nodes, k * n_nodes, m * n_nodes, n_nodes};
    }
};

inline nn::Vector one_hot(std::optional<NodeId> id, int n) {
    nn::Vector v = nn::Vector::Zero(n);
    if (id) v[*id] = 1.0;
    return v;
}

// Raw observation an agent encodes from. neighbors == nullptr zeroes the
// shared-information block (pre-training states, communication-free
// encodings).
struct EncodeInput {
    NodeId dst = 0;
    std::span<const NodeId> future_dsts;
    std::span<const NodeId> recent_actions;
    const std::vector<NeighborInfo>* neighbors = nullptr;
};

inline nn::Vector encode_state(const EncodeInput& in, const EncoderConfig& cfg, Variant variant) {
    const int n = cfg.n_nodes;
    nn::Vector s = nn::Vector::Zero(cfg.state_width(variant));
    s[in.dst] = 1.0;
    if (variant == Variant::dqr) return s;

    int off = n;
    for (int i = 0; i < cfg.k && i < static_cast<int>(in.recent_actions.size()); ++i)
        s[off + i * n + in.recent_actions[i]] = 1.0;
    off += cfg.k * n;
    for (int i = 0; i < cfg.m && i < static_cast<int>(in.future_dsts.size()); ++i)
        s[off + i * n + in.future_dsts[i]] = 1.0;
    off += cfg.m * n;
    if (variant != Variant::no_comm && in.neighbors && !in.neighbors->empty()) {
        NodeId max_node = -1;
        int max_len = -1;
        for (const NeighborInfo& nb : *in.neighbors)
            if (nb.queue_len > max_len) {  // adjacency order: first max = lowest index
                max_len = nb.queue_len;
                max_node = nb.id;
            }
        s[off + max_node] = 1.0;
    }
    return s;
}

}  // namespace routesim::dqrc
