#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "routesim/topology.hpp"

namespace routesim {

// Unit-size datagram. hops begins with src and gains one entry per completed
// transmission; reward_sum accumulates q+l per hop so that a delivered
// packet's reward trail telescopes to its total delivery time.
struct Packet {
    std::uint64_t id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    double created_at = 0.0;
    double node_arrival_at = 0.0;  // arrival time at the node currently holding it
    std::optional<double> delivered_at;
    std::vector<NodeId> hops;
    double reward_sum = 0.0;
};

// Per-hop reward: q is queueing time at the sender, l the link transmission
// time.
struct HopReward {
    double q = 0.0;
    double l = 0.0;
    double total() const { return q + l; }
};

}  // namespace routesim
