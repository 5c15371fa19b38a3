#pragma once

#include <memory>
#include <string>
#include <vector>

#include "routesim/error.hpp"
#include "routesim/packet.hpp"
#include "routesim/rng.hpp"

namespace routesim {

// Advertised view of one neighbor at decision time. queue_len and dest_counts
// come either from the live state (comm interval 0) or from the last
// snapshot; dest_counts[d] is the number of packets with destination d held
// at that neighbor.
struct NeighborInfo {
    NodeId id;
    int queue_len;
    const std::vector<int>* dest_counts;
};

// Everything a policy may observe when routing the HOL packet of `node`.
struct Decision {
    NodeId node;
    double now;
    const Packet* packet;                  // head of line
    std::vector<NodeId> future_dsts;       // destinations queued behind it, queue order
    std::vector<NodeId> recent_actions;    // next-hops of recently sent packets, newest first
    std::vector<NeighborInfo> neighbors;   // adjacency order
    Rng* rng;                              // exploration stream
};

// Receiver-side observation surfaced when a hop completes, used by learning
// policies to build the successor state.
struct ReceiverView {
    NodeId node;
    std::vector<NodeId> recent_actions;
    std::vector<NeighborInfo> neighbors;
};

struct HopFeedback {
    std::uint64_t packet_id;
    NodeId from, to, dst;
    HopReward reward;
    bool terminal;  // to == dst
    double now;
    const ReceiverView* receiver;  // null on terminal hops
};

// Routing-policy contract. decide() must return a neighbor of d.node; the
// simulator aborts the run otherwise. Non-learning policies ignore feedback.
class Policy {
public:
    virtual ~Policy() = default;

    virtual NodeId decide(const Decision& d) = 0;
    virtual void on_hop_complete(const HopFeedback&) {}

    virtual bool learning() const { return false; }
    virtual void set_training(bool) {}
    virtual void set_epsilon(double) {}

    // Offline episode boundary (recurrent state reset for agents that keep one).
    virtual void begin_episode() {}

    // Re-derive any policy-internal random streams from a run seed.
    virtual void reseed(std::uint64_t) {}

    virtual std::unique_ptr<Policy> clone() const = 0;

    virtual void save_checkpoint(const std::string&) const {
        throw Error("policy does not support checkpoints");
    }
    virtual void load_checkpoint(const std::string&) {
        throw Error("policy does not support checkpoints");
    }
};

}  // namespace routesim
