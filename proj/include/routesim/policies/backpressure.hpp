#pragma once

#include <limits>
#include <memory>

#include "routesim/policy.hpp"
#include "routesim/topology.hpp"

namespace routesim {

// Tailored backpressure for FIFO queues: the HOL packet goes to the neighbor
// holding the fewest packets with the same destination. Ties fall through to
// hop distance, then neighbor index.
class BackpressurePolicy final : public Policy {
public:
    explicit BackpressurePolicy(const Topology& topo)
        : topo_(&topo), dist_(hop_distances(topo)) {}

    NodeId decide(const Decision& d) override {
        const NodeId dst = d.packet->dst;
        NodeId best = -1;
        int best_count = std::numeric_limits<int>::max();
        int best_dist = std::numeric_limits<int>::max();
        for (const NeighborInfo& nb : d.neighbors) {
            const int count = (*nb.dest_counts)[dst];
            const int hop = dist_.try_hops(nb.id, dst).value_or(std::numeric_limits<int>::max());
            if (count < best_count || (count == best_count && hop < best_dist)) {
                best = nb.id;
                best_count = count;
                best_dist = hop;
            }
        }
        return best;
    }

    std::unique_ptr<Policy> clone() const override {
        return std::make_unique<BackpressurePolicy>(*this);
    }

private:
    const Topology* topo_;
    HopDistanceTable dist_;
};

}  // namespace routesim
