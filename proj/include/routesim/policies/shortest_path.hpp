#pragma once

#include <memory>

#include "routesim/policy.hpp"
#include "routesim/topology.hpp"

namespace routesim {

// Static minimum-hop routing; ties go to the lowest-index neighbor.
class ShortestPathPolicy final : public Policy {
public:
    explicit ShortestPathPolicy(const Topology& topo)
        : topo_(&topo), dist_(hop_distances(topo)) {}

    NodeId decide(const Decision& d) override {
        auto hops = next_hops_on_shortest_path(*topo_, dist_, d.node, d.packet->dst);
        return hops.front();
    }

    std::unique_ptr<Policy> clone() const override {
        return std::make_unique<ShortestPathPolicy>(*this);
    }

private:
    const Topology* topo_;
    HopDistanceTable dist_;
};

}  // namespace routesim
