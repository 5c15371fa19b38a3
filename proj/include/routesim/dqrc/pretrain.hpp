#pragma once

#include <vector>

#include "routesim/dqrc/agent.hpp"
#include "routesim/dqrc/encoder.hpp"
#include "routesim/nn/fit.hpp"
#include "routesim/topology.hpp"

namespace routesim::dqrc {

// Supervised warm start from shortest-path hop counts: for node n and
// destination d, the label for neighbor a is (1 + hops(a, d)) * link_time —
// one hop to a plus the shortest remainder. Inputs carry only the
// current-destination block; everything else stays zero. Unreachable (a, d)
// pairs are masked out of the loss.
inline std::vector<nn::TrainSample> pretrain_dataset(const Topology& topo,
                                                     const HopDistanceTable& dist, NodeId n,
                                                     const EncoderConfig& enc, Variant variant,
                                                     double link_time_ms = 1.0) {
    std::vector<nn::TrainSample> data;
    const auto& adj = topo.neighbors(n);
    for (NodeId d = 0; d < topo.n_nodes(); ++d) {
        if (d == n) continue;
        nn::TrainSample s;
        EncodeInput in;
        in.dst = d;
        s.input = encode_state(in, enc, variant);
        s.target = nn::Vector::Zero(adj.size());
        s.mask = nn::Vector::Zero(adj.size());
        for (std::size_t a = 0; a < adj.size(); ++a)
            if (auto hops = dist.try_hops(adj[a], d)) {
                s.target[a] = (1 + *hops) * link_time_ms;
                s.mask[a] = 1.0;
            }
        data.push_back(std::move(s));
    }
    return data;
}

// Runs one epoch per episode for every agent; returns the per-episode loss
// averaged over agents.
inline std::vector<double> pretrain(DqrcPolicy& policy, const Topology& topo,
                                    nn::OptimizerKind kind, double alpha, int episodes,
                                    double link_time_ms = 1.0) {
    const HopDistanceTable dist = hop_distances(topo);
    std::vector<std::vector<nn::TrainSample>> datasets;
    std::vector<nn::Optimizer> opts;
    for (NodeId n = 0; n < topo.n_nodes(); ++n) {
        datasets.push_back(pretrain_dataset(topo, dist, n, policy.encoder_config(),
                                            policy.variant(), link_time_ms));
        opts.emplace_back(kind, alpha);
    }
    std::vector<double> curve;
    curve.reserve(episodes);
    for (int e = 0; e < episodes; ++e) {
        double total = 0.0;
        for (NodeId n = 0; n < topo.n_nodes(); ++n) {
            auto losses = nn::supervised_fit(policy.agent_net(n), opts[n], datasets[n], 1);
            total += losses.front();
        }
        curve.push_back(total / topo.n_nodes());
    }
    return curve;
}

}  // namespace routesim::dqrc
