#pragma once

#include <utility>
#include <vector>

#include "routesim/error.hpp"
#include "routesim/packet.hpp"
#include "routesim/rng.hpp"

namespace routesim {

// Packet arrival process: deterministic inter-arrival interval with random
// endpoints. A distribution_ratio fraction of packets rides the fixed busy
// ingress->egress pair; the rest draw (src, dst) uniformly over ordered pairs.
struct TrafficConfig {
    double generated_interval = 0.5;  // ms between creations
    double distribution_ratio = 0.7;  // fraction on the busy pair
    NodeId busy_src = 0;
    NodeId busy_dst = 8;

    void validate(int n_nodes) const {
        if (generated_interval <= 0) throw Error("generated_interval must be > 0");
        if (distribution_ratio < 0 || distribution_ratio > 1)
            throw Error("distribution_ratio must be in [0,1]");
        if (busy_src == busy_dst) throw Error("busy_src must differ from busy_dst");
        if (busy_src < 0 || busy_dst < 0 || busy_src >= n_nodes || busy_dst >= n_nodes)
            throw Error("busy pair out of range");
    }
};

struct PacketDraw {
    NodeId src, dst;
};

inline PacketDraw draw_endpoints(const TrafficConfig& cfg, Rng& rng, int n_nodes) {
    if (rng.bernoulli(cfg.distribution_ratio)) return {cfg.busy_src, cfg.busy_dst};
    NodeId src = rng.uniform_int(n_nodes);
    NodeId dst = static_cast<NodeId>((src + 1 + rng.uniform_int(n_nodes - 1)) % n_nodes);
    return {src, dst};
}

inline Packet next_packet(const TrafficConfig& cfg, Rng& rng, double t, std::uint64_t id,
                          int n_nodes) {
    auto [src, dst] = draw_endpoints(cfg, rng, n_nodes);
    Packet p;
    p.id = id;
    p.src = src;
    p.dst = dst;
    p.created_at = t;
    p.node_arrival_at = t;
    p.hops = {src};
    return p;
}

// Frozen endpoint series for offline training: every episode replays the same
// packets.
inline std::vector<PacketDraw> make_packet_series(const TrafficConfig& cfg, Rng& rng, int count,
                                                  int n_nodes) {
    std::vector<PacketDraw> series;
    series.reserve(count);
    for (int i = 0; i < count; ++i) series.push_back(draw_endpoints(cfg, rng, n_nodes));
    return series;
}

// Piecewise-constant generated-interval schedule for online runs.
struct LoadSchedule {
    std::vector<std::pair<double, double>> changes;  // (time_ms, generated_interval)

    void validate(double horizon_ms) const {
        double prev = -1.0;
        for (auto [t, iv] : changes) {
            if (t <= prev) throw Error("schedule times must be strictly increasing");
            if (t >= horizon_ms) throw Error("schedule entry beyond run horizon");
            if (iv <= 0) throw Error("scheduled interval must be > 0");
            prev = t;
        }
    }

    double interval_at(double t, double base_interval) const {
        double iv = base_interval;
        for (auto [at, value] : changes) {
            if (t < at) break;
            iv = value;
        }
        return iv;
    }
};

}  // namespace routesim
