// Test-only reference implementations, independent of the library paths they
// check.
#pragma once

#include <functional>
#include <vector>

#include "routesim/nn/network.hpp"
#include "routesim/topology.hpp"

namespace oracles {

// All-pairs hop counts by Bellman-Ford edge relaxation (the library uses
// per-source BFS).
inline std::vector<std::vector<int>> bellman_ford_distances(const routesim::Topology& topo) {
    const int n = topo.n_nodes();
    const int inf = std::numeric_limits<int>::max() / 2;
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, inf));
    for (int s = 0; s < n; ++s) dist[s][s] = 0;
    for (int iter = 0; iter < n; ++iter) {
        bool changed = false;
        for (auto [u, v] : topo.edges())
            for (int s = 0; s < n; ++s)
                if (dist[s][u] + 1 < dist[s][v]) {
                    dist[s][v] = dist[s][u] + 1;
                    changed = true;
                }
        if (!changed) break;
    }
    for (auto& row : dist)
        for (int& d : row)
            if (d >= inf) d = -1;  // unreachable
    return dist;
}

// Central finite differences over the flat parameter vector.
inline std::vector<double> finite_difference_grads(
    routesim::nn::RecurrentQNet& net, const std::function<double()>& loss, double step = 1e-5) {
    std::vector<double> grads(net.param_count());
    auto params = net.params();
    for (int i = 0; i < net.param_count(); ++i) {
        const double saved = params[i];
        params[i] = saved + step;
        const double up = loss();
        params[i] = saved - step;
        const double down = loss();
        params[i] = saved;
        grads[i] = (up - down) / (2.0 * step);
    }
    return grads;
}

inline double gradient_rel_error(const std::vector<double>& analytic,
                                 const std::vector<double>& numeric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max(1.0, std::abs(analytic[i]) + std::abs(numeric[i]));
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
    }
    return worst;
}

}  // namespace oracles
