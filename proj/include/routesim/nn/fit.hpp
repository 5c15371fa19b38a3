#pragma once

#include <vector>

#include "routesim/nn/network.hpp"
#include "routesim/nn/optimizer.hpp"

namespace routesim::nn {

// One supervised example: a full target vector over output units. Units with
// mask 0 are excluded from the loss (empty mask = all active).
struct TrainSample {
    Vector input;
    Vector target;
    Vector mask;
};

// Mean squared error over the sample's active output units, evaluated from a
// zero hidden state.
inline double sample_loss(const RecurrentQNet& net, const TrainSample& s) {
    Vector q = net.forward(s.input, net.initial_state());
    double loss = 0.0;
    double active = 0.0;
    for (int u = 0; u < q.size(); ++u) {
        const double m = s.mask.size() ? s.mask[u] : 1.0;
        loss += m * (q[u] - s.target[u]) * (q[u] - s.target[u]);
        active += m;
    }
    return active > 0 ? loss / active : 0.0;
}

// Sample-by-sample gradient descent over the dataset; returns the per-epoch
// mean training loss (evaluated before each update).
inline std::vector<double> supervised_fit(RecurrentQNet& net, Optimizer& opt,
                                          const std::vector<TrainSample>& data, int epochs) {
    std::vector<double> curve;
    curve.reserve(epochs);
    std::vector<double> grads(net.param_count());
    const HiddenState zero = net.initial_state();
    for (int e = 0; e < epochs; ++e) {
        double epoch_loss = 0.0;
        for (const TrainSample& s : data) {
            RecurrentQNet::BatchCache cache;
            Matrix q = net.forward_batch(s.input, zero.h, zero.c, nullptr, nullptr, &cache);
            double active = 0.0;
            for (int u = 0; u < q.rows(); ++u)
                active += s.mask.size() ? s.mask[u] : 1.0;
            if (active <= 0) continue;
            Matrix dq(q.rows(), 1);
            double loss = 0.0;
            for (int u = 0; u < q.rows(); ++u) {
                const double m = s.mask.size() ? s.mask[u] : 1.0;
                const double diff = q(u, 0) - s.target[u];
                loss += m * diff * diff;
                dq(u, 0) = 2.0 * m * diff / active;
            }
            epoch_loss += loss / active;
            std::fill(grads.begin(), grads.end(), 0.0);
            net.backward_batch(cache, dq, grads);
            opt.step(net.params(), grads);
        }
        curve.push_back(data.empty() ? 0.0 : epoch_loss / data.size());
    }
    return curve;
}

}  // namespace routesim::nn
