#pragma once

#include <cstdint>
#include <vector>

#include "routesim/nn/network.hpp"
#include "routesim/rng.hpp"
#include "routesim/topology.hpp"

namespace routesim::dqrc {

// One decision epoch as stored for replay. Hidden states are point-in-time
// copies; terminal transitions carry zero successor placeholders.
struct Transition {
    nn::Vector s;
    nn::Vector h, c;
    double r = 0.0;
    NodeId next_node = -1;
    int action_index = -1;
    nn::Vector s_next;
    nn::Vector h_next, c_next;
    bool terminal = false;
};

// Fixed-capacity ring; oldest entries evicted first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity = 100) : capacity_(capacity) {}

    void push(Transition t) {
        if (static_cast<int>(buf_.size()) < capacity_) {
            buf_.push_back(std::move(t));
        } else {
            buf_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    int size() const { return static_cast<int>(buf_.size()); }
    int capacity() const { return capacity_; }
    const Transition& at(int i) const { return buf_[i]; }

    // Uniform sample of k distinct indices (partial Fisher-Yates).
    std::vector<int> sample_indices(Rng& rng, int k) const {
        const int n = size();
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k && i < n; ++i) {
            const int j = i + rng.uniform_int(n - i);
            std::swap(idx[i], idx[j]);
            out.push_back(idx[i]);
        }
        return out;
    }

private:
    int capacity_;
    std::vector<Transition> buf_;
    int next_ = 0;
};

}  // namespace routesim::dqrc
