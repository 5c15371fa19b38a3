#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <vector>

#include <json.hpp>

#include "routesim/policy.hpp"
#include "routesim/topology.hpp"

namespace routesim {

// Tabular Q-routing: q[n][d][a] estimates the remaining delivery time when
// node n forwards a packet for destination d to the neighbor at adjacency
// index a. Updated from per-hop rewards with the neighbor's own greedy
// estimate as bootstrap.
class QRoutingPolicy final : public Policy {
public:
    explicit QRoutingPolicy(const Topology& topo, double alpha = 0.7)
        : topo_(&topo), alpha_(alpha) {
        q_.resize(topo.n_nodes());
        for (NodeId n = 0; n < topo.n_nodes(); ++n)
            q_[n].assign(static_cast<std::size_t>(topo.n_nodes()) * topo.degree(n), 0.0);
    }

    NodeId decide(const Decision& d) override {
        const auto& adj = topo_->neighbors(d.node);
        if (epsilon_ > 0.0 && d.rng->bernoulli(epsilon_))
            return adj[d.rng->uniform_int(static_cast<int>(adj.size()))];
        return adj[greedy_index(d.node, d.packet->dst)];
    }

    void on_hop_complete(const HopFeedback& fb) override {
        if (!training_) return;
        const int ai = topo_->neighbor_index(fb.from, fb.to);
        double target = fb.reward.total();
        if (!fb.terminal) target += best_estimate(fb.to, fb.dst);
        double& entry = q_at(fb.from, fb.dst, ai);
        entry += alpha_ * (target - entry);
    }

    bool learning() const override { return true; }
    void set_training(bool on) override { training_ = on; }
    void set_epsilon(double eps) override { epsilon_ = eps; }

    std::unique_ptr<Policy> clone() const override {
        return std::make_unique<QRoutingPolicy>(*this);
    }

    void save_checkpoint(const std::string& dir) const override {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        nlohmann::json j;
        j["policy"] = "q_routing";
        j["alpha"] = alpha_;
        j["topology_hash"] = topology_hash(*topo_);
        j["table"] = q_;
        std::ofstream out(dir + "/qtable.json");
        if (!out) throw IoError("cannot write checkpoint: " + dir);
        out << j.dump(2) << "\n";
    }

    void load_checkpoint(const std::string& dir) override {
        std::ifstream in(dir + "/qtable.json");
        if (!in) throw IoError("cannot read checkpoint: " + dir + "/qtable.json");
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.at("topology_hash").get<std::uint64_t>() != topology_hash(*topo_))
            throw Error("checkpoint topology hash mismatch");
        std::vector<std::vector<double>> table = j.at("table");
        if (table.size() != q_.size()) throw Error("checkpoint table shape mismatch");
        for (std::size_t n = 0; n < table.size(); ++n)
            if (table[n].size() != q_[n].size()) throw Error("checkpoint table shape mismatch");
        q_ = std::move(table);
    }

    double& q_at(NodeId n, NodeId dst, int adj_index) {
        return q_[n][static_cast<std::size_t>(dst) * topo_->degree(n) + adj_index];
    }
    double q_at(NodeId n, NodeId dst, int adj_index) const {
        return q_[n][static_cast<std::size_t>(dst) * topo_->degree(n) + adj_index];
    }

    // Lowest-index argmin over the node's actions.
    int greedy_index(NodeId n, NodeId dst) const {
        const int deg = topo_->degree(n);
        int best = 0;
        double best_q = std::numeric_limits<double>::infinity();
        for (int i = 0; i < deg; ++i) {
            const double v = q_at(n, dst, i);
            if (v < best_q) {
                best_q = v;
                best = i;
            }
        }
        return best;
    }

    double best_estimate(NodeId n, NodeId dst) const {
        return q_at(n, dst, greedy_index(n, dst));
    }

private:
    const Topology* topo_;
    double alpha_;
    double epsilon_ = 0.0;
    bool training_ = false;
    std::vector<std::vector<double>> q_;  // [node][dst * degree + adj_index]
};

}  // namespace routesim
