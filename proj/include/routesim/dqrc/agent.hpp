#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "routesim/dqrc/encoder.hpp"
#include "routesim/dqrc/replay.hpp"
#include "routesim/nn/network.hpp"
#include "routesim/nn/optimizer.hpp"
#include "routesim/policy.hpp"
#include "routesim/topology.hpp"

namespace routesim::dqrc {

struct AgentHyperParams {
    double alpha = 1e-3;
    nn::OptimizerKind optimizer = nn::OptimizerKind::rmsprop;
    bool train_every_decision = true;
    int batch_size = 16;
    int replay_capacity = 100;
};

// Network width knobs. neurons scales every hidden layer together; the
// first-layer subsets get a quarter of it each.
struct ArchConfig {
    int neurons = 128;
    int hidden_layers = 2;  // dense layers between the first layer and the LSTM

    int subset_width() const { return std::max(1, neurons / 4); }
    std::vector<int> trunk() const { return std::vector<int>(hidden_layers, neurons); }
};

// The distributed agent set. Each node owns an independent recurrent value
// network whose outputs estimate remaining delivery time per neighbor; greedy
// selection takes the minimum estimate. Training follows per-hop feedback:
// store the transition, sample a batch, recompute bootstrap values with the
// receiving agents' current parameters, and descend the squared error.
class DqrcPolicy final : public Policy {
public:
    DqrcPolicy(const Topology& topo, EncoderConfig enc, Variant variant, AgentHyperParams hp,
               ArchConfig arch, std::uint64_t seed)
        : topo_(&topo), enc_(enc), variant_(variant), hp_(hp), arch_(arch),
          replay_rng_(Rng::substream(seed, "replay")) {
        enc_.n_nodes = topo.n_nodes();
        agents_.reserve(topo.n_nodes());
        for (NodeId n = 0; n < topo.n_nodes(); ++n) {
            nn::NetworkSpec spec;
            spec.block_widths = enc_.block_widths(variant_);
            spec.subset_width = arch_.subset_width();
            spec.trunk_widths = arch_.trunk();
            spec.lstm_width = arch_.neurons;
            spec.use_lstm = (variant_ != Variant::no_lstm);
            spec.output_width = topo.degree(n);
            agents_.push_back(std::make_unique<Agent>(spec, hp_));
            Rng init = Rng::substream(seed, "init", static_cast<std::uint64_t>(n));
            agents_.back()->net.init_weights(init);
            agents_.back()->hidden = agents_.back()->net.initial_state();
        }
    }

    DqrcPolicy(const DqrcPolicy& o)
        : topo_(o.topo_), enc_(o.enc_), variant_(o.variant_), hp_(o.hp_), arch_(o.arch_),
          training_(o.training_), epsilon_(o.epsilon_), replay_rng_(o.replay_rng_),
          pending_(o.pending_) {
        agents_.reserve(o.agents_.size());
        for (const auto& a : o.agents_) agents_.push_back(std::make_unique<Agent>(*a));
    }

    NodeId decide(const Decision& d) override {
        Agent& agent = *agents_[d.node];
        EncodeInput in;
        in.dst = d.packet->dst;
        in.future_dsts = d.future_dsts;
        in.recent_actions = d.recent_actions;
        in.neighbors = &d.neighbors;
        nn::Vector s = encode_state(in, enc_, variant_);

        const nn::HiddenState before = agent.hidden;
        nn::HiddenState after;
        nn::Vector q = agent.net.forward(s, before, &after);
        agent.hidden = after;

        const auto& adj = topo_->neighbors(d.node);
        int action;
        if (epsilon_ > 0.0 && d.rng->bernoulli(epsilon_)) {
            action = d.rng->uniform_int(static_cast<int>(adj.size()));
        } else {
            action = argmin(q);
        }
        if (training_)
            pending_[d.packet->id] = PendingDecision{d.node, std::move(s), before.h, before.c,
                                                     action};
        return adj[action];
    }

    void on_hop_complete(const HopFeedback& fb) override {
        if (!training_) return;
        auto it = pending_.find(fb.packet_id);
        if (it == pending_.end()) return;  // decided before training was enabled
        PendingDecision pd = std::move(it->second);
        pending_.erase(it);

        Transition t;
        t.s = std::move(pd.s);
        t.h = std::move(pd.h);
        t.c = std::move(pd.c);
        t.action_index = pd.action_index;
        t.r = fb.reward.total();
        t.next_node = fb.to;
        t.terminal = fb.terminal;
        if (fb.terminal) {
            t.s_next = nn::Vector::Zero(enc_.state_width(variant_));
            t.h_next = nn::Vector::Zero(arch_.neurons);
            t.c_next = nn::Vector::Zero(arch_.neurons);
        } else {
            EncodeInput in;
            in.dst = fb.dst;
            in.recent_actions = fb.receiver->recent_actions;
            in.neighbors = &fb.receiver->neighbors;
            t.s_next = encode_state(in, enc_, variant_);
            t.h_next = agents_[fb.to]->hidden.h;
            t.c_next = agents_[fb.to]->hidden.c;
        }
        agents_[pd.node]->replay.push(std::move(t));
        if (hp_.train_every_decision) train_step(pd.node);
    }

    // Bootstrap target: the receiving agent's greedy estimate with its
    // current parameters, zeroed on terminal hops.
    double compute_target(const Transition& t) const {
        if (t.terminal) return t.r;
        const Agent& v = *agents_[t.next_node];
        nn::Vector q = v.net.forward(t.s_next, {t.h_next, t.c_next});
        return t.r + q.minCoeff();
    }

    // One descent step on a uniform batch from node n's replay; no-op until
    // the buffer holds a full batch.
    void train_step(NodeId n) {
        Agent& agent = *agents_[n];
        const int B = hp_.batch_size;
        if (agent.replay.size() < B) return;
        std::vector<int> idx = agent.replay.sample_indices(replay_rng_, B);

        const int in_w = enc_.state_width(variant_);
        nn::Matrix X(in_w, B), H(arch_.neurons, B), C(arch_.neurons, B);
        std::vector<double> y(B);
        // Group non-terminal samples by receiver so each agent's bootstrap
        // forward runs as one batch.
        std::unordered_map<NodeId, std::vector<int>> by_receiver;
        for (int j = 0; j < B; ++j) {
            const Transition& t = agent.replay.at(idx[j]);
            X.col(j) = t.s;
            H.col(j) = t.h;
            C.col(j) = t.c;
            y[j] = t.r;
            if (!t.terminal) by_receiver[t.next_node].push_back(j);
        }
        for (auto& [v, cols] : by_receiver) {
            const Agent& recv = *agents_[v];
            nn::Matrix Xn(in_w, cols.size()), Hn(arch_.neurons, cols.size()),
                Cn(arch_.neurons, cols.size());
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const Transition& t = agent.replay.at(idx[cols[c]]);
                Xn.col(c) = t.s_next;
                Hn.col(c) = t.h_next;
                Cn.col(c) = t.c_next;
            }
            nn::Matrix qn = recv.net.forward_batch(Xn, Hn, Cn);
            for (std::size_t c = 0; c < cols.size(); ++c)
                y[cols[c]] += qn.col(c).minCoeff();
        }

        nn::RecurrentQNet::BatchCache cache;
        nn::Matrix q = agent.net.forward_batch(X, H, C, nullptr, nullptr, &cache);
        nn::Matrix dq = nn::Matrix::Zero(q.rows(), B);
        for (int j = 0; j < B; ++j) {
            const int a = agent.replay.at(idx[j]).action_index;
            dq(a, j) = 2.0 * (q(a, j) - y[j]) / B;
        }
        std::fill(agent.grads.begin(), agent.grads.end(), 0.0);
        agent.net.backward_batch(cache, dq, agent.grads);
        agent.opt.step(agent.net.params(), agent.grads);
    }

    bool learning() const override { return true; }
    void set_training(bool on) override { training_ = on; }
    void set_epsilon(double eps) override { epsilon_ = eps; }

    void begin_episode() override {
        for (auto& a : agents_) a->hidden = a->net.initial_state();
        pending_.clear();
    }

    std::unique_ptr<Policy> clone() const override {
        return std::make_unique<DqrcPolicy>(*this);
    }

    void reseed(std::uint64_t seed) override { replay_rng_ = Rng::substream(seed, "replay"); }

    void save_checkpoint(const std::string& dir) const override {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        nlohmann::json j;
        j["policy"] = variant_to_string(variant_);
        j["k"] = enc_.k;
        j["m"] = enc_.m;
        j["n_nodes"] = enc_.n_nodes;
        j["neurons"] = arch_.neurons;
        j["hidden_layers"] = arch_.hidden_layers;
        j["topology_hash"] = topology_hash(*topo_);
        std::ofstream mf(dir + "/manifest.json");
        if (!mf) throw IoError("cannot write checkpoint manifest: " + dir);
        mf << j.dump(2) << "\n";
        for (std::size_t n = 0; n < agents_.size(); ++n)
            write_params(dir + "/agent_" + std::to_string(n) + ".params", agents_[n]->net);
    }

    void load_checkpoint(const std::string& dir) override {
        std::ifstream mf(dir + "/manifest.json");
        if (!mf) throw IoError("cannot read checkpoint manifest: " + dir);
        nlohmann::json j = nlohmann::json::parse(mf);
        if (j.at("policy").get<std::string>() != variant_to_string(variant_))
            throw Error("checkpoint policy mismatch: expected " + variant_to_string(variant_));
        if (j.at("topology_hash").get<std::uint64_t>() != topology_hash(*topo_))
            throw Error("checkpoint topology hash mismatch");
        if (j.at("k").get<int>() != enc_.k || j.at("m").get<int>() != enc_.m ||
            j.at("n_nodes").get<int>() != enc_.n_nodes ||
            j.at("neurons").get<int>() != arch_.neurons ||
            j.at("hidden_layers").get<int>() != arch_.hidden_layers)
            throw Error("checkpoint configuration mismatch");
        for (std::size_t n = 0; n < agents_.size(); ++n)
            read_params(dir + "/agent_" + std::to_string(n) + ".params", agents_[n]->net);
    }

    // Introspection for tests and pre-training.
    nn::RecurrentQNet& agent_net(NodeId n) { return agents_[n]->net; }
    const nn::RecurrentQNet& agent_net(NodeId n) const { return agents_[n]->net; }
    const nn::HiddenState& agent_hidden(NodeId n) const { return agents_[n]->hidden; }
    ReplayBuffer& agent_replay(NodeId n) { return agents_[n]->replay; }
    const EncoderConfig& encoder_config() const { return enc_; }
    Variant variant() const { return variant_; }
    const ArchConfig& arch() const { return arch_; }

private:
    struct PendingDecision {
        NodeId node;
        nn::Vector s, h, c;
        int action_index;
    };

    struct Agent {
        Agent(const nn::NetworkSpec& spec, const AgentHyperParams& hp)
            : net(spec), opt(hp.optimizer, hp.alpha), replay(hp.replay_capacity),
              grads(net.param_count(), 0.0) {}
        nn::RecurrentQNet net;
        nn::Optimizer opt;
        ReplayBuffer replay;
        nn::HiddenState hidden;
        std::vector<double> grads;
    };

    static int argmin(const nn::Vector& q) {
        int best = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (int i = 0; i < q.size(); ++i)
            if (q[i] < best_v) {
                best_v = q[i];
                best = i;
            }
        return best;
    }

    static void write_params(const std::string& path, const nn::RecurrentQNet& net) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path);
        const char magic[8] = {'R', 'S', 'Q', 'N', 'E', 'T', '1', '\n'};
        out.write(magic, 8);
        const std::int64_t count = net.param_count();
        out.write(reinterpret_cast<const char*>(&count), sizeof(count));
        out.write(reinterpret_cast<const char*>(net.params().data()),
                  static_cast<std::streamsize>(count * sizeof(double)));
    }

    static void read_params(const std::string& path, nn::RecurrentQNet& net) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read " + path);
        char magic[8];
        in.read(magic, 8);
        if (std::string(magic, 8) != "RSQNET1\n") throw ParseError("bad params file: " + path);
        std::int64_t count = 0;
        in.read(reinterpret_cast<char*>(&count), sizeof(count));
        if (count != net.param_count()) throw Error("params count mismatch: " + path);
        in.read(reinterpret_cast<char*>(net.params().data()),
                static_cast<std::streamsize>(count * sizeof(double)));
        if (!in) throw ParseError("truncated params file: " + path);
    }

    const Topology* topo_;
    EncoderConfig enc_;
    Variant variant_;
    AgentHyperParams hp_;
    ArchConfig arch_;
    bool training_ = false;
    double epsilon_ = 0.0;
    Rng replay_rng_;
    std::vector<std::unique_ptr<Agent>> agents_;
    std::unordered_map<std::uint64_t, PendingDecision> pending_;
};

}  // namespace routesim::dqrc
