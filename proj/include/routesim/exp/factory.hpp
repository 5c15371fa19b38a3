#pragma once

#include <memory>
#include <string>

#include "routesim/dqrc/agent.hpp"
#include "routesim/exp/scenario.hpp"
#include "routesim/policies/backpressure.hpp"
#include "routesim/policies/q_routing.hpp"
#include "routesim/policies/shortest_path.hpp"
#include "routesim/policy.hpp"

namespace routesim {

inline std::unique_ptr<Policy> make_policy(const Topology& topo, const ScenarioConfig& cfg,
                                           std::string name = "") {
    if (name.empty()) name = cfg.policy;
    if (name == "shortest_path") return std::make_unique<ShortestPathPolicy>(topo);
    if (name == "backpressure") return std::make_unique<BackpressurePolicy>(topo);
    if (name == "q_routing") return std::make_unique<QRoutingPolicy>(topo, cfg.q_alpha);
    if (name == "dqrc" || name == "dqr" || name == "dqrc_nocomm" || name == "dqrc_nolstm") {
        dqrc::EncoderConfig enc{cfg.k, cfg.m, topo.n_nodes()};
        dqrc::AgentHyperParams hp;
        hp.alpha = cfg.learning_rate;
        hp.optimizer = nn::optimizer_from_string(cfg.optimizer);
        hp.train_every_decision = cfg.train_every_decision;
        dqrc::ArchConfig arch{cfg.neurons, cfg.hidden_layers};
        return std::make_unique<dqrc::DqrcPolicy>(topo, enc, dqrc::variant_from_string(name), hp,
                                                  arch, cfg.train_seed);
    }
    throw ParseError("unknown policy: " + name);
}

}  // namespace routesim
