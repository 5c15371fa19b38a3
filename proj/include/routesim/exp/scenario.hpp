#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "routesim/dqrc/encoder.hpp"
#include "routesim/error.hpp"
#include "routesim/nn/optimizer.hpp"
#include "routesim/simkernel.hpp"
#include "routesim/topology.hpp"
#include "routesim/traffic.hpp"

namespace routesim {

// Full experiment description, parsed from a flat "key = value" file.
struct ScenarioConfig {
    std::string id = "scenario";
    std::string topology = "grid3x3";
    std::string policy = "dqrc";
    std::vector<std::string> policies;  // comparison set for sweeps/ablations

    // traffic
    double generated_interval = 0.5;
    double distribution_ratio = 0.7;
    NodeId busy_src = -1;  // -1: resolved from the topology default
    NodeId busy_dst = -1;

    // simulation
    std::string serialization = "link";
    double comm_interval = 0.0;
    double link_time = 1.0;

    // state encoder
    int k = 5;
    int m = 5;

    // agent hyper-parameters
    std::string optimizer = "rmsprop";
    double learning_rate = 1e-3;
    double q_alpha = 0.7;
    int neurons = 128;
    int hidden_layers = 2;
    bool train_every_decision = true;

    // exploration schedule
    double eps_start = 1.0;
    double eps_end = 0.05;
    int eps_decay_episodes = 200;
    double online_epsilon = 0.05;

    // protocol
    std::string mode = "offline_train";  // offline_train | offline_test | online
    double episode_ms = 100.0;
    int episodes = 1000;
    int training_packets = 1000;
    double test_duration_ms = 100.0;
    double online_horizon_ms = 12000.0;
    double window_ms = 100.0;
    std::uint64_t train_seed = 0;
    std::vector<std::uint64_t> seeds;  // empty: 0..49
    LoadSchedule schedule;
    std::string checkpoint_dir;

    double epsilon_for_episode(int episode) const {
        if (eps_decay_episodes <= 0 || episode >= eps_decay_episodes) return eps_end;
        return eps_start + (eps_end - eps_start) * episode / eps_decay_episodes;
    }

    std::vector<std::uint64_t> seed_list() const {
        if (!seeds.empty()) return seeds;
        std::vector<std::uint64_t> out(50);
        for (int i = 0; i < 50; ++i) out[i] = i;
        return out;
    }

    TrafficConfig traffic() const {
        TrafficConfig t;
        t.generated_interval = generated_interval;
        t.distribution_ratio = distribution_ratio;
        t.busy_src = busy_src;
        t.busy_dst = busy_dst;
        return t;
    }

    SimConfig sim(bool record_trace = false) const {
        SimConfig s;
        s.link_time_ms = link_time;
        s.serialization = serialization_from_string(serialization);
        s.comm_interval_ms = comm_interval;
        s.action_history_len = k;
        s.record_trace = record_trace;
        return s;
    }

    void validate() const {
        if (generated_interval <= 0 || episode_ms <= 0 || test_duration_ms <= 0 ||
            online_horizon_ms <= 0 || window_ms <= 0 || link_time <= 0)
            throw Error("scenario durations must be > 0");
        if (episodes <= 0 || training_packets <= 0) throw Error("scenario counts must be > 0");
        if (k < 0 || m < 0) throw Error("k and m must be >= 0");
        if (comm_interval < 0) throw Error("comm_interval must be >= 0");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

inline double to_double(const std::string& s, int lineno) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("scenario line " + std::to_string(lineno) + ": bad number '" + s + "'");
    }
}

inline long to_long(const std::string& s, int lineno) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("scenario line " + std::to_string(lineno) + ": bad integer '" + s + "'");
    }
}

inline bool to_bool(const std::string& s, int lineno) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError("scenario line " + std::to_string(lineno) + ": bad bool '" + s + "'");
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const std::string& text) {
    using detail::split;
    using detail::to_bool;
    using detail::to_double;
    using detail::to_long;
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("scenario line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "id") cfg.id = value;
        else if (key == "topology") cfg.topology = value;
        else if (key == "policy") cfg.policy = value;
        else if (key == "policies") cfg.policies = split(value, ',');
        else if (key == "generated_interval") cfg.generated_interval = to_double(value, lineno);
        else if (key == "distribution_ratio") cfg.distribution_ratio = to_double(value, lineno);
        else if (key == "busy_src") cfg.busy_src = static_cast<NodeId>(to_long(value, lineno));
        else if (key == "busy_dst") cfg.busy_dst = static_cast<NodeId>(to_long(value, lineno));
        else if (key == "serialization") cfg.serialization = value;
        else if (key == "comm_interval") cfg.comm_interval = to_double(value, lineno);
        else if (key == "link_time") cfg.link_time = to_double(value, lineno);
        else if (key == "k") cfg.k = static_cast<int>(to_long(value, lineno));
        else if (key == "m") cfg.m = static_cast<int>(to_long(value, lineno));
        else if (key == "optimizer") cfg.optimizer = value;
        else if (key == "learning_rate") cfg.learning_rate = to_double(value, lineno);
        else if (key == "q_alpha") cfg.q_alpha = to_double(value, lineno);
        else if (key == "neurons") cfg.neurons = static_cast<int>(to_long(value, lineno));
        else if (key == "hidden_layers") cfg.hidden_layers = static_cast<int>(to_long(value, lineno));
        else if (key == "train_every_decision") cfg.train_every_decision = to_bool(value, lineno);
        else if (key == "eps_start") cfg.eps_start = to_double(value, lineno);
        else if (key == "eps_end") cfg.eps_end = to_double(value, lineno);
        else if (key == "eps_decay_episodes") cfg.eps_decay_episodes = static_cast<int>(to_long(value, lineno));
        else if (key == "online_epsilon") cfg.online_epsilon = to_double(value, lineno);
        else if (key == "mode") cfg.mode = value;
        else if (key == "episode_ms") cfg.episode_ms = to_double(value, lineno);
        else if (key == "episodes") cfg.episodes = static_cast<int>(to_long(value, lineno));
        else if (key == "training_packets") cfg.training_packets = static_cast<int>(to_long(value, lineno));
        else if (key == "test_duration_ms") cfg.test_duration_ms = to_double(value, lineno);
        else if (key == "online_horizon_ms") cfg.online_horizon_ms = to_double(value, lineno);
        else if (key == "window_ms") cfg.window_ms = to_double(value, lineno);
        else if (key == "train_seed") cfg.train_seed = static_cast<std::uint64_t>(to_long(value, lineno));
        else if (key == "seeds") {
            if (value.find(',') != std::string::npos) {
                for (const auto& s : split(value, ','))
                    cfg.seeds.push_back(static_cast<std::uint64_t>(to_long(s, lineno)));
            } else {
                const long n = to_long(value, lineno);
                if (n <= 0) throw ParseError("scenario line " + std::to_string(lineno) +
                                             ": seed count must be > 0");
                for (long i = 0; i < n; ++i) cfg.seeds.push_back(i);
            }
        } else if (key == "schedule") {
            for (const auto& part : split(value, ',')) {
                if (part.empty()) continue;
                auto colon = part.find(':');
                if (colon == std::string::npos)
                    throw ParseError("scenario line " + std::to_string(lineno) +
                                     ": schedule entries are time:interval");
                cfg.schedule.changes.emplace_back(to_double(detail::trim(part.substr(0, colon)), lineno),
                                                  to_double(detail::trim(part.substr(colon + 1)), lineno));
            }
        } else if (key == "checkpoint_dir") {
            cfg.checkpoint_dir = value;
        } else {
            throw ParseError("scenario line " + std::to_string(lineno) + ": unknown key '" + key +
                             "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// Resolve the named topology and fill in topology-dependent defaults (busy
// pair).
inline Topology scenario_topology(ScenarioConfig& cfg) {
    Topology topo = [&] {
        if (cfg.topology == "grid3x3") return builtin_grid3x3();
        if (cfg.topology == "att25") return builtin_att25();
        return load_topology_file(cfg.topology);
    }();
    if (cfg.busy_src < 0 || cfg.busy_dst < 0) {
        if (cfg.topology == "att25") {
            cfg.busy_src = 17;
            cfg.busy_dst = 8;
        } else {
            cfg.busy_src = 0;
            cfg.busy_dst = topo.n_nodes() - 1;
        }
    }
    cfg.traffic().validate(topo.n_nodes());
    return topo;
}

}  // namespace routesim
