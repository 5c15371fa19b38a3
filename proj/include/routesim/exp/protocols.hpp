#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "routesim/exp/export.hpp"
#include "routesim/exp/factory.hpp"
#include "routesim/exp/parallel.hpp"
#include "routesim/exp/scenario.hpp"
#include "routesim/metrics.hpp"
#include "routesim/simkernel.hpp"

namespace routesim {

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Trailing moving average ignoring NaN entries.
inline std::vector<double> smooth_trailing(const std::vector<double>& xs, int window) {
    std::vector<double> out(xs.size(), nan_value());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double sum = 0.0;
        int count = 0;
        const std::size_t lo = (i + 1 >= static_cast<std::size_t>(window)) ? i + 1 - window : 0;
        for (std::size_t j = lo; j <= i; ++j)
            if (!std::isnan(xs[j])) {
                sum += xs[j];
                ++count;
            }
        if (count > 0) out[i] = sum / count;
    }
    return out;
}

struct TrainingResult {
    std::vector<double> episode_delay;  // per-episode mean delivery time; NaN when none
    std::vector<double> smoothed;       // trailing 50-episode average
    std::unique_ptr<Policy> policy;
};

// Offline training: a frozen 1000-packet series is replayed every episode,
// each episode simulating episode_ms from an empty network.
inline TrainingResult run_offline_training(const Topology& topo, const ScenarioConfig& cfg) {
    auto policy = make_policy(topo, cfg);
    if (!policy->learning()) throw Error("offline training requires a learning policy");
    Rng series_rng = Rng::substream(cfg.train_seed, "traffic");
    const auto series =
        make_packet_series(cfg.traffic(), series_rng, cfg.training_packets, topo.n_nodes());
    TrainingResult out;
    out.episode_delay.reserve(cfg.episodes);
    policy->set_training(true);
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        policy->set_epsilon(cfg.epsilon_for_episode(ep));
        policy->begin_episode();
        Simulator sim(topo, cfg.sim(), cfg.traffic(), *policy,
                      Rng::substream(cfg.train_seed, "traffic"),
                      Rng::substream(cfg.train_seed, "exploration", ep));
        sim.set_fixed_series(&series);
        Metrics m = sim.run(cfg.episode_ms);
        out.episode_delay.push_back(m.average_delivery_time().value_or(nan_value()));
    }
    out.smoothed = smooth_trailing(out.episode_delay, 50);
    out.policy = std::move(policy);
    return out;
}

struct TestSummary {
    std::vector<std::uint64_t> seeds;
    std::vector<std::optional<double>> per_seed;
    MeanStd stats;
};

// Frozen-policy evaluation: fresh traffic per seed, exploration off, no
// updates.
inline TestSummary run_offline_test(const Topology& topo, const ScenarioConfig& cfg,
                                    Policy& policy) {
    TestSummary out;
    out.seeds = cfg.seed_list();
    out.per_seed.resize(out.seeds.size());
    const int n = static_cast<int>(out.seeds.size());
    const int threads = std::min(max_run_threads(), n);
    std::vector<std::unique_ptr<Policy>> clones;
    for (int w = 1; w < threads; ++w) clones.push_back(policy.clone());
    parallel_for(n, threads, [&](int i, int w) {
        Policy& p = (w == 0) ? policy : *clones[w - 1];
        p.set_training(false);
        p.set_epsilon(0.0);
        p.begin_episode();
        Simulator sim(topo, cfg.sim(), cfg.traffic(), p,
                      Rng::substream(out.seeds[i], "traffic"),
                      Rng::substream(out.seeds[i], "exploration"));
        Metrics m = sim.run(cfg.test_duration_ms);
        out.per_seed[i] = m.average_delivery_time();
    });
    std::vector<double> vals;
    for (const auto& v : out.per_seed)
        if (v) vals.push_back(*v);
    out.stats = mean_std(vals);
    return out;
}

struct SweepCell {
    std::string policy;
    double value;
    TestSummary summary;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepCell> cells;
};

inline void apply_axis(ScenarioConfig& cfg, const std::string& axis, double value) {
    if (axis == "generated_interval")
        cfg.generated_interval = value;
    else if (axis == "distribution_ratio")
        cfg.distribution_ratio = value;
    else
        throw ParseError("unknown sweep axis: " + axis);
}

// Sweep with caller-supplied trained policies (one per name, trained at the
// base operating point and reused across cells).
inline SweepResult run_sweep(const Topology& topo, const ScenarioConfig& base,
                             const std::string& axis, const std::vector<double>& values,
                             const std::vector<std::pair<std::string, Policy*>>& policies) {
    if (values.empty()) throw Error("sweep needs at least one value");
    SweepResult out;
    out.axis = axis;
    for (const auto& [name, policy] : policies) {
        for (double value : values) {
            ScenarioConfig cfg = base;
            cfg.policy = name;
            apply_axis(cfg, axis, value);
            out.cells.push_back({name, value, run_offline_test(topo, cfg, *policy)});
        }
    }
    return out;
}

// Self-contained sweep: trains each learning policy once at the base load.
inline SweepResult run_sweep(const Topology& topo, const ScenarioConfig& base,
                             const std::string& axis, const std::vector<double>& values,
                             std::vector<std::string> names = {}) {
    if (names.empty()) names = base.policies.empty()
                                   ? std::vector<std::string>{base.policy}
                                   : base.policies;
    std::vector<std::unique_ptr<Policy>> owned;
    std::vector<std::pair<std::string, Policy*>> trained;
    for (const auto& name : names) {
        ScenarioConfig cfg = base;
        cfg.policy = name;
        auto policy = make_policy(topo, cfg);
        if (policy->learning()) {
            auto result = run_offline_training(topo, cfg);
            policy = std::move(result.policy);
        }
        owned.push_back(std::move(policy));
        trained.emplace_back(name, owned.back().get());
    }
    return run_sweep(topo, base, axis, values, trained);
}

struct OnlineResult {
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<WindowStat>> per_seed;   // [seed][window]
    std::vector<std::optional<double>> mean_curve;   // across seeds, per window
};

// Continuous run under a load schedule; learning policies keep adapting from
// the given starting parameters. Each seed starts from an independent copy.
inline OnlineResult run_online(const Topology& topo, const ScenarioConfig& cfg,
                               const Policy& proto) {
    cfg.schedule.validate(cfg.online_horizon_ms);
    OnlineResult out;
    out.seeds = cfg.seed_list();
    const int n = static_cast<int>(out.seeds.size());
    out.per_seed.resize(n);
    const int threads = std::min(max_run_threads(), n);
    parallel_for(n, threads, [&](int i, int) {
        auto policy = proto.clone();
        policy->reseed(out.seeds[i]);
        const bool learns = policy->learning();
        policy->set_training(learns);
        policy->set_epsilon(learns ? cfg.online_epsilon : 0.0);
        Simulator sim(topo, cfg.sim(), cfg.traffic(), *policy,
                      Rng::substream(out.seeds[i], "traffic"),
                      Rng::substream(out.seeds[i], "exploration"));
        sim.set_load_schedule(&cfg.schedule);
        Metrics m = sim.run(cfg.online_horizon_ms);
        out.per_seed[i] = window_stats(m, cfg.window_ms, cfg.online_horizon_ms);
    });
    const int windows = out.per_seed.empty() ? 0 : static_cast<int>(out.per_seed[0].size());
    out.mean_curve.resize(windows);
    for (int w = 0; w < windows; ++w) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i)
            if (auto mu = out.per_seed[i][w].mean()) {
                sum += *mu;
                ++count;
            }
        if (count > 0) out.mean_curve[w] = sum / count;
    }
    return out;
}

struct StudyRow {
    std::string label;
    double value = 0.0;
    TestSummary summary;
};

// Train-and-test at the base operating point for each listed policy.
inline std::vector<StudyRow> run_element_study(const Topology& topo, const ScenarioConfig& base,
                                               const std::vector<std::string>& names) {
    std::vector<StudyRow> rows;
    for (const auto& name : names) {
        ScenarioConfig cfg = base;
        cfg.policy = name;
        auto policy = make_policy(topo, cfg);
        if (policy->learning()) {
            auto result = run_offline_training(topo, cfg);
            policy = std::move(result.policy);
        }
        rows.push_back({name, 0.0, run_offline_test(topo, cfg, *policy)});
    }
    return rows;
}

// Test-time communication staleness on an already-trained policy.
inline std::vector<StudyRow> run_delta_study(const Topology& topo, const ScenarioConfig& base,
                                             Policy& trained, const std::vector<double>& deltas) {
    std::vector<StudyRow> rows;
    for (double delta : deltas) {
        ScenarioConfig cfg = base;
        cfg.comm_interval = delta;
        rows.push_back({"delta_ms", delta, run_offline_test(topo, cfg, trained)});
    }
    return rows;
}

// Architecture grids: fresh training per cell.
inline std::vector<StudyRow> run_layer_study(const Topology& topo, const ScenarioConfig& base,
                                             const std::vector<int>& layer_counts) {
    std::vector<StudyRow> rows;
    for (int layers : layer_counts) {
        ScenarioConfig cfg = base;
        cfg.hidden_layers = layers;
        auto result = run_offline_training(topo, cfg);
        rows.push_back({"hidden_layers", static_cast<double>(layers),
                        run_offline_test(topo, cfg, *result.policy)});
    }
    return rows;
}

inline std::vector<StudyRow> run_neuron_study(const Topology& topo, const ScenarioConfig& base,
                                              const std::vector<int>& neuron_counts) {
    std::vector<StudyRow> rows;
    for (int neurons : neuron_counts) {
        ScenarioConfig cfg = base;
        cfg.neurons = neurons;
        auto result = run_offline_training(topo, cfg);
        rows.push_back({"neurons", static_cast<double>(neurons),
                        run_offline_test(topo, cfg, *result.policy)});
    }
    return rows;
}

// ---- export row builders ----

inline void append_test_rows(std::vector<ResultRow>& out, const std::string& scenario,
                             const std::string& policy, const std::string& axis_name,
                             double axis_value, double window_end, const TestSummary& s) {
    for (std::size_t i = 0; i < s.seeds.size(); ++i)
        out.push_back({scenario, policy, std::to_string(s.seeds[i]), axis_name, axis_value, 0.0,
                       window_end, s.per_seed[i]});
}

inline void append_online_rows(std::vector<ResultRow>& out, const std::string& scenario,
                               const std::string& policy, const OnlineResult& r) {
    for (std::size_t i = 0; i < r.seeds.size(); ++i)
        for (const WindowStat& w : r.per_seed[i])
            out.push_back({scenario, policy, std::to_string(r.seeds[i]), "generated_interval",
                           0.0, w.start, w.end, w.mean()});
}

inline void append_training_rows(std::vector<ResultRow>& out, const std::string& scenario,
                                 const std::string& policy, const ScenarioConfig& cfg,
                                 const TrainingResult& r) {
    for (std::size_t ep = 0; ep < r.episode_delay.size(); ++ep) {
        const double raw = r.episode_delay[ep];
        const double sm = r.smoothed[ep];
        out.push_back({scenario, policy, "train", "episode", static_cast<double>(ep), 0.0,
                       cfg.episode_ms,
                       std::isnan(raw) ? std::nullopt : std::optional<double>(raw)});
        out.push_back({scenario, policy, "train_smoothed", "episode", static_cast<double>(ep),
                       0.0, cfg.episode_ms,
                       std::isnan(sm) ? std::nullopt : std::optional<double>(sm)});
    }
}

inline void append_sweep_rows(std::vector<ResultRow>& out, const std::string& scenario,
                              const SweepResult& sweep, double window_end) {
    for (const SweepCell& cell : sweep.cells)
        append_test_rows(out, scenario, cell.policy, sweep.axis, cell.value, window_end,
                         cell.summary);
}

inline void append_study_rows(std::vector<ResultRow>& out, const std::string& scenario,
                              const std::string& axis_name, const std::string& policy,
                              const std::vector<StudyRow>& rows, double window_end) {
    for (const StudyRow& row : rows)
        append_test_rows(out, scenario, policy.empty() ? row.label : policy, axis_name, row.value,
                         window_end, row.summary);
}

}  // namespace routesim
