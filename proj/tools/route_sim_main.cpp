// route-sim: scenario runner for the packet-routing simulator.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "routesim/routesim.hpp"

namespace rs = routesim;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = "out";
    std::string format = "csv";
    bool trace = false;
    long seed = -1;
};

std::string out_path(const CommonOpts& opts, const std::string& stem) {
    fs::create_directories(opts.out_dir);
    return opts.out_dir + "/" + stem + "." + opts.format;
}

void export_with_summary(const CommonOpts& opts, const std::vector<rs::ResultRow>& rows,
                         const std::string& stem) {
    rs::export_rows(rows, out_path(opts, stem), opts.format);
    auto summary = rs::summary_rows(rows);
    if (!summary.empty())
        rs::export_rows(summary, out_path(opts, stem + "_summary"), opts.format);
    std::cout << "wrote " << out_path(opts, stem) << "\n";
}

rs::ScenarioConfig load_config(const CommonOpts& opts) {
    rs::ScenarioConfig cfg = rs::load_scenario_file(opts.scenario_path);
    if (opts.seed >= 0) {
        cfg.seeds = {static_cast<std::uint64_t>(opts.seed)};
        cfg.train_seed = static_cast<std::uint64_t>(opts.seed);
    }
    return cfg;
}

std::string checkpoint_dir(const CommonOpts& opts, const rs::ScenarioConfig& cfg,
                           const std::string& policy) {
    if (!cfg.checkpoint_dir.empty()) return cfg.checkpoint_dir;
    return opts.out_dir + "/checkpoint_" + policy;
}

void write_trace(const CommonOpts& opts, const rs::Topology& topo, const rs::ScenarioConfig& cfg,
                 rs::Policy& policy) {
    auto seed = cfg.seed_list().front();
    policy.set_training(false);
    policy.set_epsilon(0.0);
    policy.begin_episode();
    rs::Simulator sim(topo, cfg.sim(/*record_trace=*/true), cfg.traffic(), policy,
                      rs::Rng::substream(seed, "traffic"), rs::Rng::substream(seed, "exploration"));
    if (!cfg.schedule.changes.empty()) sim.set_load_schedule(&cfg.schedule);
    const double horizon = cfg.mode == "online" ? cfg.online_horizon_ms : cfg.test_duration_ms;
    sim.run(horizon);
    rs::write_file(opts.out_dir + "/trace.csv", rs::trace_to_csv(sim.trace()));
    std::cout << "wrote " << opts.out_dir << "/trace.csv\n";
}

int cmd_run(const CommonOpts& opts) {
    rs::ScenarioConfig cfg = load_config(opts);
    rs::Topology topo = rs::scenario_topology(cfg);
    std::vector<rs::ResultRow> rows;
    if (cfg.mode == "offline_train") {
        auto result = rs::run_offline_training(topo, cfg);
        const std::string dir = checkpoint_dir(opts, cfg, cfg.policy);
        result.policy->save_checkpoint(dir);
        rs::append_training_rows(rows, cfg.id, cfg.policy, cfg, result);
        export_with_summary(opts, rows, "training");
        std::cout << "checkpoint: " << dir << "\n";
        return 0;
    }
    if (cfg.mode == "offline_test") {
        auto policy = rs::make_policy(topo, cfg);
        if (policy->learning()) policy->load_checkpoint(checkpoint_dir(opts, cfg, cfg.policy));
        auto summary = rs::run_offline_test(topo, cfg, *policy);
        rs::append_test_rows(rows, cfg.id, cfg.policy, "generated_interval",
                             cfg.generated_interval, cfg.test_duration_ms, summary);
        export_with_summary(opts, rows, "test");
        if (summary.stats.std)
            std::printf("%s: mean %.3f ms, std %.3f ms over %zu seeds\n", cfg.policy.c_str(),
                        summary.stats.mean, *summary.stats.std, summary.seeds.size());
        else
            std::printf("%s: mean %.3f ms (std n/a)\n", cfg.policy.c_str(), summary.stats.mean);
        if (opts.trace) write_trace(opts, topo, cfg, *policy);
        return 0;
    }
    if (cfg.mode == "online") {
        auto policy = rs::make_policy(topo, cfg);
        if (policy->learning()) policy->load_checkpoint(checkpoint_dir(opts, cfg, cfg.policy));
        auto result = rs::run_online(topo, cfg, *policy);
        rs::append_online_rows(rows, cfg.id, cfg.policy, result);
        export_with_summary(opts, rows, "online");
        if (opts.trace) write_trace(opts, topo, cfg, *policy);
        return 0;
    }
    throw rs::ParseError("unknown mode: " + cfg.mode);
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis, const std::string& values_csv,
              const std::string& policies_csv) {
    rs::ScenarioConfig cfg = load_config(opts);
    rs::Topology topo = rs::scenario_topology(cfg);
    std::vector<double> values;
    for (const auto& v : rs::detail::split(values_csv, ',')) values.push_back(std::stod(v));
    std::vector<std::string> policies;
    if (!policies_csv.empty()) policies = rs::detail::split(policies_csv, ',');
    auto sweep = rs::run_sweep(topo, cfg, axis, values, policies);
    std::vector<rs::ResultRow> rows;
    rs::append_sweep_rows(rows, cfg.id, sweep, cfg.test_duration_ms);
    export_with_summary(opts, rows, "sweep_" + axis);
    return 0;
}

int cmd_pretrain(const CommonOpts& opts, const std::string& optimizer, int episodes,
                 double alpha) {
    rs::ScenarioConfig cfg = load_config(opts);
    rs::Topology topo = rs::scenario_topology(cfg);
    auto policy = rs::make_policy(topo, cfg);
    auto* agent_policy = dynamic_cast<rs::dqrc::DqrcPolicy*>(policy.get());
    if (!agent_policy) throw rs::Error("pretrain requires a dqrc-family policy");
    auto curve = rs::dqrc::pretrain(*agent_policy, topo,
                                    rs::nn::optimizer_from_string(optimizer), alpha, episodes,
                                    cfg.link_time);
    const std::string dir = checkpoint_dir(opts, cfg, cfg.policy + "_pretrained");
    policy->save_checkpoint(dir);
    std::vector<rs::ResultRow> rows;
    for (std::size_t ep = 0; ep < curve.size(); ++ep)
        rows.push_back({cfg.id + "_pretrain_loss", cfg.policy, optimizer, "episode",
                        static_cast<double>(ep), 0.0, 0.0, curve[ep]});
    export_with_summary(opts, rows, "pretrain");
    std::cout << "checkpoint: " << dir << "\n";
    return 0;
}

int cmd_ablate(const CommonOpts& opts, const std::string& study) {
    rs::ScenarioConfig cfg = load_config(opts);
    rs::Topology topo = rs::scenario_topology(cfg);
    std::vector<rs::ResultRow> rows;
    if (study == "elements") {
        std::vector<std::string> names = cfg.policies;
        if (names.empty())
            names = {"dqrc", "dqrc_nocomm", "dqrc_nolstm", "dqr", "q_routing", "backpressure"};
        auto table = rs::run_element_study(topo, cfg, names);
        rs::append_study_rows(rows, cfg.id, "policy", "", table, cfg.test_duration_ms);
    } else if (study == "comm") {
        rs::ScenarioConfig train_cfg = cfg;
        train_cfg.policy = "dqrc";
        auto trained = rs::run_offline_training(topo, train_cfg);
        auto table = rs::run_delta_study(topo, cfg, *trained.policy, {0, 1, 2, 3, 4, 5});
        rs::append_study_rows(rows, cfg.id, "delta_ms", "dqrc", table, cfg.test_duration_ms);
    } else if (study == "layers") {
        auto table = rs::run_layer_study(topo, cfg, {0, 1, 2, 3});
        rs::append_study_rows(rows, cfg.id, "hidden_layers", cfg.policy, table,
                              cfg.test_duration_ms);
    } else if (study == "neurons") {
        auto table = rs::run_neuron_study(topo, cfg, {32, 64, 128, 256});
        rs::append_study_rows(rows, cfg.id, "neurons", cfg.policy, table, cfg.test_duration_ms);
    } else {
        throw rs::ParseError("unknown study: " + study);
    }
    export_with_summary(opts, rows, "ablate_" + study);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"route-sim: deterministic packet-routing simulator"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", opts.scenario_path, "scenario config file")->required();
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--format", opts.format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--seed", opts.seed, "override scenario seeds with a single seed");
    };

    auto* run = app.add_subcommand("run", "run the scenario in its configured mode");
    add_common(run);
    run->add_flag("--trace", opts.trace, "also write an event trace CSV");

    std::string axis = "generated_interval", values_csv, policies_csv;
    auto* sweep = app.add_subcommand("sweep", "train once per policy, test across an axis");
    add_common(sweep);
    sweep->add_option("--axis", axis, "generated_interval | distribution_ratio");
    sweep->add_option("--values", values_csv, "comma-separated axis values")->required();
    sweep->add_option("--policies", policies_csv, "comma-separated policy names");

    std::string optimizer = "adam";
    int episodes = 200;
    double alpha = 1e-3;
    auto* pretrain = app.add_subcommand("pretrain", "supervised warm start from hop counts");
    add_common(pretrain);
    pretrain->add_option("--optimizer", optimizer, "sgd | adam | rmsprop");
    pretrain->add_option("--episodes", episodes, "pre-training episodes");
    pretrain->add_option("--alpha", alpha, "pre-training learning rate");

    std::string study = "elements";
    auto* ablate = app.add_subcommand("ablate", "run an ablation study");
    add_common(ablate);
    ablate->add_option("--study", study, "elements | comm | layers | neurons");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts);
        if (sweep->parsed()) return cmd_sweep(opts, axis, values_csv, policies_csv);
        if (pretrain->parsed()) return cmd_pretrain(opts, optimizer, episodes, alpha);
        if (ablate->parsed()) return cmd_ablate(opts, study);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
