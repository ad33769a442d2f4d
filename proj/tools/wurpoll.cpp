#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wurpoll/config.hpp"
#include "wurpoll/engine.hpp"
#include "wurpoll/io.hpp"
#include "wurpoll/reconstruct.hpp"
#include "wurpoll/suites.hpp"

namespace fs = std::filesystem;
using namespace wurpoll;

namespace {

struct RunFlags {
  std::string config_path;
  std::string scenario;
  int category_size = 0;
  std::string trace_path;
  std::string trace_kind = "temperature";
  std::string policy;
  int m = -1;
  double lambda = -1.0;
  std::string lambda_mode;
  double eta = -1.0;
  long horizon = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
  bool index_dump = false;
};

SimConfig build_config(const RunFlags& f) {
  SimConfig cfg;
  if (!f.config_path.empty()) cfg = load_config_file(f.config_path);
  if (!f.scenario.empty()) apply_scenario_preset(cfg, f.scenario, f.category_size);
  if (!f.trace_path.empty()) {
    TraceSpec t;
    t.path = f.trace_path;
    if (f.trace_kind == "temperature") t.kind = TraceValueKind::temperature;
    else if (f.trace_kind == "humidity") t.kind = TraceValueKind::humidity;
    else if (f.trace_kind == "light") t.kind = TraceValueKind::light;
    else if (f.trace_kind == "voltage") t.kind = TraceValueKind::voltage;
    else throw std::invalid_argument("unknown trace kind: " + f.trace_kind);
    t.value_column = default_value_column(t.kind);
    cfg.trace = t;
    cfg.scenario.reset();
  }
  if (!f.policy.empty()) cfg.policy.name = f.policy;
  if (f.m >= 0) cfg.m = f.m;
  if (f.lambda >= 0) {
    cfg.policy.whittle.lambda = f.lambda;
    cfg.policy.wiql.lambda = f.lambda;
    cfg.cost_lambda = f.lambda;
  }
  if (!f.lambda_mode.empty()) {
    if (f.lambda_mode != "dynamic" && f.lambda_mode != "fixed")
      throw std::invalid_argument("--lambda-mode must be dynamic or fixed");
    cfg.policy.whittle.dynamic_lambda = f.lambda_mode == "dynamic";
  }
  if (f.eta >= 0) cfg.policy.whittle.eta = f.eta;
  if (f.horizon >= 0) cfg.horizon = f.horizon;
  if (f.seed_set) cfg.seed = f.seed;
  if (f.index_dump) cfg.index_dump = true;
  return cfg;
}

void print_summary(const RunSummary& s) {
  std::printf("policy        %s\n", s.policy.c_str());
  std::printf("config        %s\n", s.config_hash.c_str());
  std::printf("nodes x steps %d x %ld   m=%d   seed=%llu\n", s.node_count, s.horizon,
              s.m, static_cast<unsigned long long>(s.seed));
  std::printf("polls         %ld (%ld packets, %ld delivered)\n", s.total_polls,
              s.total_packets, s.successful_polls);
  std::printf("mean aoii     %.6f\n", s.mean_aoii);
  std::printf("mean reward   %.6f\n", s.mean_reward);
  std::printf("rmse          %.6f\n", s.rmse_overall);
  std::printf("lifetime      %.1f steps (%.3f years)\n", s.lifetime_in_steps,
              s.lifetime_in_years);
  if (!s.polls_per_category_pct.empty()) {
    std::printf("poll share    ");
    for (std::size_t k = 0; k < s.polls_per_category_pct.size(); ++k)
      std::printf("%s%c: %.2f%%", k ? "  " : "", char('A' + k),
                  s.polls_per_category_pct[k]);
    std::printf("\n");
  }
  if (s.lambda_final > 0) std::printf("final lambda  %.6f\n", s.lambda_final);
}

int cmd_run(const RunFlags& flags) {
  SimConfig cfg = build_config(flags);
  if (flags.seeds.size() == 1) cfg.seed = flags.seeds[0];
  cfg.validate();
  const std::string hash = config_hash(cfg);
  fs::create_directories(flags.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  if (flags.seeds.size() > 1) {
    const ReplicationResult rep = run_replications(cfg, flags.seeds, hash);
    write_summary_json((fs::path(flags.out_dir) / "summary.json").string(),
                       rep.aggregate);
    for (std::size_t k = 0; k < rep.per_seed.size(); ++k)
      write_summary_json((fs::path(flags.out_dir) /
                          ("summary_seed" + std::to_string(flags.seeds[k]) + ".json"))
                             .string(),
                         rep.per_seed[k]);
    print_summary(rep.aggregate);
  } else {
    const RunResult result = run(cfg, hash);
    write_steps_csv((fs::path(flags.out_dir) / "steps.csv").string(), result.logs, hash);
    write_updates_csv((fs::path(flags.out_dir) / "updates.csv").string(),
                      result.updates, hash);
    if (cfg.index_dump)
      write_index_dump_csv((fs::path(flags.out_dir) / "index_dump.csv").string(),
                           result.index_rows, hash);
    write_summary_json((fs::path(flags.out_dir) / "summary.json").string(),
                       result.summary);
    print_summary(result.summary);
  }
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
  std::printf("wrote %s in %.2fs\n", flags.out_dir.c_str(), elapsed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wake-up-radio polling simulator"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  run_cmd->add_option("--config", flags.config_path, "JSON config file");
  run_cmd->add_option("--scenario", flags.scenario, "synthetic world: one|two|three");
  run_cmd->add_option("--category-size", flags.category_size,
                      "nodes per category for the synthetic world");
  run_cmd->add_option("--trace", flags.trace_path, "trace file instead of a scenario");
  run_cmd->add_option("--trace-kind", flags.trace_kind,
                      "temperature|humidity|light|voltage");
  run_cmd->add_option("--policy", flags.policy, "rr|aoi|kf|waoii|fwaoii|wiql");
  run_cmd->add_option("--m", flags.m, "polls per step");
  run_cmd->add_option("--lambda", flags.lambda, "activation penalty");
  run_cmd->add_option("--lambda-mode", flags.lambda_mode, "dynamic|fixed");
  run_cmd->add_option("--eta", flags.eta, "fairness window in steps");
  run_cmd->add_option("--horizon", flags.horizon, "steps to simulate");
  run_cmd->add_option("--seed", flags.seed, "rng seed")
      ->each([&](const std::string&) { flags.seed_set = true; });
  run_cmd->add_option("--seeds", flags.seeds,
                      "several seeds; averages the per-seed summaries");
  run_cmd->add_option("--out", flags.out_dir, "output directory");
  run_cmd->add_flag("--verbose-index-dump", flags.index_dump,
                    "dump per-step index values");

  std::string suite_name;
  SuiteOptions suite_opt;
  std::string suite_out = "out";
  auto* suite_cmd = app.add_subcommand("suite", "run a built-in experiment grid");
  suite_cmd->add_option("name", suite_name, "suite name")->required();
  suite_cmd->add_option("--seeds", suite_opt.seeds, "seeds (default 1..5)");
  suite_cmd->add_option("--horizon", suite_opt.horizon, "steps per run");
  suite_cmd->add_option("--workers", suite_opt.workers, "parallel runs");
  suite_cmd->add_option("--out", suite_out, "output directory");

  std::string rec_steps;
  std::string rec_updates;
  std::string rec_out = "reconstruction.csv";
  int rec_node = 0;
  auto* rec_cmd =
      app.add_subcommand("reconstruct", "offline spline reconstruction of one node");
  rec_cmd->add_option("steps", rec_steps, "steps.csv from a run")->required();
  rec_cmd->add_option("--node", rec_node, "node id")->required();
  rec_cmd->add_option("--updates", rec_updates,
                      "updates.csv (default: sibling of steps.csv)");
  rec_cmd->add_option("--out", rec_out, "output csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(flags);

    if (suite_cmd->parsed()) {
      const SuiteResult result = run_suite(suite_name, suite_opt);
      fs::create_directories(suite_out);
      const auto base = fs::path(suite_out) / ("suite_" + result.name);
      write_suite_csv(base.string() + ".csv", result);
      write_suite_json(base.string() + ".json", result);
      std::printf("suite %s\n", result.name.c_str());
      for (const auto& row : result.rows) {
        std::printf("  %-14s", row.group.c_str());
        for (const auto& [label, value] : row.cells)
          std::printf(" %s=%.4g", label.c_str(), value);
        std::printf("\n");
      }
      std::printf("wrote %s.csv\n", base.string().c_str());
      return 0;
    }

    if (rec_cmd->parsed()) {
      const auto logs = read_steps_csv(rec_steps);
      std::string updates_path = rec_updates;
      if (updates_path.empty())
        updates_path = (fs::path(rec_steps).parent_path() / "updates.csv").string();
      const auto updates = read_updates_csv(updates_path);
      const auto rows = reconstruct_node(logs, updates, rec_node);
      write_reconstruction_csv(rec_out, rows);
      std::printf("wrote %s (%zu rows)\n", rec_out.c_str(), rows.size());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
