#include "wurpoll/suites.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wurpoll/config.hpp"
#include "wurpoll/io.hpp"

namespace wurpoll {

namespace {

struct Job {
  std::function<void()> work;
};

void run_jobs(std::vector<Job>& jobs, int workers) {
  if (workers <= 1) {
    for (auto& j : jobs) j.work();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      try {
        jobs[k].work();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(workers, static_cast<int>(jobs.size()));
  pool.reserve(count);
  for (int i = 0; i < count; ++i) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

SimConfig base_config(const SuiteOptions& opt, int nodes_per_category,
                      const std::string& scenario) {
  SimConfig cfg;
  cfg.horizon = opt.horizon;
  apply_scenario_preset(cfg, scenario, nodes_per_category);
  return cfg;
}

SimConfig with_policy(SimConfig cfg, const std::string& name) {
  cfg.policy.name = name;
  return cfg;
}

// The channel-constraint sweep runs the two-category world at the full
// 50-node population so the sweep stays meaningful up to m = 10.
constexpr int kSweepCategorySize = 25;

SuiteResult m_sweep_tables(const SuiteOptions& opt, bool penalty_sweep) {
  SuiteResult out;
  out.name = penalty_sweep ? "table3_penalty_sweep" : "table2_m_sweep";
  const std::vector<std::string> policies = {"waoii", "kf", "aoi"};
  out.columns = {"waoii_pct", "waoii_pct_sd", "kf_pct",     "kf_pct_sd",
                 "aoi_pct",   "aoi_pct_sd",   "waoii_rmse", "waoii_rmse_sd",
                 "kf_rmse",   "kf_rmse_sd"};

  struct Point {
    std::string group;
    SimConfig base;
  };
  std::vector<Point> points;
  if (penalty_sweep) {
    // m = 10 keeps the smallest penalty below channel saturation
    for (double lambda : {0.1, 0.25, 0.5}) {
      SimConfig cfg = base_config(opt, kSweepCategorySize, "one");
      cfg.m = 10;
      cfg.policy.whittle.dynamic_lambda = false;
      cfg.policy.whittle.lambda = lambda;
      points.push_back({"lambda=" + format_double(lambda), cfg});
    }
  } else {
    // the channel sweep runs the index policy at the fixed table penalty
    for (int m : {1, 2, 5, 10}) {
      SimConfig cfg = base_config(opt, kSweepCategorySize, "one");
      cfg.m = m;
      cfg.policy.whittle.dynamic_lambda = false;
      cfg.policy.whittle.lambda = 0.5;
      points.push_back({"M=" + std::to_string(m), cfg});
    }
  }

  // summaries[point][policy][seed], rr kept separately
  const std::size_t ns = opt.seeds.size();
  std::vector<std::vector<std::vector<RunSummary>>> res(
      points.size(), std::vector<std::vector<RunSummary>>(policies.size(),
                                                          std::vector<RunSummary>(ns)));
  std::vector<std::vector<RunSummary>> rr(points.size(), std::vector<RunSummary>(ns));

  std::vector<Job> jobs;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t s = 0; s < ns; ++s) {
      jobs.push_back({[&, p, s] {
        SimConfig cfg = with_policy(points[p].base, "rr");
        cfg.seed = opt.seeds[s];
        rr[p][s] = run(cfg, config_hash(cfg)).summary;
      }});
      for (std::size_t q = 0; q < policies.size(); ++q)
        jobs.push_back({[&, p, q, s] {
          SimConfig cfg = with_policy(points[p].base, policies[q]);
          cfg.seed = opt.seeds[s];
          res[p][q][s] = run(cfg, config_hash(cfg)).summary;
        }});
    }
  run_jobs(jobs, opt.workers);

  for (std::size_t p = 0; p < points.size(); ++p) {
    SuiteRow row;
    row.group = points[p].group;
    for (std::size_t q = 0; q < policies.size(); ++q) {
      std::vector<double> pct(ns), rmse_v(ns);
      for (std::size_t s = 0; s < ns; ++s) {
        pct[s] = 100.0 * static_cast<double>(res[p][q][s].total_packets) /
                 static_cast<double>(rr[p][s].total_packets);
        rmse_v[s] = res[p][q][s].rmse_overall;
      }
      row.cells.emplace_back(policies[q] + "_pct", mean(pct));
      row.cells.emplace_back(policies[q] + "_pct_sd", sample_sd(pct));
      if (policies[q] != "aoi") {
        row.cells.emplace_back(policies[q] + "_rmse", mean(rmse_v));
        row.cells.emplace_back(policies[q] + "_rmse_sd", sample_sd(rmse_v));
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

SuiteResult eta_sweep(const SuiteOptions& opt) {
  SuiteResult out;
  out.name = "table4_eta_sweep";
  out.columns = {"polls_a", "polls_b", "pct_a", "pct_b", "rmse", "rmse_sd"};
  const std::size_t ns = opt.seeds.size();

  const std::vector<double> etas = {100, 300, 500};
  std::vector<std::vector<RunSummary>> res(etas.size(), std::vector<RunSummary>(ns));
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < etas.size(); ++e)
    for (std::size_t s = 0; s < ns; ++s)
      jobs.push_back({[&, e, s] {
        SimConfig cfg = base_config(opt, 5, "one");
        cfg.m = 1;
        cfg.policy.name = "fwaoii";
        cfg.policy.whittle.eta = etas[e];
        cfg.seed = opt.seeds[s];
        res[e][s] = run(cfg, config_hash(cfg)).summary;
      }});
  run_jobs(jobs, opt.workers);

  for (std::size_t e = 0; e < etas.size(); ++e) {
    SuiteRow row;
    row.group = "eta=" + format_double(etas[e]);
    std::vector<double> pa(ns), pb(ns), ra(ns), rb(ns), rm(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& sum = res[e][s];
      long a = 0, b = 0;
      const int half = sum.node_count / 2;
      for (int i = 0; i < sum.node_count; ++i)
        (i < half ? a : b) += sum.polls_per_node[i];
      pa[s] = static_cast<double>(a);
      pb[s] = static_cast<double>(b);
      ra[s] = sum.polls_per_category_pct[0];
      rb[s] = sum.polls_per_category_pct[1];
      rm[s] = sum.rmse_overall;
    }
    row.cells.emplace_back("polls_a", mean(pa));
    row.cells.emplace_back("polls_b", mean(pb));
    row.cells.emplace_back("pct_a", mean(ra));
    row.cells.emplace_back("pct_b", mean(rb));
    row.cells.emplace_back("rmse", mean(rm));
    row.cells.emplace_back("rmse_sd", sample_sd(rm));
    out.rows.push_back(std::move(row));
  }
  return out;
}

SuiteResult lifetime_table(const SuiteOptions& opt) {
  SuiteResult out;
  out.name = "table5_lifetime";
  struct Col {
    std::string label;
    std::string policy;
    double eta;
  };
  const std::vector<Col> cols = {
      {"rr", "rr", 0},
      {"aoi", "aoi", 0},
      {"waoii", "waoii", 0},
      {"fwaoii_eta200", "fwaoii", 200},
      {"fwaoii_eta100", "fwaoii", 100},
  };
  for (const auto& c : cols) out.columns.push_back(c.label + "_years");

  const std::size_t ns = opt.seeds.size();
  const std::vector<int> ms = {1, 2, 5, 10};
  std::vector<std::vector<std::vector<RunSummary>>> res(
      ms.size(),
      std::vector<std::vector<RunSummary>>(cols.size(), std::vector<RunSummary>(ns)));

  std::vector<Job> jobs;
  for (std::size_t mi = 0; mi < ms.size(); ++mi)
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t s = 0; s < ns; ++s)
        jobs.push_back({[&, mi, c, s] {
          SimConfig cfg = base_config(opt, kSweepCategorySize, "one");
          cfg.m = ms[mi];
          cfg.policy.name = cols[c].policy;
          if (cols[c].policy == "waoii" || cols[c].policy == "fwaoii") {
            cfg.policy.whittle.dynamic_lambda = false;
            cfg.policy.whittle.lambda = 0.5;
          }
          if (cols[c].eta > 0) cfg.policy.whittle.eta = cols[c].eta;
          cfg.seed = opt.seeds[s];
          res[mi][c][s] = run(cfg, config_hash(cfg)).summary;
        }});
  run_jobs(jobs, opt.workers);

  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    SuiteRow row;
    row.group = "M=" + std::to_string(ms[mi]);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<double> years(ns);
      for (std::size_t s = 0; s < ns; ++s) years[s] = res[mi][c][s].lifetime_in_years;
      row.cells.emplace_back(cols[c].label + "_years", mean(years));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

SuiteResult scenario3_adaptation(const SuiteOptions& opt) {
  SuiteResult out;
  out.name = "fig_scenario3_adaptation";
  out.columns = {"catb_share_pre", "catb_share_post", "total_polls"};

  // the categories swap half-way; the post window starts once the swap has
  // had a tenth of the horizon to settle
  const long reversal = opt.horizon / 2;
  const long post_start = reversal + opt.horizon / 10;

  struct Variant {
    std::string label;
    std::string policy;
    double eta;
  };
  const std::vector<Variant> variants = {{"waoii", "waoii", 0},
                                         {"fwaoii_eta100", "fwaoii", 100}};
  const std::size_t ns = opt.seeds.size();

  struct Shares {
    double pre = 0, post = 0;
    long polls = 0;
  };
  std::vector<std::vector<Shares>> res(variants.size(), std::vector<Shares>(ns));

  std::vector<Job> jobs;
  for (std::size_t v = 0; v < variants.size(); ++v)
    for (std::size_t s = 0; s < ns; ++s)
      jobs.push_back({[&, v, s, reversal, post_start] {
        SimConfig cfg = base_config(opt, 5, "three");
        cfg.scenario->reversal_time = reversal;
        cfg.m = 1;
        cfg.policy.name = variants[v].policy;
        if (variants[v].eta > 0) cfg.policy.whittle.eta = variants[v].eta;
        cfg.seed = opt.seeds[s];
        const RunResult r = run(cfg, config_hash(cfg));
        const int half = r.summary.node_count / 2;
        long pre_b = 0, pre_all = 0, post_b = 0, post_all = 0;
        for (const auto& row : r.logs) {
          if (!row.action) continue;
          const bool is_b = row.node >= half;
          if (row.t < reversal) {
            ++pre_all;
            pre_b += is_b;
          } else if (row.t >= post_start) {
            ++post_all;
            post_b += is_b;
          }
        }
        res[v][s].pre = pre_all ? 100.0 * pre_b / pre_all : 0.0;
        res[v][s].post = post_all ? 100.0 * post_b / post_all : 0.0;
        res[v][s].polls = r.summary.total_polls;
      }});
  run_jobs(jobs, opt.workers);

  for (std::size_t v = 0; v < variants.size(); ++v) {
    SuiteRow row;
    row.group = variants[v].label;
    std::vector<double> pre(ns), post(ns), polls(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      pre[s] = res[v][s].pre;
      post[s] = res[v][s].post;
      polls[s] = static_cast<double>(res[v][s].polls);
    }
    row.cells.emplace_back("catb_share_pre", mean(pre));
    row.cells.emplace_back("catb_share_post", mean(post));
    row.cells.emplace_back("total_polls", mean(polls));
    out.rows.push_back(std::move(row));
  }
  return out;
}

SuiteResult reward_comparison(const SuiteOptions& opt) {
  SuiteResult out;
  out.name = "fig9_reward_comparison";
  const std::vector<std::string> policies = {"rr", "aoi", "waoii", "wiql"};
  for (const auto& p : policies) {
    out.columns.push_back(p + "_reward");
    out.columns.push_back(p + "_reward_sd");
  }

  // A known small activation penalty keeps the comparison on one objective.
  constexpr double kRewardLambda = 0.1;
  const std::size_t ns = opt.seeds.size();
  const std::vector<int> ms = {1, 2, 5};
  std::vector<std::vector<std::vector<RunSummary>>> res(
      ms.size(),
      std::vector<std::vector<RunSummary>>(policies.size(), std::vector<RunSummary>(ns)));

  std::vector<Job> jobs;
  for (std::size_t mi = 0; mi < ms.size(); ++mi)
    for (std::size_t p = 0; p < policies.size(); ++p)
      for (std::size_t s = 0; s < ns; ++s)
        jobs.push_back({[&, mi, p, s] {
          SimConfig cfg = base_config(opt, 5, "one");
          cfg.m = ms[mi];
          cfg.cost_lambda = kRewardLambda;
          cfg.policy.name = policies[p];
          cfg.policy.whittle.dynamic_lambda = false;
          cfg.policy.whittle.lambda = kRewardLambda;
          cfg.policy.wiql.lambda = kRewardLambda;
          cfg.seed = opt.seeds[s];
          res[mi][p][s] = run(cfg, config_hash(cfg)).summary;
        }});
  run_jobs(jobs, opt.workers);

  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    SuiteRow row;
    row.group = "M=" + std::to_string(ms[mi]);
    for (std::size_t p = 0; p < policies.size(); ++p) {
      std::vector<double> rew(ns);
      for (std::size_t s = 0; s < ns; ++s) rew[s] = res[mi][p][s].mean_reward;
      row.cells.emplace_back(policies[p] + "_reward", mean(rew));
      row.cells.emplace_back(policies[p] + "_reward_sd", sample_sd(rew));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::vector<std::string> available_suites() {
  return {"table2_m_sweep",  "table3_penalty_sweep",    "table4_eta_sweep",
          "table5_lifetime", "fig_scenario3_adaptation", "fig9_reward_comparison"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  if (options.seeds.empty()) throw std::invalid_argument("suite needs at least one seed");
  if (options.horizon < 1) throw std::invalid_argument("suite horizon must be >= 1");
  if (name == "table2_m_sweep") return m_sweep_tables(options, false);
  if (name == "table3_penalty_sweep") return m_sweep_tables(options, true);
  if (name == "table4_eta_sweep") return eta_sweep(options);
  if (name == "table5_lifetime") return lifetime_table(options);
  if (name == "fig_scenario3_adaptation") return scenario3_adaptation(options);
  if (name == "fig9_reward_comparison") return reward_comparison(options);
  std::string msg = "unknown suite: " + name + "; available:";
  for (const auto& s : available_suites()) msg += " " + s;
  throw std::invalid_argument(msg);
}

void write_suite_csv(const std::string& path, const SuiteResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "group";
  if (!result.rows.empty())
    for (const auto& [label, _] : result.rows.front().cells) out << ',' << label;
  out << '\n';
  for (const auto& row : result.rows) {
    out << row.group;
    for (const auto& [_, value] : row.cells) out << ',' << format_double(value);
    out << '\n';
  }
}

void write_suite_json(const std::string& path, const SuiteResult& result) {
  nlohmann::json j;
  j["suite"] = result.name;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r;
    r["group"] = row.group;
    for (const auto& [label, value] : row.cells) r[label] = value;
    j["rows"].push_back(r);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace wurpoll
