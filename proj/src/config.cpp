#include "wurpoll/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wurpoll {

namespace {

using nlohmann::json;

json scenario_to_json(const ScenarioSpec& s) {
  json j;
  j["categories"] = json::array();
  for (const auto& c : s.categories)
    j["categories"].push_back({{"mean", c.mean_value},
                               {"amplitude", c.amplitude},
                               {"period", c.period},
                               {"sigma", c.noise_sigma},
                               {"count", c.node_count}});
  if (s.reversal_time)
    j["reversal_time"] = *s.reversal_time;
  else
    j["reversal_time"] = nullptr;
  return j;
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec s;
  for (const auto& cj : j.at("categories")) {
    CategorySpec c;
    c.mean_value = cj.at("mean").get<double>();
    c.amplitude = cj.at("amplitude").get<double>();
    c.period = cj.at("period").get<double>();
    c.noise_sigma = cj.at("sigma").get<double>();
    c.node_count = cj.at("count").get<int>();
    s.categories.push_back(c);
  }
  if (j.contains("reversal_time") && !j.at("reversal_time").is_null())
    s.reversal_time = j.at("reversal_time").get<long>();
  return s;
}

const char* kind_name(TraceValueKind k) {
  switch (k) {
    case TraceValueKind::temperature: return "temperature";
    case TraceValueKind::humidity: return "humidity";
    case TraceValueKind::light: return "light";
    case TraceValueKind::voltage: return "voltage";
  }
  return "temperature";
}

TraceValueKind kind_from_name(const std::string& name) {
  if (name == "temperature") return TraceValueKind::temperature;
  if (name == "humidity") return TraceValueKind::humidity;
  if (name == "light") return TraceValueKind::light;
  if (name == "voltage") return TraceValueKind::voltage;
  throw std::invalid_argument("unknown trace value kind: " + name);
}

json trace_to_json(const TraceSpec& t) {
  return {{"path", t.path},
          {"node_column", t.node_column},
          {"time_column", t.time_column},
          {"value_column", t.value_column},
          {"resample_interval", t.resample_interval},
          {"kind", kind_name(t.kind)}};
}

TraceSpec trace_from_json(const json& j) {
  TraceSpec t;
  t.path = j.at("path").get<std::string>();
  if (j.contains("kind")) t.kind = kind_from_name(j.at("kind").get<std::string>());
  t.value_column = default_value_column(t.kind);
  if (j.contains("node_column")) t.node_column = j.at("node_column").get<int>();
  if (j.contains("time_column")) t.time_column = j.at("time_column").get<int>();
  if (j.contains("value_column")) t.value_column = j.at("value_column").get<int>();
  if (j.contains("resample_interval"))
    t.resample_interval = j.at("resample_interval").get<double>();
  return t;
}

}  // namespace

nlohmann::json config_to_json(const SimConfig& cfg) {
  json j;
  j["engine"] = {{"m", cfg.m},
                 {"horizon", cfg.horizon},
                 {"dt", cfg.dt},
                 {"seed", cfg.seed},
                 {"step_seconds", cfg.step_seconds},
                 {"cost_lambda", cfg.cost_lambda},
                 {"index_dump", cfg.index_dump}};

  json world;
  if (cfg.scenario) world["scenario"] = scenario_to_json(*cfg.scenario);
  if (cfg.trace) world["trace"] = trace_to_json(*cfg.trace);
  j["world"] = world;

  j["estimation"] = {{"beta1", cfg.beta1},
                     {"beta2", cfg.beta2},
                     {"beta3", cfg.beta3},
                     {"pdr_window", cfg.pdr_window}};

  j["channel"] = {{"pdr", cfg.channel.pdr},
                  {"per_node_pdr", cfg.channel.per_node_pdr},
                  {"retry_limit", cfg.channel.retry_limit},
                  {"wakeup_reliability", cfg.channel.wakeup_reliability}};

  const auto& p = cfg.policy;
  j["policy"] = {
      {"name", p.name},
      {"lambda", p.whittle.lambda},
      {"lambda_mode", p.whittle.dynamic_lambda ? "dynamic" : "fixed"},
      {"eta", std::isfinite(p.whittle.eta) ? json(p.whittle.eta) : json(nullptr)},
      {"pdr_weighting", p.whittle.pdr_weighting},
      {"kf_q", p.kf_q},
      {"kf_r", p.kf_r},
      {"kf_trace_threshold", p.kf_trace_threshold},
      {"wiql",
       {{"bins", p.wiql.bins},
        {"aoii_cap", p.wiql.aoii_cap},
        {"alpha_power", p.wiql.alpha_power},
        {"eps0", p.wiql.eps0},
        {"eps_decay", p.wiql.eps_decay},
        {"eps_floor", p.wiql.eps_floor},
        {"lambda", p.wiql.lambda},
        {"gamma", p.wiql.gamma},
        {"discounted", p.wiql.discounted}}}};

  j["energy"] = {{"e_tx", cfg.energy.e_tx},
                 {"e_sense", cfg.energy.e_sense},
                 {"e_wake", cfg.energy.e_wake},
                 {"e_sleep", cfg.energy.e_sleep},
                 {"e_max", cfg.energy.e_max}};
  return j;
}

SimConfig config_from_json(const nlohmann::json& j) {
  SimConfig cfg;
  if (j.contains("engine")) {
    const auto& e = j.at("engine");
    if (e.contains("m")) cfg.m = e.at("m").get<int>();
    if (e.contains("horizon")) cfg.horizon = e.at("horizon").get<long>();
    if (e.contains("dt")) cfg.dt = e.at("dt").get<long>();
    if (e.contains("seed")) cfg.seed = e.at("seed").get<std::uint64_t>();
    if (e.contains("step_seconds")) cfg.step_seconds = e.at("step_seconds").get<double>();
    if (e.contains("cost_lambda")) cfg.cost_lambda = e.at("cost_lambda").get<double>();
    if (e.contains("index_dump")) cfg.index_dump = e.at("index_dump").get<bool>();
  }
  if (j.contains("world")) {
    const auto& w = j.at("world");
    if (w.contains("scenario") && w.at("scenario").is_string()) {
      apply_scenario_preset(cfg, w.at("scenario").get<std::string>(),
                            w.value("category_size", 0));
    } else if (w.contains("scenario")) {
      cfg.scenario = scenario_from_json(w.at("scenario"));
    }
    if (w.contains("trace")) cfg.trace = trace_from_json(w.at("trace"));
  }
  if (j.contains("estimation")) {
    const auto& e = j.at("estimation");
    if (e.contains("beta1")) cfg.beta1 = e.at("beta1").get<double>();
    if (e.contains("beta2")) cfg.beta2 = e.at("beta2").get<double>();
    if (e.contains("beta3")) cfg.beta3 = e.at("beta3").get<double>();
    if (e.contains("pdr_window")) cfg.pdr_window = e.at("pdr_window").get<int>();
  }
  if (j.contains("channel")) {
    const auto& c = j.at("channel");
    if (c.contains("pdr")) cfg.channel.pdr = c.at("pdr").get<double>();
    if (c.contains("per_node_pdr"))
      cfg.channel.per_node_pdr = c.at("per_node_pdr").get<std::vector<double>>();
    if (c.contains("retry_limit")) cfg.channel.retry_limit = c.at("retry_limit").get<int>();
    if (c.contains("wakeup_reliability"))
      cfg.channel.wakeup_reliability = c.at("wakeup_reliability").get<double>();
  }
  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    auto& pc = cfg.policy;
    if (p.contains("name")) pc.name = p.at("name").get<std::string>();
    if (p.contains("lambda")) pc.whittle.lambda = p.at("lambda").get<double>();
    if (p.contains("lambda_mode")) {
      const std::string mode = p.at("lambda_mode").get<std::string>();
      if (mode != "dynamic" && mode != "fixed")
        throw std::invalid_argument("lambda_mode must be dynamic or fixed");
      pc.whittle.dynamic_lambda = mode == "dynamic";
    }
    if (p.contains("eta")) {
      pc.whittle.eta = p.at("eta").is_null()
                           ? std::numeric_limits<double>::infinity()
                           : p.at("eta").get<double>();
    }
    if (p.contains("pdr_weighting"))
      pc.whittle.pdr_weighting = p.at("pdr_weighting").get<bool>();
    if (p.contains("kf_q")) pc.kf_q = p.at("kf_q").get<double>();
    if (p.contains("kf_r")) pc.kf_r = p.at("kf_r").get<double>();
    if (p.contains("kf_trace_threshold"))
      pc.kf_trace_threshold = p.at("kf_trace_threshold").get<double>();
    if (p.contains("wiql")) {
      const auto& w = p.at("wiql");
      auto& q = pc.wiql;
      if (w.contains("bins")) q.bins = w.at("bins").get<int>();
      if (w.contains("aoii_cap")) q.aoii_cap = w.at("aoii_cap").get<double>();
      if (w.contains("alpha_power")) q.alpha_power = w.at("alpha_power").get<double>();
      if (w.contains("eps0")) q.eps0 = w.at("eps0").get<double>();
      if (w.contains("eps_decay")) q.eps_decay = w.at("eps_decay").get<double>();
      if (w.contains("eps_floor")) q.eps_floor = w.at("eps_floor").get<double>();
      if (w.contains("lambda")) q.lambda = w.at("lambda").get<double>();
      if (w.contains("gamma")) q.gamma = w.at("gamma").get<double>();
      if (w.contains("discounted")) q.discounted = w.at("discounted").get<bool>();
    }
  }
  if (j.contains("energy")) {
    const auto& e = j.at("energy");
    if (e.contains("e_tx")) cfg.energy.e_tx = e.at("e_tx").get<double>();
    if (e.contains("e_sense")) cfg.energy.e_sense = e.at("e_sense").get<double>();
    if (e.contains("e_wake")) cfg.energy.e_wake = e.at("e_wake").get<double>();
    if (e.contains("e_sleep")) cfg.energy.e_sleep = e.at("e_sleep").get<double>();
    if (e.contains("e_max")) cfg.energy.e_max = e.at("e_max").get<double>();
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const SimConfig& cfg) {
  const std::string canon = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

void apply_scenario_preset(SimConfig& cfg, const std::string& name,
                           int nodes_per_category) {
  cfg.trace.reset();
  if (name == "one")
    cfg.scenario = scenario_one(nodes_per_category > 0 ? nodes_per_category : 5);
  else if (name == "two")
    cfg.scenario = scenario_two(nodes_per_category > 0 ? nodes_per_category : 10);
  else if (name == "three")
    cfg.scenario = scenario_three(nodes_per_category > 0 ? nodes_per_category : 5);
  else
    throw std::invalid_argument("unknown scenario preset: " + name);
}

}  // namespace wurpoll
