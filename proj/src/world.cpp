#include "wurpoll/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wurpoll/rng.hpp"

namespace wurpoll {

void CategorySpec::validate() const {
  if (!(period > 0.0)) throw std::invalid_argument("category period must be > 0");
  if (noise_sigma < 0.0) throw std::invalid_argument("category noise sigma must be >= 0");
  if (node_count < 1) throw std::invalid_argument("category node count must be >= 1");
  if (!std::isfinite(mean_value) || !std::isfinite(amplitude))
    throw std::invalid_argument("category mean/amplitude must be finite");
}

int ScenarioSpec::node_count() const {
  int n = 0;
  for (const auto& c : categories) n += c.node_count;
  return n;
}

int ScenarioSpec::category_of(int node) const {
  int base = 0;
  for (std::size_t k = 0; k < categories.size(); ++k) {
    base += categories[k].node_count;
    if (node < base) return static_cast<int>(k);
  }
  throw std::out_of_range("node id beyond scenario population");
}

std::vector<int> ScenarioSpec::category_map() const {
  std::vector<int> map;
  map.reserve(node_count());
  for (std::size_t k = 0; k < categories.size(); ++k)
    map.insert(map.end(), categories[k].node_count, static_cast<int>(k));
  return map;
}

void ScenarioSpec::validate() const {
  if (categories.empty()) throw std::invalid_argument("scenario needs at least one category");
  for (const auto& c : categories) c.validate();
  if (horizon < 1) throw std::invalid_argument("scenario horizon must be >= 1");
  if (reversal_time) {
    if (categories.size() < 2)
      throw std::invalid_argument("reversal requires at least two categories");
    if (*reversal_time < 0 || *reversal_time >= horizon)
      throw std::invalid_argument("reversal time must lie inside the horizon");
  }
}

ScenarioSpec scenario_one(int nodes_per_category) {
  ScenarioSpec s;
  s.categories = {
      {20.0, 5.0, 500.0, 0.10, nodes_per_category},   // dynamic
      {20.0, 0.0, 500.0, 0.05, nodes_per_category},   // quiescent
  };
  return s;
}

ScenarioSpec scenario_two(int nodes_per_category) {
  ScenarioSpec s;
  s.categories = {
      {20.0, 5.0, 1500.0, 0.05, nodes_per_category},  // slow
      {20.0, 5.0, 1000.0, 0.05, nodes_per_category},  // moderate
      {20.0, 5.0, 500.0, 0.05, nodes_per_category},   // rapid
  };
  return s;
}

ScenarioSpec scenario_three(int nodes_per_category) {
  ScenarioSpec s = scenario_one(nodes_per_category);
  s.reversal_time = 5000;
  return s;
}

GroundTruth generate_synthetic(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  const int n = spec.node_count();
  const long horizon = spec.horizon;
  GroundTruth world(n, horizon);

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const long reversal = spec.reversal_time.value_or(horizon);

  int node = 0;
  for (std::size_t k = 0; k < spec.categories.size(); ++k) {
    // Swapped parameter set for the first two categories after the reversal.
    const CategorySpec& before = spec.categories[k];
    const CategorySpec& after =
        (spec.reversal_time && k < 2) ? spec.categories[1 - k] : before;
    for (int j = 0; j < before.node_count; ++j, ++node) {
      Rng rng = Rng::for_stream(seed, /*stream=*/1, static_cast<std::uint64_t>(node));
      for (long t = 0; t < horizon; ++t) {
        const CategorySpec& c = (t < reversal) ? before : after;
        world.at(node, t) = before.mean_value +
                            c.amplitude * std::sin(kTwoPi * static_cast<double>(t) / c.period) +
                            rng.next_gaussian(c.noise_sigma);
      }
    }
  }
  return world;
}

void TraceSpec::validate() const {
  if (path.empty()) throw std::invalid_argument("trace path is empty");
  if (node_column < 0 || time_column < 0 || value_column < 0)
    throw std::invalid_argument("trace column indices must be >= 0");
  if (node_column == time_column || node_column == value_column ||
      time_column == value_column)
    throw std::invalid_argument("trace column mapping must use distinct columns");
  if (!(resample_interval > 0.0))
    throw std::invalid_argument("trace resample interval must be > 0");
}

int default_value_column(TraceValueKind kind) {
  switch (kind) {
    case TraceValueKind::temperature: return 4;
    case TraceValueKind::humidity: return 5;
    case TraceValueKind::light: return 6;
    case TraceValueKind::voltage: return 7;
  }
  return 4;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  const bool has_comma = line.find(',') != std::string::npos;
  std::string cur;
  for (char ch : line) {
    const bool sep = has_comma ? (ch == ',') : (ch == ' ' || ch == '\t');
    if (sep) {
      if (has_comma || !cur.empty()) fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (has_comma || !cur.empty()) fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& s, double* out) {
  try {
    std::size_t pos = 0;
    *out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(*out);
  } catch (...) {
    return false;
  }
}

struct RawSample {
  double ts;
  double value;
};

}  // namespace

GroundTruth load_trace(const TraceSpec& spec, TraceLoadReport* report) {
  spec.validate();
  std::ifstream in(spec.path);
  if (!in) throw std::runtime_error("cannot open trace file: " + spec.path);

  const int max_col = std::max({spec.node_column, spec.time_column, spec.value_column});

  std::map<int, std::vector<RawSample>> samples;  // node id -> samples in file order
  std::map<int, bool> seen;                       // any row mentioning the id
  long skipped = 0;
  long total_rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++total_rows;
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) <= max_col) {
      ++skipped;
      continue;
    }
    double node_raw = 0.0;
    if (!parse_double(fields[spec.node_column], &node_raw)) {
      ++skipped;
      continue;
    }
    const int node_id = static_cast<int>(node_raw);
    seen[node_id] = true;
    double ts = 0.0, value = 0.0;
    if (!parse_double(fields[spec.time_column], &ts) ||
        !parse_double(fields[spec.value_column], &value)) {
      ++skipped;
      continue;
    }
    samples[node_id].push_back({ts, value});
  }
  if (total_rows == 0) throw std::runtime_error("trace file has no data rows: " + spec.path);
  if (samples.empty()) throw std::runtime_error("every trace row was malformed: " + spec.path);

  std::vector<int> excluded;
  for (const auto& [id, _] : seen)
    if (!samples.count(id)) excluded.push_back(id);
  if (!excluded.empty()) {
    std::cerr << "trace: excluding nodes with no valid samples:";
    for (int id : excluded) std::cerr << ' ' << id;
    std::cerr << '\n';
  }

  double ts_min = samples.begin()->second.front().ts;
  double ts_max = ts_min;
  for (auto& [id, vec] : samples) {
    std::stable_sort(vec.begin(), vec.end(),
                     [](const RawSample& a, const RawSample& b) { return a.ts < b.ts; });
    ts_min = std::min(ts_min, vec.front().ts);
    ts_max = std::max(ts_max, vec.back().ts);
  }

  const long steps = static_cast<long>(std::floor((ts_max - ts_min) / spec.resample_interval)) + 1;
  GroundTruth world(static_cast<int>(samples.size()), steps);

  long gaps = 0;
  std::vector<int> ids;
  int node = 0;
  for (const auto& [id, vec] : samples) {
    ids.push_back(id);
    std::size_t next = 0;
    double value = vec.front().value;  // head cells backfill from the first sample
    for (long t = 0; t < steps; ++t) {
      const double window_end = ts_min + (static_cast<double>(t) + 1.0) * spec.resample_interval;
      bool fresh = false;
      while (next < vec.size() && vec[next].ts < window_end) {
        value = vec[next].value;
        fresh = true;
        ++next;
      }
      if (!fresh) ++gaps;
      world.at(node, t) = value;
    }
    ++node;
  }

  if (report) {
    report->node_ids = std::move(ids);
    report->skipped_rows = skipped;
    report->filled_gaps = gaps;
    report->excluded_node_ids = std::move(excluded);
  }
  return world;
}

}  // namespace wurpoll
