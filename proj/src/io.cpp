#include "wurpoll/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wurpoll {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

void stamp(std::ofstream& out, const std::string& config_hash) {
  if (!config_hash.empty()) out << "# config " << config_hash << "\n";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_steps_csv(const std::string& path, std::span<const StepLog> logs,
                     const std::string& config_hash) {
  auto out = open_out(path);
  stamp(out, config_hash);
  out << "t,node,action,success,aoii,truth,estimate_x1\n";
  for (const auto& row : logs) {
    out << row.t << ',' << row.node << ',' << int(row.action) << ','
        << int(row.success) << ',' << format_double(row.aoii) << ','
        << format_double(row.truth) << ',' << format_double(row.estimate) << '\n';
  }
}

void write_updates_csv(const std::string& path, std::span<const UpdateLogRow> rows,
                       const std::string& config_hash) {
  auto out = open_out(path);
  stamp(out, config_hash);
  out << "node_id,u,x1,x2\n";
  for (const auto& row : rows)
    out << row.node << ',' << row.u << ',' << format_double(row.x1) << ','
        << format_double(row.x2) << '\n';
}

void write_index_dump_csv(const std::string& path, std::span<const IndexLogRow> rows,
                          const std::string& config_hash) {
  auto out = open_out(path);
  stamp(out, config_hash);
  out << "t,node,W,c,fairness_flag\n";
  for (const auto& row : rows)
    out << row.t << ',' << row.node << ',' << format_double(row.w) << ','
        << format_double(row.c) << ',' << int(row.fairness) << '\n';
}

void write_summary_json(const std::string& path, const RunSummary& s) {
  nlohmann::json j;
  j["policy"] = s.policy;
  j["config_hash"] = s.config_hash;
  j["horizon"] = s.horizon;
  j["node_count"] = s.node_count;
  j["m"] = s.m;
  j["seed"] = s.seed;
  j["total_polls"] = s.total_polls;
  j["total_packets"] = s.total_packets;
  j["successful_polls"] = s.successful_polls;
  j["polls_per_node"] = s.polls_per_node;
  j["attempts_per_node"] = s.attempts_per_node;
  j["mean_aoii"] = s.mean_aoii;
  j["mean_reward"] = s.mean_reward;
  j["rmse_per_node"] = s.rmse_per_node;
  j["rmse_overall"] = s.rmse_overall;
  j["lifetime_steps"] = s.lifetime_in_steps;
  j["lifetime_years"] = s.lifetime_in_years;
  j["polls_per_category_pct"] = s.polls_per_category_pct;
  j["fairness_overflow_events"] = s.fairness_overflow_events;
  j["aoii_clamp_events"] = s.aoii_clamp_events;
  j["lambda_final"] = s.lambda_final;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<StepLog> read_steps_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<StepLog> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // header row
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() < 7) throw std::runtime_error("malformed steps row: " + line);
    StepLog row;
    row.t = std::stol(f[0]);
    row.node = std::stoi(f[1]);
    row.action = static_cast<std::uint8_t>(std::stoi(f[2]));
    row.success = static_cast<std::uint8_t>(std::stoi(f[3]));
    row.aoii = std::stod(f[4]);
    row.truth = std::stod(f[5]);
    row.estimate = std::stod(f[6]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<UpdateLogRow> read_updates_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<UpdateLogRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() < 4) throw std::runtime_error("malformed updates row: " + line);
    rows.push_back({std::stoi(f[0]), std::stol(f[1]), std::stod(f[2]), std::stod(f[3])});
  }
  return rows;
}

}  // namespace wurpoll
