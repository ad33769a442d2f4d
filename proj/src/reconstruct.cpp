#include "wurpoll/reconstruct.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "wurpoll/io.hpp"

namespace wurpoll {

double hermite_eval(std::span<const UpdateLogRow> anchors, double t) {
  if (anchors.empty()) throw std::invalid_argument("hermite: no anchors");
  const auto& first = anchors.front();
  const auto& last = anchors.back();
  if (anchors.size() == 1 || t <= static_cast<double>(first.u))
    return first.x1 + (t - static_cast<double>(first.u)) * first.x2;
  if (t >= static_cast<double>(last.u))
    return last.x1 + (t - static_cast<double>(last.u)) * last.x2;

  // rightmost anchor with u <= t
  std::size_t lo = 0;
  for (std::size_t k = 1; k < anchors.size(); ++k) {
    if (static_cast<double>(anchors[k].u) <= t)
      lo = k;
    else
      break;
  }
  const auto& a = anchors[lo];
  const auto& b = anchors[lo + 1];
  const double h = static_cast<double>(b.u - a.u);
  if (h <= 0.0) return a.x1;  // duplicate anchor step
  const double s = (t - static_cast<double>(a.u)) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * a.x1 + h10 * h * a.x2 + h01 * b.x1 + h11 * h * b.x2;
}

std::vector<ReconstructionRow> reconstruct_node(std::span<const StepLog> logs,
                                                std::span<const UpdateLogRow> updates,
                                                int node) {
  std::vector<UpdateLogRow> anchors;
  for (const auto& row : updates)
    if (row.node == node) anchors.push_back(row);
  std::stable_sort(anchors.begin(), anchors.end(),
                   [](const UpdateLogRow& a, const UpdateLogRow& b) { return a.u < b.u; });

  std::vector<ReconstructionRow> out;
  for (const auto& row : logs) {
    if (row.node != node) continue;
    ReconstructionRow r;
    r.t = row.t;
    r.truth = row.truth;
    r.online_estimate = row.estimate;
    r.offline_spline = anchors.empty()
                           ? row.estimate
                           : hermite_eval(anchors, static_cast<double>(row.t));
    out.push_back(r);
  }
  if (out.empty()) throw std::invalid_argument("reconstruct: node absent from log");
  return out;
}

void write_reconstruction_csv(const std::string& path,
                              std::span<const ReconstructionRow> rows,
                              const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!config_hash.empty()) out << "# config " << config_hash << "\n";
  out << "t,truth,online_estimate,offline_spline\n";
  for (const auto& r : rows)
    out << r.t << ',' << format_double(r.truth) << ','
        << format_double(r.online_estimate) << ','
        << format_double(r.offline_spline) << '\n';
}

}  // namespace wurpoll
