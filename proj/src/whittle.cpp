#include "wurpoll/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wurpoll {

void WhittleConfig::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("activation penalty must be >= 0");
  if (!(eta >= 1.0))  // infinity passes
    throw std::invalid_argument("fairness window must be >= 1 step");
}

double aoii_threshold(const SinkRecord& record, long t) {
  if (t < record.u) throw std::invalid_argument("threshold: t precedes the last update");
  return static_cast<double>(t + 1 - record.u) * std::abs(record.last.x2);
}

double whittle_index(const SinkRecord& record, long t, const WhittleConfig& cfg) {
  const double c = aoii_threshold(record, t);
  return cfg.pdr_weighting ? record.rho_hat * c : c;
}

IndexSnapshot make_snapshot(std::span<const SinkRecord> records, long t,
                            const WhittleConfig& cfg) {
  IndexSnapshot snap;
  snap.nodes.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double c = aoii_threshold(records[i], t);
    snap.nodes[i].c = c;
    snap.nodes[i].w = cfg.pdr_weighting ? records[i].rho_hat * c : c;
    snap.nodes[i].fairness_due =
        std::isfinite(cfg.eta) &&
        static_cast<double>(t - records[i].last_poll_time) >= cfg.eta;
  }
  return snap;
}

double dynamic_penalty_update(std::span<const double> thresholds, double lambda,
                              int m) {
  if (m < 1) throw std::invalid_argument("penalty update needs m >= 1");
  std::vector<int> exceeding;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (thresholds[i] > lambda) exceeding.push_back(static_cast<int>(i));
  if (static_cast<int>(exceeding.size()) <= m) return lambda;
  std::stable_sort(exceeding.begin(), exceeding.end(),
                   [&](int a, int b) { return thresholds[a] > thresholds[b]; });
  return thresholds[exceeding[m - 1]];
}

namespace {

// ids ordered by (w desc, id asc)
std::vector<int> by_index_desc(const IndexSnapshot& snap,
                               const std::vector<int>& ids) {
  std::vector<int> out = ids;
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
    return snap.nodes[a].w > snap.nodes[b].w;
  });
  return out;
}

double sum_w(const IndexSnapshot& snap, std::span<const int> ids) {
  double s = 0.0;
  for (int id : ids) s += snap.nodes[id].w;
  return s;
}

}  // namespace

std::vector<int> select_waoii(const IndexSnapshot& snapshot, double lambda, int m) {
  std::vector<int> eligible;
  for (int i = 0; i < snapshot.size(); ++i)
    if (snapshot.nodes[i].w >= lambda) eligible.push_back(i);
  eligible = by_index_desc(snapshot, eligible);
  if (static_cast<int>(eligible.size()) > m) eligible.resize(m);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

FairSelection select_fwaoii(const IndexSnapshot& snapshot, double lambda, int m) {
  FairSelection out;

  std::vector<int> violators;
  for (int i = 0; i < snapshot.size(); ++i)
    if (snapshot.nodes[i].fairness_due) violators.push_back(i);

  if (violators.empty()) {
    out.decision = select_waoii(snapshot, lambda, m);
    out.base = out.decision;
    return out;
  }

  // Unconstrained top-m: replacement slots ignore the penalty filter.
  std::vector<int> all(snapshot.size());
  for (int i = 0; i < snapshot.size(); ++i) all[i] = i;
  std::vector<int> base = by_index_desc(snapshot, all);
  if (static_cast<int>(base.size()) > m) base.resize(m);
  out.base = base;
  std::sort(out.base.begin(), out.base.end());

  violators = by_index_desc(snapshot, violators);
  if (static_cast<int>(violators.size()) > m) {
    out.overflow = true;
    out.decision.assign(violators.begin(), violators.begin() + m);
    std::sort(out.decision.begin(), out.decision.end());
    return out;
  }

  std::vector<int> decision = base;
  for (int f : violators) {
    if (std::find(decision.begin(), decision.end(), f) != decision.end()) continue;
    if (static_cast<int>(decision.size()) < m) {
      decision.push_back(f);
      continue;
    }
    // Evict the weakest non-violating member; among equals the lowest id stays.
    int victim = -1;
    for (std::size_t k = 0; k < decision.size(); ++k) {
      const int id = decision[k];
      if (snapshot.nodes[id].fairness_due) continue;
      if (victim < 0 || snapshot.nodes[id].w < snapshot.nodes[victim].w ||
          (snapshot.nodes[id].w == snapshot.nodes[victim].w && id > victim))
        victim = id;
    }
    // |violators| <= m guarantees a non-violating victim exists here.
    std::replace(decision.begin(), decision.end(), victim, f);
  }

  out.decision = std::move(decision);
  std::sort(out.decision.begin(), out.decision.end());
  return out;
}

LossBound fairness_loss_bound(const IndexSnapshot& snapshot,
                              std::span<const int> decision_star,
                              std::span<const int> decision_fair) {
  LossBound out;
  out.actual = sum_w(snapshot, decision_star) - sum_w(snapshot, decision_fair);

  std::vector<int> removed, inserted;
  for (int id : decision_star)
    if (std::find(decision_fair.begin(), decision_fair.end(), id) ==
        decision_fair.end())
      removed.push_back(id);
  for (int id : decision_fair)
    if (std::find(decision_star.begin(), decision_star.end(), id) ==
        decision_star.end())
      inserted.push_back(id);
  removed = by_index_desc(snapshot, removed);
  inserted = by_index_desc(snapshot, inserted);

  const std::size_t pairs = std::min(removed.size(), inserted.size());
  for (std::size_t k = 0; k < pairs; ++k)
    out.bound += snapshot.nodes[removed[k]].w - snapshot.nodes[inserted[k]].w;
  for (std::size_t k = pairs; k < removed.size(); ++k)
    out.bound += snapshot.nodes[removed[k]].w;
  for (std::size_t k = pairs; k < inserted.size(); ++k)
    out.bound -= snapshot.nodes[inserted[k]].w;
  return out;
}

}  // namespace wurpoll
