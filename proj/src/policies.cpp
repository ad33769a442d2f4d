#include "wurpoll/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wurpoll/metrics.hpp"

namespace wurpoll {

namespace {

// top-k ids by key desc, ties by lowest id, returned ascending
std::vector<int> top_k(int n, int k, auto key) {
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return key(a) > key(b); });
  if (static_cast<int>(ids.size()) > k) ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::vector<int> RoundRobinPolicy::decide(const SinkView& view) {
  std::vector<int> out;
  out.reserve(view.m);
  for (int k = 0; k < view.m && k < nodes_; ++k)
    out.push_back(static_cast<int>((view.t * view.m + k) % nodes_));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> AoiGreedyPolicy::decide(const SinkView& view) {
  const auto& records = view.records;
  return top_k(static_cast<int>(records.size()), view.m,
               [&](int i) { return static_cast<double>(view.t - records[i].u); });
}

KalmanTracePolicy::KalmanTracePolicy(int nodes, double q, double r,
                                     double trace_threshold, long dt)
    // diffuse prior: nodes the sink has never heard from are due immediately
    : cov_(nodes, Cov{1e4, 0.0, 1.0}),
      q_(q),
      r_(r),
      threshold_(trace_threshold),
      dt_(static_cast<double>(dt)) {
  if (q < 0 || r <= 0) throw std::invalid_argument("kf noise scales must be positive");
}

void KalmanTracePolicy::propagate(Cov& p) const {
  const double dt = dt_;
  const double p11 = p.p11 + 2.0 * dt * p.p12 + dt * dt * p.p22;
  const double p12 = p.p12 + dt * p.p22;
  const double p22 = p.p22;
  // white-noise-acceleration process covariance
  p.p11 = p11 + q_ * dt * dt * dt / 3.0;
  p.p12 = p12 + q_ * dt * dt / 2.0;
  p.p22 = p22 + q_ * dt;
}

void KalmanTracePolicy::measurement_update(Cov& p) const {
  const double s = p.p11 + r_;
  const double k1 = p.p11 / s;
  const double k2 = p.p12 / s;
  p.p22 = p.p22 - k2 * p.p12;
  p.p12 = (1.0 - k1) * p.p12;
  p.p11 = (1.0 - k1) * p.p11;
}

double KalmanTracePolicy::trace(int node) const {
  return cov_[node].p11 + cov_[node].p22;
}

std::vector<int> KalmanTracePolicy::decide(const SinkView& view) {
  if (view.t != last_decide_t_) {  // uncertainty grows once per step
    for (auto& p : cov_) propagate(p);
    last_decide_t_ = view.t;
  }
  std::vector<int> due;
  for (int i = 0; i < static_cast<int>(cov_.size()); ++i)
    if (trace(i) > threshold_) due.push_back(i);
  std::stable_sort(due.begin(), due.end(),
                   [&](int a, int b) { return trace(a) > trace(b); });
  if (static_cast<int>(due.size()) > view.m) due.resize(view.m);
  std::sort(due.begin(), due.end());
  return due;
}

void KalmanTracePolicy::observe(const StepFeedback& fb) {
  for (std::size_t i = 0; i < fb.successes.size(); ++i)
    if (fb.successes[i]) measurement_update(cov_[i]);
}

WhittleAoiiPolicy::WhittleAoiiPolicy(WhittleConfig cfg, bool fairness)
    : cfg_(cfg), fairness_(fairness), lambda_(cfg.lambda) {
  cfg_.validate();
}

std::vector<int> WhittleAoiiPolicy::decide(const SinkView& view) {
  const auto& records = view.records;
  const int n = static_cast<int>(records.size());
  snapshot_ = make_snapshot(records, view.t, cfg_);

  // Nodes without any delivered vector come first; their index is zero until
  // the sink hears from them once.
  std::vector<int> decision;
  for (int i = 0; i < n && static_cast<int>(decision.size()) < view.m; ++i)
    if (!records[i].has_update) decision.push_back(i);
  const bool bootstrapping = !decision.empty();
  const int slots = view.m - static_cast<int>(decision.size());
  if (slots <= 0) return decision;

  if (bootstrapping) {
    // Fill leftover slots from the heard nodes; penalty calibration waits
    // until every node has reported once.
    IndexSnapshot heard = snapshot_;
    for (int i = 0; i < n; ++i)
      if (!records[i].has_update) heard.nodes[i].w = -1.0;  // never eligible
    auto rest = select_waoii(heard, lambda_, slots);
    decision.insert(decision.end(), rest.begin(), rest.end());
    std::sort(decision.begin(), decision.end());
    return decision;
  }

  if (cfg_.dynamic_lambda) {
    std::vector<double> thresholds(n);
    for (int i = 0; i < n; ++i) thresholds[i] = snapshot_.nodes[i].c;
    lambda_ = dynamic_penalty_update(thresholds, lambda_, view.m);
  }

  if (!fairness_) return select_waoii(snapshot_, lambda_, view.m);

  FairSelection sel = select_fwaoii(snapshot_, lambda_, view.m);
  const LossBound lb = fairness_loss_bound(snapshot_, sel.base, sel.decision);
  audits_.push_back({view.t, lb.actual, lb.bound, sel.overflow});
  if (sel.overflow) ++overflow_events_;
  return sel.decision;
}

void WiqlConfig::validate() const {
  if (bins < 2) throw std::invalid_argument("wiql needs at least two bins");
  if (!(aoii_cap > 0)) throw std::invalid_argument("wiql aoii cap must be > 0");
  if (!(alpha_power > 0)) throw std::invalid_argument("wiql alpha power must be > 0");
  if (!(eps0 >= 0 && eps0 <= 1) || !(eps_decay > 0 && eps_decay <= 1) ||
      eps_floor < 0)
    throw std::invalid_argument("wiql exploration schedule out of range");
  if (lambda < 0) throw std::invalid_argument("wiql lambda must be >= 0");
}

WiqlPolicy::WiqlPolicy(int nodes, WiqlConfig cfg, Rng rng)
    : cfg_(cfg),
      nodes_(nodes),
      rng_(rng),
      q_(static_cast<std::size_t>(nodes) * cfg.bins * 2, 0.0),
      visits_(static_cast<std::size_t>(nodes) * cfg.bins * 2, 0) {
  cfg_.validate();
}

int WiqlPolicy::bin_of(double aoii_value) const {
  if (aoii_value >= cfg_.aoii_cap) {
    ++clamp_events_;
    return cfg_.bins - 1;
  }
  const int b = static_cast<int>(aoii_value / cfg_.aoii_cap * cfg_.bins);
  return std::clamp(b, 0, cfg_.bins - 1);
}

double WiqlPolicy::q_value(int node, int bin, int action) const {
  return q_[idx(node, bin, action)];
}

std::vector<int> WiqlPolicy::decide(const SinkView& view) {
  const double eps =
      std::max(cfg_.eps_floor, cfg_.eps0 * std::pow(cfg_.eps_decay,
                                                    static_cast<double>(step_)));
  ++step_;
  if (rng_.next_bernoulli(eps)) {
    // uniform sample of m distinct nodes (partial Fisher-Yates)
    std::vector<int> ids(nodes_);
    for (int i = 0; i < nodes_; ++i) ids[i] = i;
    const int m = std::min(view.m, nodes_);
    for (int k = 0; k < m; ++k) {
      const int j = k + static_cast<int>(rng_.next_below(nodes_ - k));
      std::swap(ids[k], ids[j]);
    }
    ids.resize(m);
    std::sort(ids.begin(), ids.end());
    return ids;
  }
  const auto& records = view.records;
  return top_k(nodes_, view.m, [&](int i) {
    const int s = bin_of(aoii(records[i], view.t));
    return q_value(i, s, 1) - q_value(i, s, 0);
  });
}

void WiqlPolicy::observe(const StepFeedback& fb) {
  for (int i = 0; i < nodes_; ++i) {
    const int s = bin_of(fb.aoii_before[i]);
    const int a = fb.actions[i] ? 1 : 0;
    const int s_next = bin_of(fb.aoii_next[i]);
    const double r = -(fb.aoii_before[i] + (a ? cfg_.lambda : 0.0));

    avg_reward_ += (r - avg_reward_) / static_cast<double>(++reward_count_);

    const std::size_t cell = idx(i, s, a);
    ++visits_[cell];
    const double alpha =
        1.0 / std::pow(1.0 + static_cast<double>(visits_[cell]), cfg_.alpha_power);
    const double next_best =
        std::max(q_value(i, s_next, 0), q_value(i, s_next, 1));
    const double target = cfg_.discounted
                              ? r + cfg_.gamma * next_best
                              : r - avg_reward_ + next_best;
    q_[cell] += alpha * (target - q_[cell]);
  }
}

void PolicyConfig::validate() const {
  static const char* known[] = {"rr", "aoi", "kf", "waoii", "fwaoii", "wiql"};
  if (std::find_if(std::begin(known), std::end(known),
                   [&](const char* k) { return name == k; }) == std::end(known))
    throw std::invalid_argument("unknown policy: " + name);
  whittle.validate();
  wiql.validate();
  if (kf_q < 0 || kf_r <= 0 || kf_trace_threshold < 0)
    throw std::invalid_argument("kf parameters out of range");
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, int nodes,
                                    std::uint64_t seed) {
  cfg.validate();
  if (cfg.name == "rr") return std::make_unique<RoundRobinPolicy>(nodes);
  if (cfg.name == "aoi") return std::make_unique<AoiGreedyPolicy>();
  if (cfg.name == "kf")
    return std::make_unique<KalmanTracePolicy>(nodes, cfg.kf_q, cfg.kf_r,
                                               cfg.kf_trace_threshold);
  if (cfg.name == "waoii")
    return std::make_unique<WhittleAoiiPolicy>(cfg.whittle, /*fairness=*/false);
  if (cfg.name == "fwaoii")
    return std::make_unique<WhittleAoiiPolicy>(cfg.whittle, /*fairness=*/true);
  return std::make_unique<WiqlPolicy>(nodes, cfg.wiql,
                                      Rng::for_stream(seed, /*stream=*/3));
}

}  // namespace wurpoll
