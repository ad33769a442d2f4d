#include "wurpoll/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace wurpoll {

NodeEncoder::NodeEncoder(double beta1, double beta2, long dt)
    : beta1_(beta1), beta2_(beta2), dt_(dt) {
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
    throw std::invalid_argument("encoder smoothing factors must lie in (0,1)");
  if (dt <= 0) throw std::invalid_argument("encoder sampling interval must be > 0");
}

void NodeEncoder::reset(double x1, double x2, long t) {
  initialized_ = true;
  x1_ = x1;
  x2_ = x2;
  last_t_ = t;
}

StateVector NodeEncoder::encode(double z, long t) {
  if (!std::isfinite(z)) throw std::invalid_argument("encoder input must be finite");
  if (!initialized_) {
    initialized_ = true;
    x1_ = z;
    x2_ = 0.0;
    last_t_ = t;
    return {x1_, x2_, t};
  }
  if (t != last_t_ + dt_)
    throw std::logic_error("encoder must be fed at consecutive sampling steps");
  const double dt = static_cast<double>(dt_);
  const double x1_prev = x1_;
  x1_ = beta1_ * z + (1.0 - beta1_) * (x1_prev + x2_ * dt);
  x2_ = beta2_ * (x1_ - x1_prev) / dt + (1.0 - beta2_) * x2_;
  last_t_ = t;
  return {x1_, x2_, t};
}

Estimate extrapolate(const SinkRecord& record, long t) {
  if (t < record.u) throw std::invalid_argument("cannot extrapolate into the past");
  return {record.last.x1 + static_cast<double>(t - record.u) * record.last.x2,
          record.last.x2};
}

void update_pdr(SinkRecord& record, double window_ratio) {
  if (!(window_ratio >= 0.0 && window_ratio <= 1.0))
    throw std::invalid_argument("delivery ratio must lie in [0,1]");
  record.rho_hat = record.beta3 * window_ratio + (1.0 - record.beta3) * record.rho_hat;
}

void apply_update(SinkRecord& record, const StateVector& v, long t) {
  record.last = v;
  record.last.u = t;
  record.u = t;
  record.has_update = true;
}

void PdrWindow::push(bool success) {
  if (static_cast<int>(entries_.size()) < capacity_) {
    entries_.push_back(success);
    successes_ += success ? 1 : 0;
    return;
  }
  successes_ += (success ? 1 : 0) - (entries_[head_] ? 1 : 0);
  entries_[head_] = success;
  head_ = (head_ + 1) % capacity_;
}

double PdrWindow::ratio() const {
  if (entries_.empty()) return 1.0;
  return static_cast<double>(successes_) / static_cast<double>(entries_.size());
}

}  // namespace wurpoll
