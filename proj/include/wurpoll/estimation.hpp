#pragma once

#include <vector>

namespace wurpoll {

// The unit of transmission: point-in-time value, rate of change, encode step.
struct StateVector {
  double x1 = 0.0;
  double x2 = 0.0;
  long u = 0;
};

// Node-side double-EWMA encoder. Smooths the raw measurement into x1 and the
// per-step rate of change into x2; runs every step so the state is warm
// whenever the node is polled.
class NodeEncoder {
 public:
  NodeEncoder(double beta1, double beta2, long dt);

  // First call initializes to (z, 0). Subsequent calls must come exactly one
  // sampling interval apart.
  StateVector encode(double z, long t);

  // Warm start from a known state (checkpoint restore, tests).
  void reset(double x1, double x2, long t);

  bool initialized() const { return initialized_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }

 private:
  double beta1_;
  double beta2_;
  long dt_;
  bool initialized_ = false;
  double x1_ = 0.0;
  double x2_ = 0.0;
  long last_t_ = 0;
};

// Sink-side belief about one node: last received vector, last update step,
// link-quality estimate and last poll step. AoII and the polling indices are
// computed from exactly these fields.
struct SinkRecord {
  StateVector last;            // vector received at step u
  long u = 0;
  bool has_update = false;     // false until the first successful delivery
  double rho_hat = 1.0;        // optimistic until measured
  double beta3 = 0.1;
  long last_poll_time = 0;
};

struct Estimate {
  double x1 = 0.0;
  double x2 = 0.0;
};

// Linear extrapolation from the last received vector: x1 advances by
// (t - u) * x2, x2 is held. t must not precede the update step.
Estimate extrapolate(const SinkRecord& record, long t);

// EWMA of the windowed delivery ratio: rho_hat <- b3*ratio + (1-b3)*rho_hat.
void update_pdr(SinkRecord& record, double window_ratio);

// Store a successfully delivered vector; the record's AoII at step t is zero
// immediately afterwards.
void apply_update(SinkRecord& record, const StateVector& v, long t);

// Trailing success/failure window backing the PDR ratio.
class PdrWindow {
 public:
  explicit PdrWindow(int capacity) : capacity_(capacity) {}

  void push(bool success);
  double ratio() const;  // 1.0 while empty
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  int capacity_;
  int head_ = 0;
  int successes_ = 0;
  std::vector<bool> entries_;
};

}  // namespace wurpoll
