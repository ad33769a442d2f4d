#pragma once

#include <span>
#include <string>
#include <vector>

#include "wurpoll/steplog.hpp"

namespace wurpoll {

struct ReconstructionRow {
  long t = 0;
  double truth = 0.0;
  double online_estimate = 0.0;
  double offline_spline = 0.0;
};

// Piecewise cubic Hermite through the received (u, x1) anchors using the
// transmitted rates x2 as slopes; linear beyond the anchor range. A single
// anchor degenerates to the online linear extrapolation.
double hermite_eval(std::span<const UpdateLogRow> anchors, double t);

// Offline reconstruction of one node from a run's logs. The online estimate
// column is taken straight from the step log.
std::vector<ReconstructionRow> reconstruct_node(std::span<const StepLog> logs,
                                                std::span<const UpdateLogRow> updates,
                                                int node);

void write_reconstruction_csv(const std::string& path,
                              std::span<const ReconstructionRow> rows,
                              const std::string& config_hash = "");

}  // namespace wurpoll
