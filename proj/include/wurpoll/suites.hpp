#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wurpoll/engine.hpp"

namespace wurpoll {

struct SuiteOptions {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  long horizon = 10000;
  int workers = 1;
};

// One output row: a sweep point plus named cells (means and sample standard
// deviations across seeds).
struct SuiteRow {
  std::string group;
  std::vector<std::pair<std::string, double>> cells;
};

struct SuiteResult {
  std::string name;
  std::vector<std::string> columns;
  std::vector<SuiteRow> rows;
};

std::vector<std::string> available_suites();

// Built-in experiment grids. Packet percentages inside a suite are relative
// to the round-robin run sharing the same seed and world, so the RR cell is
// exactly 100.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

void write_suite_csv(const std::string& path, const SuiteResult& result);
void write_suite_json(const std::string& path, const SuiteResult& result);

}  // namespace wurpoll
