#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wurpoll/world.hpp"

using namespace wurpoll;

namespace {

ScenarioSpec noiseless_one(long horizon) {
  ScenarioSpec s = scenario_one();
  for (auto& c : s.categories) c.noise_sigma = 0.0;
  s.horizon = horizon;
  return s;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("scenario one carries the published category parameters") {
  const ScenarioSpec s = scenario_one();
  REQUIRE(s.categories.size() == 2);
  CHECK(s.categories[0].amplitude == 5.0);
  CHECK(s.categories[0].period == 500.0);
  CHECK(s.categories[0].noise_sigma == 0.1);
  CHECK(s.categories[1].amplitude == 0.0);
  CHECK(s.categories[1].noise_sigma == 0.05);
  CHECK(s.node_count() == 10);
}

TEST_CASE("scenario two periods split slow/moderate/rapid") {
  const ScenarioSpec s = scenario_two();
  REQUIRE(s.categories.size() == 3);
  CHECK(s.categories[0].period == 1500.0);
  CHECK(s.categories[1].period == 1000.0);
  CHECK(s.categories[2].period == 500.0);
  CHECK(s.node_count() == 30);
}

TEST_CASE("noiseless generator evaluates the sinusoid exactly") {
  ScenarioSpec s = noiseless_one(200);
  const GroundTruth world = generate_synthetic(s, 7);
  // t=0: sin(0)=0
  CHECK(world.value(0, 0) == doctest::Approx(20.0));
  // quarter period: mean + amplitude
  CHECK(world.value(0, 125) == doctest::Approx(25.0));
  // static category stays at the mean
  CHECK(world.value(7, 33) == doctest::Approx(20.0));
}

TEST_CASE("generator is a pure function of spec and seed") {
  ScenarioSpec s = scenario_one();
  s.horizon = 300;
  const GroundTruth a = generate_synthetic(s, 42);
  const GroundTruth b = generate_synthetic(s, 42);
  for (int i = 0; i < a.node_count(); ++i)
    for (long t = 0; t < a.step_count(); ++t)
      REQUIRE(a.value(i, t) == b.value(i, t));
  const GroundTruth c = generate_synthetic(s, 43);
  bool any_diff = false;
  for (long t = 0; t < c.step_count() && !any_diff; ++t)
    any_diff = c.value(0, t) != a.value(0, t);
  CHECK(any_diff);
}

TEST_CASE("per-node streams: adding a category does not perturb existing series") {
  ScenarioSpec s = scenario_one();
  s.horizon = 100;
  const GroundTruth small = generate_synthetic(s, 5);
  ScenarioSpec bigger = s;
  bigger.categories.push_back({20.0, 1.0, 100.0, 0.2, 4});
  const GroundTruth big = generate_synthetic(bigger, 5);
  for (int i = 0; i < small.node_count(); ++i)
    for (long t = 0; t < 100; ++t)
      REQUIRE(small.value(i, t) == big.value(i, t));
}

TEST_CASE("noiseless amplitude bound |z - mean| <= A") {
  ScenarioSpec s = noiseless_one(1000);
  const GroundTruth world = generate_synthetic(s, 11);
  for (int i = 0; i < world.node_count(); ++i) {
    const double a = s.categories[s.category_of(i)].amplitude;
    for (long t = 0; t < 1000; ++t)
      REQUIRE(std::abs(world.value(i, t) - 20.0) <= a + 1e-12);
  }
}

TEST_CASE("reversal swaps the first two categories exactly") {
  ScenarioSpec s = noiseless_one(400);
  s.reversal_time = 200;
  const GroundTruth world = generate_synthetic(s, 3);

  const GroundTruth plain = generate_synthetic(noiseless_one(400), 3);
  ScenarioSpec swapped = noiseless_one(400);
  std::swap(swapped.categories[0].amplitude, swapped.categories[1].amplitude);
  std::swap(swapped.categories[0].period, swapped.categories[1].period);
  const GroundTruth mirror = generate_synthetic(swapped, 3);

  // noiseless, so the two half-traces compare exactly
  for (int i = 0; i < world.node_count(); ++i)
    for (long t = 0; t < 400; ++t) {
      if (t < 200)
        REQUIRE(world.value(i, t) == plain.value(i, t));
      else
        REQUIRE(world.value(i, t) == mirror.value(i, t));
    }
}

TEST_CASE("invalid category parameters are rejected") {
  ScenarioSpec s = scenario_one();
  s.categories[0].period = 0.0;
  CHECK_THROWS_AS(generate_synthetic(s, 1), std::invalid_argument);
  s = scenario_one();
  s.categories[1].noise_sigma = -0.1;
  CHECK_THROWS_AS(generate_synthetic(s, 1), std::invalid_argument);
  s = scenario_one();
  s.reversal_time = 99999;
  s.horizon = 100;
  CHECK_THROWS_AS(generate_synthetic(s, 1), std::invalid_argument);
}

TEST_CASE("trace: identity ingestion of a single-node file") {
  const auto path = temp_file("wurpoll_trace_identity.txt");
  {
    std::ofstream out(path);
    out << "0 0 0 1 1.0\n0 0 1 1 2.0\n0 0 2 1 3.0\n";
  }
  TraceSpec spec;
  spec.path = path.string();
  spec.node_column = 3;
  spec.time_column = 2;
  spec.value_column = 4;
  spec.resample_interval = 1.0;
  TraceLoadReport report;
  const GroundTruth world = load_trace(spec, &report);
  REQUIRE(world.node_count() == 1);
  REQUIRE(world.step_count() == 3);
  CHECK(world.value(0, 0) == 1.0);
  CHECK(world.value(0, 1) == 2.0);
  CHECK(world.value(0, 2) == 3.0);
  CHECK(report.skipped_rows == 0);
  CHECK(report.filled_gaps == 0);
}

TEST_CASE("trace: gaps forward-fill against a hand-resampled fixture") {
  // two nodes, ten rows, deliberate holes; resample interval 1
  const auto path = temp_file("wurpoll_trace_gaps.txt");
  {
    std::ofstream out(path);
    out << "0 0 0 1 10.0\n"
           "0 0 0 2 50.0\n"
           "0 0 2 1 12.0\n"   // node 1 skips ts=1
           "0 0 3 2 53.0\n"   // node 2 skips ts=1,2
           "0 0 4 1 14.0\n"
           "0 0 4 2 54.0\n"
           "0 0 6 1 16.0\n"   // node 1 skips ts=5
           "0 0 6 2 56.0\n"   // node 2 skips ts=5
           "bad row\n"
           "0 0 6 7\n";       // too few columns
  }
  TraceSpec spec;
  spec.path = path.string();
  TraceLoadReport report;
  const GroundTruth world = load_trace(spec, &report);
  REQUIRE(world.node_count() == 2);
  REQUIRE(world.step_count() == 7);
  // hand-resampled node 1: 10 10 12 12 14 14 16
  const double n1[] = {10, 10, 12, 12, 14, 14, 16};
  // hand-resampled node 2: 50 50 50 53 54 54 56
  const double n2[] = {50, 50, 50, 53, 54, 54, 56};
  for (long t = 0; t < 7; ++t) {
    CHECK(world.value(0, t) == n1[t]);
    CHECK(world.value(1, t) == n2[t]);
  }
  CHECK(report.skipped_rows == 2);
  CHECK(report.filled_gaps == 6);  // node1 carries ts 1,3,5; node2 carries ts 1,2,5
}

TEST_CASE("trace: duplicate column mapping is rejected") {
  TraceSpec spec;
  spec.path = "whatever";
  spec.node_column = 2;
  spec.time_column = 2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("trace: all rows malformed is a load error") {
  const auto path = temp_file("wurpoll_trace_bad.txt");
  {
    std::ofstream out(path);
    out << "x y z\nw\n";
  }
  TraceSpec spec;
  spec.path = path.string();
  CHECK_THROWS(load_trace(spec));
}

TEST_CASE("trace: comma-separated files are auto-detected") {
  const auto path = temp_file("wurpoll_trace_commas.csv");
  {
    std::ofstream out(path);
    out << "d,t,0,1,21.5\nd,t,1,1,22.5\n";
  }
  TraceSpec spec;
  spec.path = path.string();
  const GroundTruth world = load_trace(spec);
  REQUIRE(world.step_count() == 2);
  CHECK(world.value(0, 1) == 22.5);
}
