#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "wurpoll/metrics.hpp"

using namespace wurpoll;

namespace {

SinkRecord record_with(double x2, long u) {
  SinkRecord rec;
  apply_update(rec, {0.0, x2, 0}, u);
  return rec;
}

}  // namespace

TEST_CASE("aoii: hand evaluation and the degenerate cases") {
  const SinkRecord rec = record_with(0.5, 3);
  CHECK(aoii(rec, 7) == doctest::Approx(2.0));
  CHECK(aoii(rec, 3) == 0.0);
  const SinkRecord still = record_with(0.0, 3);
  for (long t = 3; t < 100; t += 13) CHECK(aoii(still, t) == 0.0);
  CHECK_THROWS_AS(aoii(rec, 2), std::invalid_argument);
}

TEST_CASE("aoii uses the magnitude of the rate") {
  const SinkRecord rec = record_with(-0.5, 3);
  CHECK(aoii(rec, 7) == doctest::Approx(2.0));
}

TEST_CASE("aoii_next: branch behavior") {
  const SinkRecord rec = record_with(0.5, 3);
  CHECK(aoii_next(rec, 7, false, false) == doctest::Approx(2.5));
  CHECK(aoii_next(rec, 7, true, true) == 0.0);
  // a failed poll evolves exactly like not polling
  CHECK(aoii_next(rec, 7, true, false) == doctest::Approx(2.5));
  CHECK_THROWS_AS(aoii_next(rec, 7, false, true), std::logic_error);
}

TEST_CASE("aoii grows by |x2| per unpolled step") {
  const SinkRecord rec = record_with(-0.3, 10);
  for (long t = 10; t < 60; ++t)
    CHECK(aoii(rec, t + 1) - aoii(rec, t) == doctest::Approx(0.3));
}

TEST_CASE("step cost and reward") {
  const std::vector<double> values = {2.0, 0.0, 1.0};
  const std::vector<std::uint8_t> actions = {1, 0, 0};
  CHECK(step_cost(values, actions, 0.5) == doctest::Approx(3.5));

  const std::vector<double> zeros = {0.0, 0.0};
  const std::vector<std::uint8_t> none = {0, 0};
  CHECK(step_cost(zeros, none, 0.5) == 0.0);

  // lambda = 0 ignores the actions entirely
  const std::vector<std::uint8_t> all = {1, 1, 1};
  CHECK(step_cost(values, all, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("rmse basics") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  CHECK(rmse(a, a) == 0.0);
  const std::vector<double> z = {0.0, 0.0};
  const std::vector<double> ones = {1.0, 1.0};
  CHECK(rmse(z, ones) == doctest::Approx(1.0));
  const std::vector<double> t4 = {0.0, 0.0, 0.0, 0.0};
  const std::vector<double> e4 = {2.0, 0.0, 0.0, 0.0};
  CHECK(rmse(t4, e4) == doctest::Approx(1.0));
  const std::vector<double> empty;
  CHECK_THROWS_AS(rmse(empty, empty), std::invalid_argument);
}

TEST_CASE("lifetime: corner cases evaluate exactly") {
  EnergyModel m;  // defaults: 50/10/10/1 mJ, 162 kJ
  m.omega_tx = 0.0;
  m.omega_wake = 0.0;
  CHECK(lifetime_steps(m) == m.e_max / m.e_sleep);

  m.omega_tx = 1.0;
  m.omega_wake = 1.0;
  CHECK(lifetime_steps(m) == m.e_max / 70.0);

  CHECK(m.e_max == 162'000'000.0);
}

TEST_CASE("energy model validation") {
  EnergyModel m;
  m.omega_tx = 0.5;
  m.omega_wake = 0.3;  // cannot transmit more often than waking
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = EnergyModel{};
  m.e_max = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = EnergyModel{};
  m.omega_wake = 1.5;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("lifetime rejects a zero energy rate") {
  EnergyModel m;
  m.e_sleep = 0.0;
  m.omega_tx = 0.0;
  m.omega_wake = 0.0;
  CHECK_THROWS_AS(lifetime_steps(m), std::invalid_argument);
}

TEST_CASE("lifetime is nonincreasing in both frequencies") {
  EnergyModel m;
  double prev = std::numeric_limits<double>::infinity();
  for (double w = 0.0; w <= 1.0; w += 0.1) {
    m.omega_tx = w * 0.5;
    m.omega_wake = w;
    const double life = lifetime_steps(m);
    CHECK(life <= prev);
    prev = life;
  }
}

TEST_CASE("measured lifetime averages the per-node values") {
  EnergyModel m;
  const std::vector<double> wt = {0.0, 1.0};
  const std::vector<double> ww = {0.0, 1.0};
  const double expect = 0.5 * (m.e_max / m.e_sleep + m.e_max / 70.0);
  CHECK(lifetime_steps(m, wt, ww) == doctest::Approx(expect));
}

TEST_CASE("polling distribution from per-node counts") {
  const std::vector<long> even = {10, 10, 10, 10};
  const std::vector<int> cats = {0, 0, 1, 1};
  auto pct = polling_distribution(std::span<const long>(even), cats, 2);
  CHECK(pct[0] == doctest::Approx(50.0));
  CHECK(pct[1] == doctest::Approx(50.0));

  const std::vector<long> skew = {7, 3, 0, 0};
  pct = polling_distribution(std::span<const long>(skew), cats, 2);
  CHECK(pct[0] == doctest::Approx(100.0));
  CHECK(pct[1] == 0.0);

  const std::vector<int> bad = {0, 0, 5, 1};
  CHECK_THROWS_AS(polling_distribution(std::span<const long>(even), bad, 2),
                  std::invalid_argument);
}

TEST_CASE("polling distribution percentages sum to 100") {
  const std::vector<long> polls = {3, 1, 4, 1, 5, 9, 2, 6};
  const std::vector<int> cats = {0, 1, 2, 0, 1, 2, 0, 1};
  const auto pct = polling_distribution(std::span<const long>(polls), cats, 3);
  double total = 0.0;
  for (double p : pct) total += p;
  CHECK(total == doctest::Approx(100.0).epsilon(1e-4));
}
