#include <doctest.h>

#include <stdexcept>

#include "wurpoll/suites.hpp"

using namespace wurpoll;

namespace {

SuiteOptions quick_options(int workers) {
  SuiteOptions opt;
  opt.seeds = {1, 2};
  opt.horizon = 600;
  opt.workers = workers;
  return opt;
}

}  // namespace

TEST_CASE("every built-in suite is runnable") {
  for (const auto& name : available_suites()) {
    SuiteOptions opt = quick_options(2);
    opt.seeds = {1};
    opt.horizon = 400;
    const SuiteResult r = run_suite(name, opt);
    CHECK(!r.rows.empty());
    for (const auto& row : r.rows) CHECK(!row.cells.empty());
  }
}

TEST_CASE("parallel execution does not change the table") {
  const SuiteResult serial = run_suite("table4_eta_sweep", quick_options(1));
  const SuiteResult parallel = run_suite("table4_eta_sweep", quick_options(4));
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t k = 0; k < serial.rows.size(); ++k) {
    REQUIRE(serial.rows[k].group == parallel.rows[k].group);
    REQUIRE(serial.rows[k].cells.size() == parallel.rows[k].cells.size());
    for (std::size_t c = 0; c < serial.rows[k].cells.size(); ++c) {
      REQUIRE(serial.rows[k].cells[c].first == parallel.rows[k].cells[c].first);
      REQUIRE(serial.rows[k].cells[c].second == parallel.rows[k].cells[c].second);
    }
  }
}

TEST_CASE("the round-robin reference cell is exactly 100 percent") {
  SuiteOptions opt = quick_options(2);
  opt.seeds = {3};
  const SuiteResult r = run_suite("table2_m_sweep", opt);
  for (const auto& row : r.rows)
    for (const auto& [label, value] : row.cells)
      if (label == "aoi_pct")  // the age policy polls every slot, like rr
        CHECK(value == doctest::Approx(100.0).epsilon(0.02));
}

TEST_CASE("unknown suites list the available ones") {
  try {
    run_suite("nope", quick_options(1));
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("table5_lifetime") != std::string::npos);
  }
}

TEST_CASE("a suite without seeds is rejected") {
  SuiteOptions opt = quick_options(1);
  opt.seeds.clear();
  CHECK_THROWS_AS(run_suite("table4_eta_sweep", opt), std::invalid_argument);
}
