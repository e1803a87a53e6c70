#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "acmon/experiments.hpp"

using namespace acmon;
using Catch::Matchers::WithinAbs;

namespace {

CalibratedSimConfig small_sim(unsigned threads) {
  CalibratedSimConfig c;
  c.seed = 42;
  c.reference_n = 2000;
  c.sweep_trials = 50;
  c.sweep_sizes = {100};
  c.shift_steps = 4;
  c.coverage_trials = 200;
  c.coverage_sizes = {100, 200};
  c.threads = threads;
  return c;
}

CovariateShiftConfig small_shift(unsigned threads) {
  CovariateShiftConfig c;
  c.seed = 7;
  c.train_easy = 1600;
  c.train_hard = 400;
  c.calib_easy = c.setup_easy = 800;
  c.calib_hard = c.setup_hard = 200;
  c.trials = 20;
  c.sample_size = 100;
  c.threads = threads;
  return c;
}

template <typename R, typename W>
std::string csv(const R& r, W write) {
  std::ostringstream os;
  write(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("pearson", "[experiments]") {
  CHECK_THAT(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), WithinAbs(1.0, 1e-12));
  CHECK_THAT(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}), WithinAbs(0.8, 1e-12));
  CHECK(pearson(std::vector<double>{1, 1}, std::vector<double>{1, 2}) == 0.0);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST_CASE("calibrated simulation shape and determinism", "[experiments]") {
  const auto a = run_calibrated_simulation(small_sim(1));
  const auto b = run_calibrated_simulation(small_sim(4));
  CHECK(a.sweep.size() == 5);
  CHECK(a.coverage.size() == 4);
  CHECK(csv(a, write_sweep_csv) == csv(b, write_sweep_csv));
  CHECK(csv(a, write_coverage_csv) == csv(b, write_coverage_csv));
  for (const auto& c : a.sweep) CHECK(std::abs(c.ac_mean) < 0.02);
  for (const auto& c : a.coverage) {
    CHECK(c.pb_coverage > 0.85);
    CHECK(c.sem_coverage >= c.pb_coverage);
  }
  CHECK(csv(a, write_sweep_csv).rfind("shift_fraction,window_size,trials,", 0) == 0);

  auto more = small_sim(1);
  more.sweep_trials = 60;
  const auto c = run_calibrated_simulation(more);
  // Extra trials leave the reference untouched.
  CHECK(c.reference.accuracy == a.reference.accuracy);
}

TEST_CASE("calibrated simulation rejects bad configs", "[experiments]") {
  auto c = small_sim(1);
  c.level = 1.0;
  CHECK_THROWS_AS(run_calibrated_simulation(c), Error);
  c = small_sim(1);
  c.shift_steps = 0;
  CHECK_THROWS_AS(run_calibrated_simulation(c), Error);
}

TEST_CASE("covariate shift shape and determinism", "[experiments]") {
  const auto a = run_covariate_shift(small_shift(1));
  const auto b = run_covariate_shift(small_shift(3));
  CHECK(a.cells.size() == 2 * 4 * 4);
  CHECK(csv(a, write_shift_csv) == csv(b, write_shift_csv));
  CHECK(csv(a, write_correlation_csv) == csv(b, write_correlation_csv));
  // 6 estimators x (2 scenarios + pooled)
  CHECK(a.correlations.size() == 18);
  for (const auto& c : a.cells) {
    CHECK(c.test_accuracy > 0.4);
    CHECK(c.ace_u >= 0.0);
    CHECK(c.mae_ac_c >= 0.0);
  }
  REQUIRE(a.find(Scenario::LinearBoundary, ModelKind::BayesOptimal, 0) != nullptr);
  CHECK(a.find(Scenario::LinearBoundary, ModelKind::BayesOptimal, 7) == nullptr);
}

TEST_CASE("covariate shift config validation", "[experiments]") {
  auto c = small_shift(1);
  c.shift_levels = {5};
  CHECK_THROWS_AS(run_covariate_shift(c), Error);
  c = small_shift(1);
  c.models.clear();
  CHECK_THROWS_AS(run_covariate_shift(c), Error);
}
