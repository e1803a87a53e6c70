#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "acmon/monitor.hpp"
#include "acmon/rng.hpp"
#include "acmon/synthdata.hpp"

using namespace acmon;
using Catch::Matchers::WithinAbs;

namespace {

ReferenceWindow ref_with(double acc, std::size_t n) {
  ReferenceWindow r;
  r.stats = {acc, acc, acc * (1 - acc)};
  r.window_size = n;
  return r;
}

}  // namespace

TEST_CASE("reference from Beta-mixture outcomes", "[monitor]") {
  const auto data = attach_labels(sample_beta_mixture(BetaMixture::original(), 10000, 1), 2);
  const auto ref = build_reference(data, 500, false);
  CHECK_THAT(ref.stats.accuracy, WithinAbs(0.897, 0.01));
  CHECK_THAT(ref.stats.label_variance, WithinAbs(0.0924, 0.006));
  CHECK_FALSE(ref.calibration.has_value());
  CHECK(ref.atc.has_value());
  CHECK(ref.window_size == 500);

  const auto cal = build_reference(data, 500, true);
  REQUIRE(cal.calibration.has_value());
  CHECK_THAT(cal.stats.accuracy, WithinAbs(0.897, 0.015));
}

TEST_CASE("reference ATC threshold with all-correct outcomes is the minimum score", "[monitor]") {
  std::vector<ScoredOutcome> d{{0.8, true}, {0.55, true}, {0.9, true}};
  CHECK(build_reference(d, 3, false).atc->t == 0.55);
  CHECK_THROWS_AS(build_reference(d, 0, false), Error);
  CHECK_THROWS_AS(build_reference({}, 5, false), Error);
}

TEST_CASE("control limits", "[monitor]") {
  const auto [lo, hi] = control_limits(ref_with(0.897, 500), 3.0);
  CHECK_THAT(lo, WithinAbs(0.856, 5e-4));
  CHECK_THAT(hi, WithinAbs(0.938, 5e-4));
  CHECK_THAT(hi - 0.897, WithinAbs(0.0408, 5e-4));

  const auto one = control_limits(ref_with(1.0, 500), 3.0);
  CHECK(one.first == 1.0);
  CHECK(one.second == 1.0);
  const auto zero_z = control_limits(ref_with(0.7, 50), 0.0);
  CHECK(zero_z.first == 0.7);
  CHECK(zero_z.second == 0.7);
  const auto clamped = control_limits(ref_with(0.5, 1), 3.0);
  CHECK(clamped.first == 0.0);
  CHECK(clamped.second == 1.0);
}

TEST_CASE("all-zero window raises an alarm", "[monitor]") {
  const auto v = evaluate_window(ref_with(0.897, 500), std::vector<double>(500, 0.0));
  CHECK(v.alarm);
  CHECK_FALSE(v.partial);
  REQUIRE(v.estimate.interval.has_value());
  CHECK(v.estimate.interval->hi == 0.0);
  CHECK_THROWS_AS(evaluate_window(ref_with(0.897, 500), std::vector<double>{}), Error);
}

TEST_CASE("alarm is a pure function of the estimate and limits", "[monitor][property]") {
  const auto ref = build_reference(attach_labels(sample_beta_mixture(BetaMixture::original(), 4000, 5), 6), 200, false);
  for (auto method : {Method::AC, Method::ATC, Method::DocFeat, Method::BinomialBaseline}) {
    for (std::uint64_t w = 0; w < 20; ++w) {
      const auto scores = mix_gradual(BetaMixture::original(), BetaMixture::shifted(), w / 19.0, 200, w);
      MonitorOptions opt;
      opt.method = method;
      const auto a = evaluate_window(ref, scores, opt, w);
      const auto b = evaluate_window(ref, scores, opt, w);
      CHECK(a.alarm == is_alarm(a.estimate.point, a.control_lo, a.control_hi));
      CHECK(a.to_json() == b.to_json());
      CHECK(a.estimate.interval.has_value() == (method == Method::AC));
    }
  }
}

TEST_CASE("in-distribution windows rarely alarm", "[monitor][property]") {
  const auto ref = build_reference(attach_labels(sample_beta_mixture(BetaMixture::original(), 20000, 7), 8), 500, false);
  std::size_t alarms = 0;
  const std::size_t windows = 2000;
  for (std::size_t w = 0; w < windows; ++w) {
    const auto s = sample_beta_mixture(BetaMixture::original(), 500, derive_seed(99, streams::kMonitor, w));
    alarms += evaluate_window(ref, s).alarm;
  }
  CHECK(double(alarms) / windows <= 0.01);
}

TEST_CASE("windowed stream keeps a partial final window", "[monitor]") {
  const auto ref = ref_with(0.9, 100);
  const auto scores = sample_beta_mixture(BetaMixture::original(), 1050, 3);
  const auto verdicts = monitor_stream(ref, scores);
  REQUIRE(verdicts.size() == 11);
  std::size_t consumed = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    CHECK(verdicts[i].window_id == i);
    CHECK(verdicts[i].partial == (i == 10));
    consumed += verdicts[i].estimate.window_size;
  }
  CHECK(consumed == scores.size());
  const auto limits50 = control_limits(ref, 3.0, 50);
  CHECK(verdicts.back().control_lo == limits50.first);

  // Windows are consecutive slices of the stream.
  const auto third = evaluate_window(ref, std::span(scores).subspan(200, 100), {}, 2);
  CHECK(third.to_json() == verdicts[2].to_json());
  CHECK(monitor_stream(ref, std::vector<double>{}).empty());
}

TEST_CASE("calibration map is applied before estimating", "[monitor]") {
  auto ref = ref_with(0.9, 4);
  ref.calibration = CalibrationMap({{0.0, 0.5}, {1.0, 0.5}});
  const auto v = evaluate_window(ref, std::vector<double>{0.1, 0.2, 0.9, 1.0});
  CHECK(v.estimate.point == 0.5);
}

TEST_CASE("reference JSON round trip", "[monitor]") {
  const auto data = attach_labels(sample_beta_mixture(BetaMixture::original(), 2000, 10), 11);
  const auto ref = build_reference(data, 250, true);
  const auto back = ReferenceWindow::from_json(nlohmann::json::parse(ref.to_json().dump()));
  CHECK(back.window_size == 250);
  CHECK(back.stats.accuracy == ref.stats.accuracy);
  CHECK(back.atc->t == ref.atc->t);
  CHECK(back.calibration->apply(0.77) == ref.calibration->apply(0.77));
  CHECK_THROWS_AS(ReferenceWindow::from_json(nlohmann::json::parse("{\"window_size\": 3}")), Error);
  auto bad = ref.to_json();
  bad["window_size"] = 0;
  CHECK_THROWS_AS(ReferenceWindow::from_json(bad), Error);
}

TEST_CASE("record parsing", "[monitor]") {
  std::istringstream in(
      "{\"score\": 0.9, \"predicted\": 1, \"label\": 1}\n"
      "\n"
      "{\"score\": 0.6, \"predicted\": 0, \"label\": null}\n"
      "{\"score\": 0.7, \"predicted\": 0, \"label\": 1}\n");
  const auto recs = read_records(in);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].correct());
  CHECK_FALSE(recs[1].label.has_value());
  CHECK_FALSE(recs[2].correct());
  CHECK_THROWS_AS(labelled_outcomes(recs), Error);

  std::istringstream bad("{\"score\": 0.9, \"predicted\": 1}\n{\"score\": 1.9, \"predicted\": 1}\n");
  try {
    read_records(bad);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_record("not json", 1), Error);
  CHECK_THROWS_AS(parse_record("{\"score\": 0.5, \"predicted\": 2}", 1), Error);
}
