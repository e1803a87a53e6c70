#pragma once

// Batch-windowed accuracy monitoring with p-chart control limits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "acmon/calibration.hpp"
#include "acmon/error.hpp"
#include "acmon/estimators.hpp"

namespace acmon {

struct ReferenceWindow {
  SourceStats stats;
  std::optional<CalibrationMap> calibration;
  std::optional<AtcThreshold> atc;
  std::size_t window_size = 1;

  void validate() const {
    if (window_size == 0) throw Error(ErrorKind::InvalidArgument, "window size must be at least 1");
    for (double v : {stats.accuracy, stats.avg_confidence, stats.label_variance}) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw Error(ErrorKind::OutOfRange, "reference statistics must lie in [0, 1]");
      }
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["stats"] = stats.to_json();
    j["calibration"] = calibration ? calibration->to_json() : nlohmann::json(nullptr);
    j["atc_threshold"] = atc ? nlohmann::json(atc->t) : nlohmann::json(nullptr);
    j["window_size"] = window_size;
    return j;
  }

  static ReferenceWindow from_json(const nlohmann::json& j) {
    try {
      ReferenceWindow r;
      r.stats = SourceStats::from_json(j.at("stats"));
      if (j.contains("calibration") && !j["calibration"].is_null()) {
        r.calibration = CalibrationMap::from_json(j["calibration"]);
      }
      if (j.contains("atc_threshold") && !j["atc_threshold"].is_null()) {
        r.atc = AtcThreshold{j["atc_threshold"].get<double>()};
      }
      r.window_size = j.at("window_size").get<std::size_t>();
      r.validate();
      return r;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("reference file: ") + e.what());
    }
  }
};

/// Aggregates labelled reference outcomes into monitor state.
///
/// calibrate=false: stats and the ATC threshold come from all records and the
/// scores are used raw.
/// calibrate=true: the first half (in input order) fits the isotonic map; the
/// second half, after mapping, supplies the stats and the ATC threshold, so
/// neither is measured on the data the map was fitted to.
inline ReferenceWindow build_reference(std::span<const ScoredOutcome> data, std::size_t n_window, bool calibrate) {
  if (n_window == 0) throw Error(ErrorKind::InvalidArgument, "window size must be at least 1");
  if (data.empty()) throw Error(ErrorKind::EmptyInput, "reference set is empty");
  ReferenceWindow ref;
  ref.window_size = n_window;
  if (!calibrate) {
    ref.stats = SourceStats::from_outcomes(data);
    ref.atc = atc_fit(data);
    return ref;
  }
  if (data.size() < 4) throw Error(ErrorKind::InvalidArgument, "calibrated reference needs at least 4 records");
  const std::size_t half = data.size() / 2;
  ref.calibration = fit_isotonic(data.first(half));
  std::vector<ScoredOutcome> held;
  held.reserve(data.size() - half);
  for (const auto& o : data.subspan(half)) held.push_back({ref.calibration->apply(o.score), o.correct});
  ref.stats = SourceStats::from_outcomes(held);
  ref.atc = atc_fit(held);
  return ref;
}

/// p-chart limits accuracy -+ z sqrt(acc (1 - acc) / n), clamped to [0, 1].
inline std::pair<double, double> control_limits(const ReferenceWindow& ref, double z, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "window size must be at least 1");
  const double p = ref.stats.accuracy;
  const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

inline std::pair<double, double> control_limits(const ReferenceWindow& ref, double z) {
  return control_limits(ref, z, ref.window_size);
}

struct MonitorOptions {
  Method method = Method::AC;
  double level = 0.95;
  double z = 3.0;
  IntervalConvention convention = IntervalConvention::Conservative;
};

struct MonitorVerdict {
  std::size_t window_id = 0;
  EstimateReport estimate;
  double control_lo = 0.0;
  double control_hi = 1.0;
  bool alarm = false;
  bool partial = false;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["window_id"] = window_id;
    j["estimate"] = estimate.to_json();
    j["control_lo"] = control_lo;
    j["control_hi"] = control_hi;
    j["alarm"] = alarm;
    j["partial"] = partial;
    return j;
  }
};

inline bool is_alarm(double point, double lo, double hi) { return point < lo || point > hi; }

/// Scores one window. Limits are computed for the window's actual size, which
/// only differs from the reference size for a partial final window.
inline MonitorVerdict evaluate_window(const ReferenceWindow& ref, std::span<const double> scores,
                                      const MonitorOptions& opt = {}, std::size_t window_id = 0) {
  if (scores.empty()) throw Error(ErrorKind::EmptyInput, "window " + std::to_string(window_id) + " is empty");
  std::vector<double> mapped = ref.calibration ? ref.calibration->apply(scores)
                                               : std::vector<double>(scores.begin(), scores.end());
  MonitorVerdict v;
  v.window_id = window_id;
  v.partial = scores.size() != ref.window_size;
  v.estimate.method = opt.method;
  v.estimate.window_size = scores.size();
  switch (opt.method) {
    case Method::AC:
      v.estimate.point = ac_point(mapped);
      v.estimate.interval = ac_interval(mapped, opt.level, opt.convention);
      break;
    case Method::ATC:
      if (!ref.atc) throw Error(ErrorKind::NotFitted, "reference has no ATC threshold");
      v.estimate.point = atc_estimate(*ref.atc, mapped);
      break;
    case Method::DocFeat:
      v.estimate.point = docfeat_estimate(ref.stats, mapped);
      break;
    case Method::BinomialBaseline:
      detail::require_scores(mapped);
      v.estimate.point = binomial_baseline(ref.stats);
      break;
  }
  const auto [lo, hi] = control_limits(ref, opt.z, scores.size());
  v.control_lo = lo;
  v.control_hi = hi;
  v.alarm = is_alarm(v.estimate.point, lo, hi);
  return v;
}

// Cuts a score stream into consecutive non-overlapping windows of the
// reference size. A trailing remainder becomes a partial window.
class WindowedMonitor {
 public:
  WindowedMonitor(ReferenceWindow ref, MonitorOptions opt) : ref_(std::move(ref)), opt_(opt) {
    ref_.validate();
    buffer_.reserve(ref_.window_size);
  }

  // Returns a verdict whenever the pushed score completes a window.
  std::optional<MonitorVerdict> push(double score) {
    buffer_.push_back(score);
    ++consumed_;
    if (buffer_.size() < ref_.window_size) return std::nullopt;
    return emit();
  }

  // Flushes the remainder, if any, as a partial window.
  std::optional<MonitorVerdict> finish() {
    if (buffer_.empty()) return std::nullopt;
    return emit();
  }

  std::size_t consumed() const noexcept { return consumed_; }
  std::size_t windows_emitted() const noexcept { return next_id_; }
  const ReferenceWindow& reference() const noexcept { return ref_; }

 private:
  MonitorVerdict emit() {
    auto v = evaluate_window(ref_, buffer_, opt_, next_id_++);
    buffer_.clear();
    return v;
  }

  ReferenceWindow ref_;
  MonitorOptions opt_;
  std::vector<double> buffer_;
  std::size_t consumed_ = 0;
  std::size_t next_id_ = 0;
};

inline std::vector<MonitorVerdict> monitor_stream(const ReferenceWindow& ref, std::span<const double> scores,
                                                  const MonitorOptions& opt = {}) {
  WindowedMonitor m(ref, opt);
  std::vector<MonitorVerdict> out;
  for (double s : scores) {
    if (auto v = m.push(s)) out.push_back(std::move(*v));
  }
  if (auto v = m.finish()) out.push_back(std::move(*v));
  return out;
}

// One line of the record stream: {"score": s, "predicted": 0|1, "label": 0|1|null}.
struct PredictionRecord {
  double score = 0.0;
  int predicted = 0;
  std::optional<int> label;

  bool correct() const { return label && *label == predicted; }
};

inline PredictionRecord parse_record(const std::string& line, std::size_t line_no) {
  auto fail = [&](const std::string& msg) {
    return Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + msg);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw fail("not valid JSON");
  }
  if (!j.is_object()) throw fail("expected a JSON object");
  PredictionRecord r;
  if (!j.contains("score") || !j["score"].is_number()) throw fail("missing numeric 'score'");
  r.score = j["score"].get<double>();
  if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0) throw fail("'score' outside [0, 1]");
  auto binary = [&](const nlohmann::json& v, const char* name) {
    if (!v.is_number_integer() && !v.is_boolean()) throw fail(std::string("'") + name + "' must be 0 or 1");
    const int x = v.is_boolean() ? (v.get<bool>() ? 1 : 0) : v.get<int>();
    if (x != 0 && x != 1) throw fail(std::string("'") + name + "' must be 0 or 1");
    return x;
  };
  if (!j.contains("predicted")) throw fail("missing 'predicted'");
  r.predicted = binary(j["predicted"], "predicted");
  if (j.contains("label") && !j["label"].is_null()) r.label = binary(j["label"], "label");
  return r;
}

// Reads JSONL records; blank lines are skipped.
inline std::vector<PredictionRecord> read_records(std::istream& in) {
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line, line_no));
  }
  return out;
}

// Labelled records as (score, correct); unlabelled input is an error.
inline std::vector<ScoredOutcome> labelled_outcomes(std::span<const PredictionRecord> records) {
  std::vector<ScoredOutcome> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].label) {
      throw Error(ErrorKind::InvalidArgument, "record " + std::to_string(i + 1) + " has no label");
    }
    out.push_back({records[i].score, records[i].correct()});
  }
  return out;
}

}  // namespace acmon
