#pragma once

// Label-free accuracy estimators driven by confidence scores, plus the
// expected confusion matrix of a confidence-threshold failure predictor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "acmon/calibration.hpp"
#include "acmon/error.hpp"
#include "acmon/pbdist.hpp"

namespace acmon {

enum class Method { AC, ATC, DocFeat, BinomialBaseline };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::AC: return "AC";
    case Method::ATC: return "ATC";
    case Method::DocFeat: return "DocFeat";
    case Method::BinomialBaseline: return "BinomialBaseline";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "AC" || name == "ac") return Method::AC;
  if (name == "ATC" || name == "atc") return Method::ATC;
  if (name == "DocFeat" || name == "docfeat" || name == "doc") return Method::DocFeat;
  if (name == "BinomialBaseline" || name == "binomial" || name == "baseline") return Method::BinomialBaseline;
  throw Error(ErrorKind::InvalidArgument, "unknown estimator '" + std::string(name) + "'");
}

struct ProbInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;
};

struct EstimateReport {
  Method method = Method::AC;
  double point = 0.0;
  std::optional<ProbInterval> interval;
  std::size_t window_size = 0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["method"] = to_string(method);
    j["point"] = point;
    j["ci_lo"] = interval ? nlohmann::json(interval->lo) : nlohmann::json(nullptr);
    j["ci_hi"] = interval ? nlohmann::json(interval->hi) : nlohmann::json(nullptr);
    j["ci_level"] = interval ? nlohmann::json(interval->level) : nlohmann::json(nullptr);
    j["window_size"] = window_size;
    return j;
  }
};

namespace detail {

inline void require_scores(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorKind::EmptyInput, "no confidence scores");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw Error(ErrorKind::OutOfRange, "score at index " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

inline double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace detail

/// Average confidence: the mean score. Unbiased for accuracy when the scores
/// are calibrated.
inline double ac_point(std::span<const double> scores) {
  detail::require_scores(scores);
  return detail::mean_of(scores);
}

/// Interval for the window accuracy K/n, with K ~ PoissonBinomial(scores).
inline ProbInterval ac_interval(std::span<const double> scores, double level,
                                IntervalConvention convention = IntervalConvention::Conservative) {
  detail::require_scores(scores);
  const auto dist = PoissonBinomial::build(scores);
  const auto k = dist.central_interval(level, convention);
  const double n = static_cast<double>(scores.size());
  return {static_cast<double>(k.lo) / n, static_cast<double>(k.hi) / n, level};
}

struct AtcThreshold {
  double t = 0.0;
};

/// Picks t so the fraction of reference scores strictly below t matches the
/// reference error rate: with e errors out of n, t is the e-th smallest score
/// (0-based). With tied scores at t the below-fraction can undershoot.
inline AtcThreshold atc_fit(std::span<const ScoredOutcome> source) {
  if (source.empty()) throw Error(ErrorKind::EmptyInput, "ATC reference set is empty");
  std::vector<double> scores;
  scores.reserve(source.size());
  std::size_t errors = 0;
  for (const auto& o : source) {
    scores.push_back(o.score);
    if (!o.correct) ++errors;
  }
  detail::require_scores(scores);
  std::sort(scores.begin(), scores.end());
  if (errors >= scores.size()) {
    // Every reference prediction was wrong: put t above all observed scores.
    return {std::min(1.0, std::nextafter(scores.back(), 2.0))};
  }
  return {scores[errors]};
}

/// Fraction of target scores at or above the threshold.
inline double atc_estimate(AtcThreshold threshold, std::span<const double> target_scores) {
  detail::require_scores(target_scores);
  const auto above = std::count_if(target_scores.begin(), target_scores.end(),
                                   [&](double s) { return s >= threshold.t; });
  return static_cast<double>(above) / static_cast<double>(target_scores.size());
}

// Reference-set statistics used by DoC-Feat, the binomial baseline, the SEM
// band and the control chart.
struct SourceStats {
  double accuracy = 0.0;
  double avg_confidence = 0.0;
  double label_variance = 0.0;

  static SourceStats from_outcomes(std::span<const ScoredOutcome> data) {
    if (data.empty()) throw Error(ErrorKind::EmptyInput, "reference set is empty");
    double correct = 0.0, conf = 0.0;
    for (const auto& o : data) {
      correct += o.correct ? 1.0 : 0.0;
      conf += o.score;
    }
    const double n = static_cast<double>(data.size());
    SourceStats s;
    s.accuracy = correct / n;
    s.avg_confidence = conf / n;
    s.label_variance = s.accuracy * (1.0 - s.accuracy);
    return s;
  }

  nlohmann::json to_json() const {
    return {{"accuracy", accuracy}, {"avg_confidence", avg_confidence}, {"label_variance", label_variance}};
  }

  static SourceStats from_json(const nlohmann::json& j) {
    SourceStats s;
    s.accuracy = j.at("accuracy").get<double>();
    s.avg_confidence = j.at("avg_confidence").get<double>();
    s.label_variance = j.at("label_variance").get<double>();
    for (double v : {s.accuracy, s.avg_confidence, s.label_variance}) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw Error(ErrorKind::OutOfRange, "reference statistics must lie in [0, 1]");
      }
    }
    return s;
  }
};

/// Reference accuracy shifted by the drop in average confidence, clamped to
/// [0, 1].
inline double docfeat_estimate(const SourceStats& src, std::span<const double> target_scores) {
  const double target_conf = ac_point(target_scores);
  // Written as target + (acc - conf) so a calibrated reference gives AC exactly.
  return std::clamp(target_conf + (src.accuracy - src.avg_confidence), 0.0, 1.0);
}

/// Constant estimator: assumes accuracy never moves from the reference.
inline double binomial_baseline(const SourceStats& src) { return src.accuracy; }

struct SemBand {
  double lo_offset = 0.0;
  double hi_offset = 0.0;
};

/// Fixed band of +-z standard errors of the mean, from the reference label
/// variance. Ignores the scores in the window entirely, which makes it
/// conservative; kept as a comparison method.
inline SemBand sem_band(const SourceStats& src, std::size_t n, double z) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "window size must be at least 1");
  if (!(src.label_variance >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative label variance");
  const double half = z * std::sqrt(src.label_variance) / std::sqrt(static_cast<double>(n));
  return {-half, half};
}

// Expected confusion matrix of the failure predictor "correct iff s >= t".
// Positive class = the base model's prediction is correct.
struct EstimatedConfusion {
  double tp = 0.0;
  double fp = 0.0;
  double tn = 0.0;
  double fn = 0.0;
  double threshold = 0.0;

  double total() const noexcept { return tp + fp + tn + fn; }
};

inline EstimatedConfusion estimated_confusion(std::span<const double> scores, double t) {
  detail::require_scores(scores);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::OutOfRange, "threshold must lie in [0, 1]");
  EstimatedConfusion c;
  c.threshold = t;
  for (double s : scores) {
    if (s >= t) {
      c.tp += s;
      c.fp += 1.0 - s;
    } else {
      c.fn += s;
      c.tn += 1.0 - s;
    }
  }
  return c;
}

// Metrics whose denominator is zero are left empty.
struct FailureMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> accuracy;

  nlohmann::json to_json() const {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"precision", opt(precision)}, {"recall", opt(recall)}, {"f1", opt(f1)}, {"accuracy", opt(accuracy)}};
  }
};

inline FailureMetrics failure_metrics(const EstimatedConfusion& c) {
  FailureMetrics m;
  if (c.tp + c.fp > 0.0) m.precision = c.tp / (c.tp + c.fp);
  if (c.tp + c.fn > 0.0) m.recall = c.tp / (c.tp + c.fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  if (c.total() > 0.0) m.accuracy = (c.tp + c.tn) / c.total();
  return m;
}

struct AurocEstimate {
  double value = 0.5;
  bool degenerate = false;
};

/// Area under the estimated ROC of the failure predictor, sweeping t over
/// every distinct score (plus the 0 and 1 end points) and integrating the
/// (FPR, TPR) curve with the trapezoid rule.
inline AurocEstimate estimated_auroc(std::span<const double> scores) {
  detail::require_scores(scores);
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  double positives = 0.0, negatives = 0.0;
  for (double s : sorted) {
    positives += s;
    negatives += 1.0 - s;
  }
  if (sorted.front() == sorted.back() || positives <= 0.0 || negatives <= 0.0) return {0.5, true};

  // Lower t from above the max score to 0; each distinct score value adds its
  // whole tie group at once.
  double tp = 0.0, fp = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0, area = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double value = sorted[i];
    while (i < sorted.size() && sorted[i] == value) {
      tp += sorted[i];
      fp += 1.0 - sorted[i];
      ++i;
    }
    const double tpr = tp / positives;
    const double fpr = fp / negatives;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  area += (1.0 - prev_fpr) * (1.0 + prev_tpr) / 2.0;
  return {area, false};
}

}  // namespace acmon
