#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "acmon/error.hpp"

namespace acmon {

// One prediction reduced to (confidence score, was it correct).
struct ScoredOutcome {
  double score = 0.0;
  bool correct = false;
};

struct CalibrationBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double accuracy = 0.0;
  double confidence = 0.0;
};

struct BinReport {
  std::vector<CalibrationBin> bins;
  std::size_t total = 0;

  // sum_m |B_m|/n * |A_m - C_m|; empty bins contribute nothing.
  double weighted_gap() const {
    double gap = 0.0;
    for (const auto& b : bins) {
      if (b.count == 0) continue;
      gap += static_cast<double>(b.count) / static_cast<double>(total) *
             std::abs(b.accuracy - b.confidence);
    }
    return gap;
  }
};

namespace detail {

inline void validate_outcomes(std::span<const ScoredOutcome> data, std::size_t bins) {
  if (data.empty()) throw Error(ErrorKind::EmptyInput, "no scored outcomes");
  if (bins == 0) throw Error(ErrorKind::InvalidArgument, "bin count must be at least 1");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double s = data[i].score;
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw Error(ErrorKind::OutOfRange,
                  "score at index " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

inline void finish_bin(CalibrationBin& bin, double correct_sum, double score_sum) {
  if (bin.count == 0) return;
  bin.accuracy = correct_sum / static_cast<double>(bin.count);
  bin.confidence = score_sum / static_cast<double>(bin.count);
}

}  // namespace detail

/// Equal-width bins on [0, 1]; bin i covers [i/m, (i+1)/m) and the last bin
/// is closed on the right.
inline BinReport equiwidth_bins(std::span<const ScoredOutcome> data, std::size_t m) {
  detail::validate_outcomes(data, m);
  BinReport report;
  report.total = data.size();
  report.bins.resize(m);
  std::vector<double> correct(m, 0.0), score(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    report.bins[i].lo = static_cast<double>(i) / static_cast<double>(m);
    report.bins[i].hi = static_cast<double>(i + 1) / static_cast<double>(m);
  }
  for (const auto& o : data) {
    auto idx = static_cast<std::size_t>(o.score * static_cast<double>(m));
    idx = std::min(idx, m - 1);
    ++report.bins[idx].count;
    correct[idx] += o.correct ? 1.0 : 0.0;
    score[idx] += o.score;
  }
  for (std::size_t i = 0; i < m; ++i) detail::finish_bin(report.bins[i], correct[i], score[i]);
  return report;
}

/// Equal-count bins over the records sorted by score (stable, so ties keep
/// input order). When n is not a multiple of m the first n mod m bins hold
/// one extra record.
inline BinReport equisize_bins(std::span<const ScoredOutcome> data, std::size_t m) {
  detail::validate_outcomes(data, m);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data[a].score < data[b].score; });

  BinReport report;
  report.total = data.size();
  report.bins.resize(m);
  const std::size_t base = data.size() / m;
  const std::size_t extra = data.size() % m;
  std::size_t pos = 0;
  double last_score = data[order.front()].score;
  for (std::size_t b = 0; b < m; ++b) {
    auto& bin = report.bins[b];
    const std::size_t size = base + (b < extra ? 1 : 0);
    double correct = 0.0, score = 0.0;
    bin.lo = bin.hi = last_score;
    for (std::size_t j = 0; j < size; ++j, ++pos) {
      const auto& o = data[order[pos]];
      if (j == 0) bin.lo = o.score;
      bin.hi = last_score = o.score;
      correct += o.correct ? 1.0 : 0.0;
      score += o.score;
    }
    bin.count = size;
    detail::finish_bin(bin, correct, score);
  }
  return report;
}

/// Expected calibration error with m equal-width bins.
inline double ece(std::span<const ScoredOutcome> data, std::size_t m) {
  return equiwidth_bins(data, m).weighted_gap();
}

/// Adaptive calibration error: ECE with m equal-count bins.
inline double ace(std::span<const ScoredOutcome> data, std::size_t m = 20) {
  return equisize_bins(data, m).weighted_gap();
}

/// Monotone piecewise-linear map from raw to calibrated scores. Inputs outside
/// the breakpoint span are clamped to the end values.
class CalibrationMap {
 public:
  struct Breakpoint {
    double raw = 0.0;
    double calibrated = 0.0;
  };

  CalibrationMap() = default;

  explicit CalibrationMap(std::vector<Breakpoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorKind::InvalidArgument, "calibration map has no breakpoints");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
      if (!in_unit(p.raw) || !in_unit(p.calibrated)) {
        throw Error(ErrorKind::OutOfRange, "breakpoint " + std::to_string(i) + " lies outside [0, 1]");
      }
      if (i > 0 && !(p.raw > points_[i - 1].raw)) {
        throw Error(ErrorKind::InvalidArgument, "breakpoint raw scores must be strictly ascending");
      }
      if (i > 0 && p.calibrated < points_[i - 1].calibrated) {
        throw Error(ErrorKind::InvalidArgument, "calibrated scores must be non-decreasing");
      }
    }
  }

  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }

  double apply(double score) const {
    if (points_.empty()) throw Error(ErrorKind::NotFitted, "calibration map is empty");
    if (score <= points_.front().raw) return points_.front().calibrated;
    if (score >= points_.back().raw) return points_.back().calibrated;
    auto hi = std::upper_bound(points_.begin(), points_.end(), score,
                               [](double s, const Breakpoint& p) { return s < p.raw; });
    auto lo = hi - 1;
    const double t = (score - lo->raw) / (hi->raw - lo->raw);
    return std::clamp(lo->calibrated + t * (hi->calibrated - lo->calibrated), 0.0, 1.0);
  }

  std::vector<double> apply(std::span<const double> scores) const {
    std::vector<double> out(scores.size());
    std::transform(scores.begin(), scores.end(), out.begin(), [this](double s) { return apply(s); });
    return out;
  }

  // [[raw, calibrated], ...] in ascending raw order.
  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& p : points_) arr.push_back({p.raw, p.calibrated});
    return arr;
  }

  static CalibrationMap from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, "calibration map must be a JSON array");
    std::vector<Breakpoint> points;
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        throw Error(ErrorKind::Parse, "calibration map entries must be [raw, calibrated] pairs");
      }
      points.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return CalibrationMap(std::move(points));
  }

 private:
  std::vector<Breakpoint> points_;
};

/// Isotonic (pool-adjacent-violators) regression of correctness on score.
///
/// Records with equal scores are pooled before PAVA runs. Each final block
/// contributes breakpoints at its lowest and highest raw score, both mapped
/// to the block mean, so every fit record maps exactly to its block mean and
/// the mapped scores average to the fit-set accuracy.
inline CalibrationMap fit_isotonic(std::span<const ScoredOutcome> data) {
  detail::validate_outcomes(data, 1);
  const auto positives = std::count_if(data.begin(), data.end(), [](const auto& o) { return o.correct; });
  if (positives == 0 || static_cast<std::size_t>(positives) == data.size()) {
    throw Error(ErrorKind::AllOneClass, "isotonic fit needs both correct and incorrect outcomes");
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data[a].score < data[b].score; });

  struct Block {
    double lo, hi, weight, sum;
    double mean() const { return sum / weight; }
  };
  std::vector<Block> blocks;
  for (std::size_t idx : order) {
    const auto& o = data[idx];
    const double y = o.correct ? 1.0 : 0.0;
    if (!blocks.empty() && blocks.back().hi == o.score) {
      blocks.back().weight += 1.0;
      blocks.back().sum += y;
      continue;
    }
    blocks.push_back({o.score, o.score, 1.0, y});
  }
  if (blocks.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "isotonic fit needs at least two distinct scores");
  }

  std::vector<Block> pooled;
  pooled.reserve(blocks.size());
  for (const auto& b : blocks) {
    pooled.push_back(b);
    while (pooled.size() > 1 && pooled[pooled.size() - 2].mean() > pooled.back().mean()) {
      Block top = pooled.back();
      pooled.pop_back();
      auto& prev = pooled.back();
      prev.hi = top.hi;
      prev.weight += top.weight;
      prev.sum += top.sum;
    }
  }

  std::vector<CalibrationMap::Breakpoint> points;
  points.reserve(2 * pooled.size());
  for (const auto& b : pooled) {
    points.push_back({b.lo, b.mean()});
    if (b.hi > b.lo) points.push_back({b.hi, b.mean()});
  }
  return CalibrationMap(std::move(points));
}

}  // namespace acmon
