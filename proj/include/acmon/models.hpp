#pragma once

// Small binary classifiers on 2-d features that emit confidence scores:
// logistic regression, Gaussian naive Bayes, k-nearest neighbours, and the
// Bayes-optimal classifier of a synthetic scenario.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "acmon/error.hpp"
#include "acmon/knn_index.hpp"
#include "acmon/synthdata.hpp"

namespace acmon {

enum class ModelKind { LogisticRegression, GaussianNaiveBayes, KNearestNeighbors, BayesOptimal };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::LogisticRegression: return "LR";
    case ModelKind::GaussianNaiveBayes: return "GNB";
    case ModelKind::KNearestNeighbors: return "KNN";
    case ModelKind::BayesOptimal: return "BayesOptimal";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view name) {
  if (name == "LR" || name == "lr") return ModelKind::LogisticRegression;
  if (name == "GNB" || name == "gnb" || name == "NB" || name == "nb") return ModelKind::GaussianNaiveBayes;
  if (name == "KNN" || name == "knn") return ModelKind::KNearestNeighbors;
  if (name == "BayesOptimal" || name == "bayes") return ModelKind::BayesOptimal;
  throw Error(ErrorKind::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

struct FitOptions {
  double lr_gradient_tolerance = 1e-6;
  int lr_max_iterations = 200;
  double gnb_variance_floor = 1e-9;
  std::size_t knn_k = 5;
};

struct LogisticParams {
  double intercept = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};

struct GaussianNBParams {
  std::array<double, 2> log_prior{};
  std::array<std::array<double, 2>, 2> mean{};  // [class][feature]
  std::array<std::array<double, 2>, 2> var{};
};

struct KnnParams {
  std::shared_ptr<const KdTree2> index;
  std::shared_ptr<const std::vector<bool>> labels;
  std::size_t k = 5;
};

struct BayesParams {
  ScenarioConfig scenario;
};

class Classifier {
 public:
  using State = std::variant<std::monostate, LogisticParams, GaussianNBParams, KnnParams, BayesParams>;

  Classifier() = default;
  explicit Classifier(State state) : state_(std::move(state)) {}

  static Classifier bayes_optimal(const ScenarioConfig& cfg) {
    cfg.validate();
    return Classifier(BayesParams{cfg});
  }

  bool fitted() const noexcept { return !std::holds_alternative<std::monostate>(state_); }

  ModelKind kind() const {
    switch (state_.index()) {
      case 1: return ModelKind::LogisticRegression;
      case 2: return ModelKind::GaussianNaiveBayes;
      case 3: return ModelKind::KNearestNeighbors;
      case 4: return ModelKind::BayesOptimal;
      default: throw Error(ErrorKind::NotFitted, "classifier has not been fitted");
    }
  }

  const State& state() const noexcept { return state_; }

  /// p(y = 1 | x).
  double predict_proba(Point2 x) const {
    return std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            throw Error(ErrorKind::NotFitted, "classifier has not been fitted");
          } else if constexpr (std::is_same_v<T, LogisticParams>) {
            return sigmoid(s.intercept + s.w1 * x.x1 + s.w2 * x.x2);
          } else if constexpr (std::is_same_v<T, GaussianNBParams>) {
            std::array<double, 2> joint{};
            for (int c = 0; c < 2; ++c) {
              joint[c] = s.log_prior[c];
              const std::array<double, 2> f{x.x1, x.x2};
              for (int j = 0; j < 2; ++j) {
                const double d = f[j] - s.mean[c][j];
                joint[c] -= 0.5 * (std::log(2.0 * std::numbers::pi * s.var[c][j]) + d * d / s.var[c][j]);
              }
            }
            return sigmoid(joint[1] - joint[0]);
          } else if constexpr (std::is_same_v<T, KnnParams>) {
            const auto idx = s.index->nearest(x, s.k);
            std::size_t positive = 0;
            for (auto i : idx) positive += (*s.labels)[i] ? 1 : 0;
            return static_cast<double>(positive) / static_cast<double>(idx.size());
          } else {
            return bayes_prob(s.scenario, x);
          }
        },
        state_);
  }

  bool predict(Point2 x) const { return predict_proba(x) >= 0.5; }

  /// Probability of the predicted class, max(p, 1 - p).
  double confidence(Point2 x) const {
    const double p = predict_proba(x);
    return std::max(p, 1.0 - p);
  }

  nlohmann::json to_json() const {
    return std::visit(
        [&](const auto& s) -> nlohmann::json {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            throw Error(ErrorKind::NotFitted, "classifier has not been fitted");
          } else if constexpr (std::is_same_v<T, LogisticParams>) {
            return {{"kind", "LR"}, {"intercept", s.intercept}, {"w", {s.w1, s.w2}}};
          } else if constexpr (std::is_same_v<T, GaussianNBParams>) {
            return {{"kind", "GNB"}, {"log_prior", s.log_prior}, {"mean", s.mean}, {"var", s.var}};
          } else if constexpr (std::is_same_v<T, KnnParams>) {
            return {{"kind", "KNN"}, {"k", s.k}, {"training_set", training_ref_}};
          } else {
            return {{"kind", "BayesOptimal"}, {"scenario", s.scenario.to_json()}};
          }
        },
        state_);
  }

  // KNN keeps its training data; record where it came from (dataset path and
  // seed, or the generating scenario config) so to_json can reference it.
  void set_training_reference(nlohmann::json ref) { training_ref_ = std::move(ref); }

  static Classifier from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "LR") {
      LogisticParams p;
      p.intercept = j.at("intercept").get<double>();
      p.w1 = j.at("w").at(0).get<double>();
      p.w2 = j.at("w").at(1).get<double>();
      return Classifier(p);
    }
    if (kind == "GNB") {
      GaussianNBParams p;
      p.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      p.mean = j.at("mean").get<std::array<std::array<double, 2>, 2>>();
      p.var = j.at("var").get<std::array<std::array<double, 2>, 2>>();
      return Classifier(p);
    }
    if (kind == "BayesOptimal") {
      const auto& s = j.at("scenario");
      ScenarioConfig cfg;
      cfg.scenario = s.at("scenario").get<std::string>() == "linear" ? Scenario::LinearBoundary
                                                                     : Scenario::CircularBoundary;
      cfg.gamma = s.at("gamma").get<double>();
      cfg.dispersion = s.at("dispersion").get<double>();
      cfg.circle_radius = s.at("circle_radius").get<double>();
      return bayes_optimal(cfg);
    }
    throw Error(ErrorKind::Parse, "cannot restore a '" + kind + "' model from JSON alone");
  }

 private:
  static double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  }

  State state_;
  nlohmann::json training_ref_;
};

namespace detail {

inline void validate_training(std::span<const LabeledPoint> data) {
  if (data.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two training points");
  std::size_t positives = 0;
  for (const auto& p : data) {
    if (!std::isfinite(p.x.x1) || !std::isfinite(p.x.x2)) {
      throw Error(ErrorKind::InvalidArgument, "training features must be finite");
    }
    positives += p.label ? 1 : 0;
  }
  if (positives == 0 || positives == data.size()) {
    throw Error(ErrorKind::AllOneClass, "training data contains a single class");
  }
}

// Newton-Raphson on the mean log-likelihood with step halving.
inline LogisticParams fit_logistic(std::span<const LabeledPoint> data, const FitOptions& opt) {
  const double n = static_cast<double>(data.size());
  Eigen::Vector3d w = Eigen::Vector3d::Zero();

  auto log_likelihood = [&](const Eigen::Vector3d& v) {
    double ll = 0.0;
    for (const auto& p : data) {
      const double z = v[0] + v[1] * p.x.x1 + v[2] * p.x.x2;
      // log sigmoid(z) for label 1, log sigmoid(-z) for label 0
      const double m = p.label ? z : -z;
      ll -= m >= 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    return ll / n;
  };

  LogisticParams out;
  double current = log_likelihood(w);
  for (int iter = 0; iter < opt.lr_max_iterations; ++iter) {
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
    for (const auto& p : data) {
      const Eigen::Vector3d x(1.0, p.x.x1, p.x.x2);
      const double z = w.dot(x);
      const double prob = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
      grad += ((p.label ? 1.0 : 0.0) - prob) * x;
      hess += prob * (1.0 - prob) * x * x.transpose();
    }
    grad /= n;
    hess /= n;
    out.gradient_norm = grad.norm();
    out.iterations = iter;
    if (out.gradient_norm <= opt.lr_gradient_tolerance) break;

    hess += 1e-12 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d step = hess.ldlt().solve(grad);
    if (!step.allFinite()) step = grad;
    double scale = 1.0;
    for (int halving = 0; halving < 60; ++halving, scale *= 0.5) {
      const Eigen::Vector3d candidate = w + scale * step;
      const double ll = log_likelihood(candidate);
      if (ll >= current) {
        w = candidate;
        current = ll;
        break;
      }
    }
  }
  out.intercept = w[0];
  out.w1 = w[1];
  out.w2 = w[2];
  return out;
}

inline GaussianNBParams fit_gnb(std::span<const LabeledPoint> data, const FitOptions& opt) {
  std::array<double, 2> count{};
  std::array<std::array<double, 2>, 2> sum{}, sum_sq{};
  for (const auto& p : data) {
    const int c = p.label ? 1 : 0;
    count[c] += 1.0;
    sum[c][0] += p.x.x1;
    sum[c][1] += p.x.x2;
  }
  GaussianNBParams g;
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < 2; ++j) g.mean[c][j] = sum[c][j] / count[c];
  }
  for (const auto& p : data) {
    const int c = p.label ? 1 : 0;
    const double d0 = p.x.x1 - g.mean[c][0];
    const double d1 = p.x.x2 - g.mean[c][1];
    sum_sq[c][0] += d0 * d0;
    sum_sq[c][1] += d1 * d1;
  }
  const double n = static_cast<double>(data.size());
  for (int c = 0; c < 2; ++c) {
    g.log_prior[c] = std::log(count[c] / n);
    for (int j = 0; j < 2; ++j) g.var[c][j] = std::max(sum_sq[c][j] / count[c], opt.gnb_variance_floor);
  }
  return g;
}

}  // namespace detail

/// Fits a trainable classifier. BayesOptimal has nothing to learn; build it
/// with Classifier::bayes_optimal from the generating scenario instead.
inline Classifier fit(ModelKind kind, std::span<const LabeledPoint> data, const FitOptions& opt = {}) {
  detail::validate_training(data);
  switch (kind) {
    case ModelKind::LogisticRegression: return Classifier(detail::fit_logistic(data, opt));
    case ModelKind::GaussianNaiveBayes: return Classifier(detail::fit_gnb(data, opt));
    case ModelKind::KNearestNeighbors: {
      if (opt.knn_k == 0) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
      std::vector<Point2> pts;
      auto labels = std::make_shared<std::vector<bool>>();
      pts.reserve(data.size());
      labels->reserve(data.size());
      for (const auto& p : data) {
        pts.push_back(p.x);
        labels->push_back(p.label);
      }
      return Classifier(KnnParams{std::make_shared<const KdTree2>(std::move(pts)), std::move(labels), opt.knn_k});
    }
    case ModelKind::BayesOptimal:
      throw Error(ErrorKind::InvalidArgument, "BayesOptimal is built from a scenario, not fitted");
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model kind");
}

// Confidence scores and correctness of a classifier over a labelled set.
inline std::vector<ScoredOutcome> score_points(const Classifier& model, std::span<const LabeledPoint> data) {
  std::vector<ScoredOutcome> out;
  out.reserve(data.size());
  for (const auto& p : data) {
    const double prob = model.predict_proba(p.x);
    const bool predicted = prob >= 0.5;
    out.push_back({std::max(prob, 1.0 - prob), predicted == p.label});
  }
  return out;
}

}  // namespace acmon
