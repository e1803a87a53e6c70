#pragma once

// Seeded synthetic data: calibrated-by-construction confidence scores drawn
// from a Beta mixture, and the two Gaussian-mixture covariate-shift scenarios.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "acmon/calibration.hpp"
#include "acmon/error.hpp"
#include "acmon/rng.hpp"

namespace acmon {

struct BetaComponent {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const noexcept { return alpha / (alpha + beta); }
};

class BetaMixture {
 public:
  BetaMixture(std::vector<BetaComponent> components, std::vector<double> weights)
      : components_(std::move(components)), weights_(std::move(weights)) {
    if (components_.empty()) throw Error(ErrorKind::InvalidArgument, "mixture has no components");
    if (components_.size() != weights_.size()) {
      throw Error(ErrorKind::InvalidArgument, "mixture needs one weight per component");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& c = components_[i];
      if (!(c.alpha > 0.0) || !(c.beta > 0.0) || !std::isfinite(c.alpha) || !std::isfinite(c.beta)) {
        throw Error(ErrorKind::InvalidArgument, "Beta parameters must be positive and finite");
      }
      if (!(weights_[i] >= 0.0) || weights_[i] > 1.0) {
        throw Error(ErrorKind::OutOfRange, "mixture weights must lie in [0, 1]");
      }
      total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::InvalidArgument, "mixture weights must sum to 1");
  }

  // High / average / low confidence components with the in-control weights.
  static BetaMixture original() { return {{{20, 1}, {2, 2}, {1, 20}}, {0.9, 0.08, 0.02}}; }
  // Same components, less mass on the high-confidence one.
  static BetaMixture shifted() { return {{{20, 1}, {2, 2}, {1, 20}}, {0.8, 0.15, 0.05}}; }

  const std::vector<BetaComponent>& components() const noexcept { return components_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) m += weights_[i] * components_[i].mean();
    return m;
  }

 private:
  std::vector<BetaComponent> components_;
  std::vector<double> weights_;
};

namespace detail {

// Draws from one mixture, reusing distribution objects across calls.
class BetaMixtureSampler {
 public:
  explicit BetaMixtureSampler(const BetaMixture& m) : pick_(m.weights().begin(), m.weights().end()) {
    for (const auto& c : m.components()) {
      gammas_.emplace_back(std::gamma_distribution<double>(c.alpha, 1.0),
                           std::gamma_distribution<double>(c.beta, 1.0));
    }
  }

  double operator()(Rng& rng) {
    auto& [ga, gb] = gammas_[pick_(rng)];
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
  }

 private:
  std::discrete_distribution<std::size_t> pick_;
  std::vector<std::pair<std::gamma_distribution<double>, std::gamma_distribution<double>>> gammas_;
};

}  // namespace detail

inline std::vector<double> sample_beta_mixture(const BetaMixture& mixture, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  Rng rng(seed);
  detail::BetaMixtureSampler draw(mixture);
  std::vector<double> out(n);
  for (auto& s : out) s = draw(rng);
  return out;
}

/// Each draw comes from `shifted` with probability frac, else from `original`.
inline std::vector<double> mix_gradual(const BetaMixture& original, const BetaMixture& shifted, double frac,
                                       std::size_t n, std::uint64_t seed) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw Error(ErrorKind::OutOfRange, "shift fraction must lie in [0, 1]");
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  Rng rng(seed);
  detail::BetaMixtureSampler from_original(original);
  detail::BetaMixtureSampler from_shifted(shifted);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& s : out) s = coin(rng) < frac ? from_shifted(rng) : from_original(rng);
  return out;
}

/// correct_i ~ Bernoulli(score_i), so the labels are calibrated against the
/// scores by construction.
inline std::vector<ScoredOutcome> attach_labels(std::span<const double> scores, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoredOutcome> out;
  out.reserve(scores.size());
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::OutOfRange, "score outside [0, 1]");
    out.push_back({s, u(rng) < s});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Covariate-shift scenarios

enum class Scenario { LinearBoundary, CircularBoundary };

inline const char* to_string(Scenario s) {
  return s == Scenario::LinearBoundary ? "linear" : "circular";
}

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct LabeledPoint {
  Point2 x;
  bool label = false;
  double true_prob = 0.0;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::LinearBoundary;
  double gamma = std::numbers::sqrt2;
  double dispersion = 1.0;
  std::size_t easy_count = 0;
  std::size_t hard_count = 0;
  std::uint64_t seed = 0;
  // Radius of the circle the labels concentrate on (circular scenario only).
  double circle_radius = 5.0;

  static ScenarioConfig linear(std::size_t easy, std::size_t hard, std::uint64_t seed) {
    ScenarioConfig c;
    c.scenario = Scenario::LinearBoundary;
    c.gamma = std::numbers::sqrt2;
    c.easy_count = easy;
    c.hard_count = hard;
    c.seed = seed;
    return c;
  }

  static ScenarioConfig circular(std::size_t easy, std::size_t hard, std::uint64_t seed) {
    ScenarioConfig c;
    c.scenario = Scenario::CircularBoundary;
    c.gamma = std::log(std::numbers::sqrt2);
    c.easy_count = easy;
    c.hard_count = hard;
    c.seed = seed;
    return c;
  }

  void validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
    if (!(dispersion > 0.0) || !std::isfinite(dispersion)) {
      throw Error(ErrorKind::InvalidArgument, "dispersion must be positive");
    }
    if (!(circle_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
  }

  nlohmann::json to_json() const {
    return {{"scenario", to_string(scenario)}, {"gamma", gamma},           {"dispersion", dispersion},
            {"easy_count", easy_count},        {"hard_count", hard_count}, {"seed", seed},
            {"circle_radius", circle_radius}};
  }
};

/// Generator's exact p(y=1 | x).
///   linear:   1 / (1 + exp(-gamma d)), d = signed distance to y = x,
///             positive below the line.
///   circular: exp(-gamma d^2), d = distance to the circle of circle_radius.
inline double bayes_prob(const ScenarioConfig& cfg, Point2 x) {
  if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) throw Error(ErrorKind::InvalidArgument, "non-finite point");
  if (cfg.scenario == Scenario::LinearBoundary) {
    const double d = (x.x1 - x.x2) / std::numbers::sqrt2;
    return 1.0 / (1.0 + std::exp(-cfg.gamma * d));
  }
  const double d = std::hypot(x.x1, x.x2) - cfg.circle_radius;
  return std::exp(-cfg.gamma * d * d);
}

namespace detail {

struct GaussianMode {
  Point2 mean;
  // Lower Cholesky factor [[a, 0], [b, c]] of the covariance.
  double a, b, c;

  static GaussianMode with_cov(double m1, double m2, double s11, double s12, double s22, double scale) {
    s11 *= scale;
    s12 *= scale;
    s22 *= scale;
    const double a = std::sqrt(s11);
    const double b = s12 / a;
    return {{m1, m2}, a, b, std::sqrt(s22 - b * b)};
  }
};

struct ModeLayout {
  std::vector<GaussianMode> easy;
  std::vector<GaussianMode> hard;
};

inline ModeLayout layout_for(const ScenarioConfig& cfg) {
  const double c = cfg.dispersion;
  auto iso = [c](double m1, double m2) { return GaussianMode::with_cov(m1, m2, 1, 0, 1, c); };
  if (cfg.scenario == Scenario::LinearBoundary) {
    // Ordered to alternate sides of y = x so remainders stay balanced.
    return {{iso(4, 0), iso(-4, 0), iso(0, -4), iso(0, 4)}, {iso(1, -1), iso(-1, 1)}};
  }
  auto cov = [c](double m1, double m2, double s11, double s12, double s22) {
    return GaussianMode::with_cov(m1, m2, s11, s12, s22, c);
  };
  return {{iso(0, 0), cov(6, 6, 2, -1, 2), cov(-6, -6, 2, -1, 2), cov(-6, 6, 2, 1, 2), cov(6, -6, 2, 1, 2)},
          {cov(5, 0, 1, 0, 2), cov(-5, 0, 1, 0, 2), cov(0, 5, 2, 0, 1), cov(0, -5, 2, 0, 1)}};
}

inline void draw_from_modes(const std::vector<GaussianMode>& modes, std::size_t count, Rng& rng,
                            std::vector<Point2>& out) {
  std::normal_distribution<double> z(0.0, 1.0);
  const std::size_t base = count / modes.size();
  const std::size_t extra = count % modes.size();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto& g = modes[m];
    const std::size_t k = base + (m < extra ? 1 : 0);
    for (std::size_t i = 0; i < k; ++i) {
      const double z1 = z(rng);
      const double z2 = z(rng);
      out.push_back({g.mean.x1 + g.a * z1, g.mean.x2 + g.b * z1 + g.c * z2});
    }
  }
}

}  // namespace detail

/// Draws easy_count points split evenly over the easy modes and hard_count
/// over the hard modes, labels each with Bernoulli(bayes_prob), and shuffles.
inline std::vector<LabeledPoint> sample_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto layout = detail::layout_for(cfg);
  Rng rng(cfg.seed);
  std::vector<Point2> xs;
  xs.reserve(cfg.easy_count + cfg.hard_count);
  detail::draw_from_modes(layout.easy, cfg.easy_count, rng, xs);
  detail::draw_from_modes(layout.hard, cfg.hard_count, rng, xs);

  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LabeledPoint> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    const double p = bayes_prob(cfg, x);
    out.push_back({x, u(rng) < p, p});
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline std::vector<LabeledPoint> scenario1_sample(ScenarioConfig cfg) {
  cfg.scenario = Scenario::LinearBoundary;
  return sample_scenario(cfg);
}

inline std::vector<LabeledPoint> scenario2_sample(ScenarioConfig cfg) {
  cfg.scenario = Scenario::CircularBoundary;
  return sample_scenario(cfg);
}

/// (easy, hard) test-set sizes for shift levels 0..3.
inline std::pair<std::size_t, std::size_t> shift_counts(int level) {
  switch (level) {
    case 0: return {20000, 5000};
    case 1: return {15000, 10000};
    case 2: return {12500, 12500};
    case 3: return {10000, 15000};
    default: throw Error(ErrorKind::OutOfRange, "shift level must be 0..3, got " + std::to_string(level));
  }
}

inline void write_points_csv(std::ostream& os, std::span<const LabeledPoint> points) {
  const auto old = os.precision(17);
  os << "x1,x2,label,true_prob\n";
  for (const auto& p : points) os << p.x.x1 << ',' << p.x.x2 << ',' << (p.label ? 1 : 0) << ',' << p.true_prob << '\n';
  os.precision(old);
}

inline void write_outcomes_csv(std::ostream& os, std::span<const ScoredOutcome> outcomes) {
  const auto old = os.precision(17);
  os << "score,correct\n";
  for (const auto& o : outcomes) os << o.score << ',' << (o.correct ? 1 : 0) << '\n';
  os.precision(old);
}

}  // namespace acmon
