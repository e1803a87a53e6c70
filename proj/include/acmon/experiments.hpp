#pragma once

// The two simulation studies: estimators on calibrated Beta-mixture scores,
// and estimators on trained classifiers under covariate shift.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "acmon/calibration.hpp"
#include "acmon/error.hpp"
#include "acmon/estimators.hpp"
#include "acmon/models.hpp"
#include "acmon/parallel.hpp"
#include "acmon/pbdist.hpp"
#include "acmon/rng.hpp"
#include "acmon/synthdata.hpp"

namespace acmon {

namespace detail {

struct RunningMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  // Sample standard deviation (n - 1 denominator).
  double sd() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double v = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return std::sqrt(std::max(v, 0.0));
  }
};

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "pearson needs paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> scores_of(std::span<const ScoredOutcome> data) {
  std::vector<double> s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = data[i].score;
  return s;
}

inline double accuracy_of(std::span<const ScoredOutcome> data) {
  double c = 0.0;
  for (const auto& o : data) c += o.correct ? 1.0 : 0.0;
  return c / static_cast<double>(data.size());
}

// Trial index packing: cell id in the high bits so adding trials to a cell
// never changes the seeds of existing trials.
inline std::uint64_t trial_index(std::uint64_t cell, std::uint64_t trial) { return (cell << 32) | trial; }

}  // namespace detail

using detail::pearson;

// ---------------------------------------------------------------------------
// Calibrated Beta-mixture simulation

struct CalibratedSimConfig {
  std::uint64_t seed = 0;
  std::size_t reference_n = 10000;
  std::size_t sweep_trials = 1000;
  std::vector<std::size_t> sweep_sizes{100, 500};
  std::size_t shift_steps = 20;  // fractions 0, 1/steps, ..., 1
  std::size_t coverage_trials = 10000;
  std::vector<std::size_t> coverage_sizes{100, 200, 300, 400, 500};
  double level = 0.95;
  double sem_z = 1.96;
  unsigned threads = 0;

  void validate() const {
    if (reference_n < 2) throw Error(ErrorKind::InvalidArgument, "reference_n must be at least 2");
    if (shift_steps == 0) throw Error(ErrorKind::InvalidArgument, "shift_steps must be at least 1");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidArgument, "level must lie in (0, 1)");
    if (!(sem_z >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sem_z must be non-negative");
    for (auto n : sweep_sizes) {
      if (n == 0) throw Error(ErrorKind::InvalidArgument, "window sizes must be positive");
    }
    for (auto n : coverage_sizes) {
      if (n == 0) throw Error(ErrorKind::InvalidArgument, "window sizes must be positive");
    }
  }

  nlohmann::json to_json() const {
    return {{"seed", seed},
            {"reference_n", reference_n},
            {"sweep_trials", sweep_trials},
            {"sweep_sizes", sweep_sizes},
            {"shift_steps", shift_steps},
            {"coverage_trials", coverage_trials},
            {"coverage_sizes", coverage_sizes},
            {"level", level},
            {"sem_z", sem_z}};
  }
};

struct SweepCell {
  double shift_fraction = 0.0;
  std::size_t window_size = 0;
  std::size_t trials = 0;
  double true_accuracy_mean = 0.0;
  // signed error = estimate - realized window accuracy
  double ac_mean = 0.0, ac_sd = 0.0;
  double atc_mean = 0.0, atc_sd = 0.0;
  double baseline_mean = 0.0, baseline_sd = 0.0;
};

struct CoverageCell {
  std::string mixture;  // "original" or "shifted"
  std::size_t window_size = 0;
  std::size_t trials = 0;
  double pb_coverage = 0.0;            // conservative convention
  double pb_inclusive_coverage = 0.0;  // inclusive upper endpoint, for comparison
  double sem_coverage = 0.0;
  double mean_pb_width = 0.0;
  double mean_sem_width = 0.0;
};

struct CalibratedSimResult {
  CalibratedSimConfig config;
  SourceStats reference;
  AtcThreshold atc;
  std::vector<SweepCell> sweep;
  std::vector<CoverageCell> coverage;
};

inline CalibratedSimResult run_calibrated_simulation(const CalibratedSimConfig& cfg) {
  cfg.validate();
  const auto original = BetaMixture::original();
  const auto shifted = BetaMixture::shifted();

  CalibratedSimResult res;
  res.config = cfg;
  {
    const auto scores = sample_beta_mixture(original, cfg.reference_n, derive_seed(cfg.seed, streams::kReference, 0));
    const auto ref = attach_labels(scores, derive_seed(cfg.seed, streams::kReference, 1));
    res.reference = SourceStats::from_outcomes(ref);
    res.atc = atc_fit(ref);
  }

  // Point-estimate sweep.
  for (std::size_t step = 0; step <= cfg.shift_steps; ++step) {
    const double frac = static_cast<double>(step) / static_cast<double>(cfg.shift_steps);
    for (std::size_t si = 0; si < cfg.sweep_sizes.size(); ++si) {
      const std::size_t n = cfg.sweep_sizes[si];
      const std::uint64_t cell = step * 1000 + n;
      struct Trial {
        double truth, ac, atc, base;
      };
      std::vector<Trial> trials(cfg.sweep_trials);
      parallel_for(
          cfg.sweep_trials,
          [&](std::size_t t) {
            const auto ts = derive_seed(cfg.seed, streams::kPointSweep, detail::trial_index(cell, t));
            const auto scores = mix_gradual(original, shifted, frac, n, derive_seed(ts, 0));
            const auto outcomes = attach_labels(scores, derive_seed(ts, 1));
            const double truth = detail::accuracy_of(outcomes);
            trials[t] = {truth, ac_point(scores) - truth, atc_estimate(res.atc, scores) - truth,
                         binomial_baseline(res.reference) - truth};
          },
          cfg.threads);
      detail::RunningMoments truth, ac, atc, base;
      for (const auto& t : trials) {
        truth.add(t.truth);
        ac.add(t.ac);
        atc.add(t.atc);
        base.add(t.base);
      }
      res.sweep.push_back({frac, n, cfg.sweep_trials, truth.mean(), ac.mean(), ac.sd(), atc.mean(), atc.sd(),
                           base.mean(), base.sd()});
    }
  }

  // Interval coverage.
  const std::array<std::pair<const char*, const BetaMixture*>, 2> mixtures{
      {{"original", &original}, {"shifted", &shifted}}};
  for (std::size_t mi = 0; mi < mixtures.size(); ++mi) {
    for (std::size_t n : cfg.coverage_sizes) {
      const std::uint64_t cell = mi * 100000 + n;
      struct Trial {
        bool pb, pb_incl, sem;
        double pb_width, sem_width;
      };
      std::vector<Trial> trials(cfg.coverage_trials);
      const auto band = sem_band(res.reference, n, cfg.sem_z);
      parallel_for(
          cfg.coverage_trials,
          [&](std::size_t t) {
            const auto ts = derive_seed(cfg.seed, streams::kCoverage, detail::trial_index(cell, t));
            const auto scores = sample_beta_mixture(*mixtures[mi].second, n, derive_seed(ts, 0));
            const auto outcomes = attach_labels(scores, derive_seed(ts, 1));
            const double truth = detail::accuracy_of(outcomes);
            const double point = ac_point(scores);
            const auto dist = PoissonBinomial::build(scores);
            const double nn = static_cast<double>(n);
            const auto cons = dist.central_interval(cfg.level, IntervalConvention::Conservative);
            const auto incl = dist.central_interval(cfg.level, IntervalConvention::Inclusive);
            // Compare on the count scale to avoid rounding at the endpoints.
            const auto k = static_cast<std::size_t>(std::llround(truth * nn));
            const double sem_lo = point + band.lo_offset, sem_hi = point + band.hi_offset;
            trials[t] = {k >= cons.lo && k <= cons.hi, k >= incl.lo && k <= incl.hi,
                         truth >= sem_lo && truth <= sem_hi,
                         static_cast<double>(cons.hi - cons.lo) / nn, sem_hi - sem_lo};
          },
          cfg.threads);
      CoverageCell c;
      c.mixture = mixtures[mi].first;
      c.window_size = n;
      c.trials = cfg.coverage_trials;
      for (const auto& t : trials) {
        c.pb_coverage += t.pb ? 1.0 : 0.0;
        c.pb_inclusive_coverage += t.pb_incl ? 1.0 : 0.0;
        c.sem_coverage += t.sem ? 1.0 : 0.0;
        c.mean_pb_width += t.pb_width;
        c.mean_sem_width += t.sem_width;
      }
      const double tn = std::max<double>(1.0, static_cast<double>(cfg.coverage_trials));
      c.pb_coverage /= tn;
      c.pb_inclusive_coverage /= tn;
      c.sem_coverage /= tn;
      c.mean_pb_width /= tn;
      c.mean_sem_width /= tn;
      res.coverage.push_back(c);
    }
  }
  return res;
}

inline void write_sweep_csv(std::ostream& os, const CalibratedSimResult& r) {
  os << std::setprecision(10);
  os << "shift_fraction,window_size,trials,true_accuracy,ac_mean_error,ac_sd,atc_mean_error,atc_sd,"
        "baseline_mean_error,baseline_sd\n";
  for (const auto& c : r.sweep) {
    os << c.shift_fraction << ',' << c.window_size << ',' << c.trials << ',' << c.true_accuracy_mean << ','
       << c.ac_mean << ',' << c.ac_sd << ',' << c.atc_mean << ',' << c.atc_sd << ',' << c.baseline_mean << ','
       << c.baseline_sd << '\n';
  }
}

inline void write_coverage_csv(std::ostream& os, const CalibratedSimResult& r) {
  os << std::setprecision(10);
  os << "mixture,window_size,trials,pb_coverage,pb_inclusive_coverage,sem_coverage,mean_pb_width,mean_sem_width\n";
  for (const auto& c : r.coverage) {
    os << c.mixture << ',' << c.window_size << ',' << c.trials << ',' << c.pb_coverage << ','
       << c.pb_inclusive_coverage << ',' << c.sem_coverage << ',' << c.mean_pb_width << ',' << c.mean_sem_width
       << '\n';
  }
}

// Long format: one row per (shift, n, method, statistic).
inline void write_sweep_plot_data(std::ostream& os, const CalibratedSimResult& r) {
  os << std::setprecision(10);
  os << "shift_fraction,window_size,method,statistic,value\n";
  for (const auto& c : r.sweep) {
    auto row = [&](const char* m, const char* s, double v) {
      os << c.shift_fraction << ',' << c.window_size << ',' << m << ',' << s << ',' << v << '\n';
    };
    row("AC", "mean_error", c.ac_mean);
    row("AC", "sd", c.ac_sd);
    row("ATC", "mean_error", c.atc_mean);
    row("ATC", "sd", c.atc_sd);
    row("BinomialBaseline", "mean_error", c.baseline_mean);
    row("BinomialBaseline", "sd", c.baseline_sd);
  }
}

inline void write_coverage_plot_data(std::ostream& os, const CalibratedSimResult& r) {
  os << std::setprecision(10);
  os << "mixture,window_size,method,statistic,value\n";
  for (const auto& c : r.coverage) {
    auto row = [&](const char* m, const char* s, double v) {
      os << c.mixture << ',' << c.window_size << ',' << m << ',' << s << ',' << v << '\n';
    };
    row("PoissonBinomial", "coverage", c.pb_coverage);
    row("PoissonBinomialInclusive", "coverage", c.pb_inclusive_coverage);
    row("SEM", "coverage", c.sem_coverage);
    row("PoissonBinomial", "mean_width", c.mean_pb_width);
    row("SEM", "mean_width", c.mean_sem_width);
  }
}

// ---------------------------------------------------------------------------
// Covariate-shift experiment

struct CovariateShiftConfig {
  std::uint64_t seed = 0;
  std::vector<Scenario> scenarios{Scenario::LinearBoundary, Scenario::CircularBoundary};
  std::vector<ModelKind> models{ModelKind::LogisticRegression, ModelKind::GaussianNaiveBayes,
                                ModelKind::KNearestNeighbors, ModelKind::BayesOptimal};
  std::size_t train_easy = 80000, train_hard = 20000;
  std::size_t calib_easy = 20000, calib_hard = 5000;
  std::size_t setup_easy = 20000, setup_hard = 5000;
  std::vector<int> shift_levels{0, 1, 2, 3};
  std::size_t trials = 1000;
  std::size_t sample_size = 500;
  std::size_t ace_bins = 20;
  std::size_t knn_k = 5;
  double circle_radius = 5.0;
  unsigned threads = 0;

  void validate() const {
    if (scenarios.empty() || models.empty() || shift_levels.empty()) {
      throw Error(ErrorKind::InvalidArgument, "scenarios, models and shift levels must be non-empty");
    }
    for (int l : shift_levels) (void)shift_counts(l);
    if (sample_size == 0 || ace_bins == 0 || knn_k == 0) {
      throw Error(ErrorKind::InvalidArgument, "sample_size, ace_bins and knn_k must be positive");
    }
    if (train_easy + train_hard < 2 || calib_easy + calib_hard < 2 || setup_easy + setup_hard < 1) {
      throw Error(ErrorKind::InvalidArgument, "data set sizes are too small");
    }
  }

  nlohmann::json to_json() const {
    std::vector<std::string> sc, md;
    for (auto s : scenarios) sc.emplace_back(to_string(s));
    for (auto m : models) md.emplace_back(to_string(m));
    return {{"seed", seed},
            {"scenarios", sc},
            {"models", md},
            {"train", {train_easy, train_hard}},
            {"calibration", {calib_easy, calib_hard}},
            {"setup", {setup_easy, setup_hard}},
            {"shift_levels", shift_levels},
            {"trials", trials},
            {"sample_size", sample_size},
            {"ace_bins", ace_bins},
            {"knn_k", knn_k},
            {"circle_radius", circle_radius}};
  }
};

struct ShiftCell {
  Scenario scenario = Scenario::LinearBoundary;
  ModelKind model = ModelKind::LogisticRegression;
  int shift = 0;
  double test_accuracy = 0.0;      // whole test set
  double bootstrap_accuracy = 0.0; // mean over bootstrap samples
  double positive_fraction = 0.0;  // label prevalence in the test set
  double ace_u = 0.0, ace_c = 0.0;
  double mae_ac_u = 0.0, mae_ac_c = 0.0;
  double mae_doc_u = 0.0, mae_doc_c = 0.0;
  double mae_atc_u = 0.0, mae_atc_c = 0.0;
};

struct CorrelationRow {
  std::string scope;     // scenario name or "all"
  std::string estimator; // e.g. "AC_c"
  double pearson = 0.0;
};

struct CovariateShiftResult {
  CovariateShiftConfig config;
  std::vector<ShiftCell> cells;
  std::vector<CorrelationRow> correlations;

  const ShiftCell* find(Scenario s, ModelKind m, int shift) const {
    for (const auto& c : cells) {
      if (c.scenario == s && c.model == m && c.shift == shift) return &c;
    }
    return nullptr;
  }
};

inline ScenarioConfig scenario_config(Scenario s, std::size_t easy, std::size_t hard, std::uint64_t seed,
                                      double circle_radius) {
  auto cfg = s == Scenario::LinearBoundary ? ScenarioConfig::linear(easy, hard, seed)
                                           : ScenarioConfig::circular(easy, hard, seed);
  cfg.circle_radius = circle_radius;
  return cfg;
}

inline std::vector<CorrelationRow> correlation_table(std::span<const ShiftCell> cells, std::span<const Scenario> scopes) {
  struct Spec {
    const char* name;
    double ShiftCell::*mae;
    double ShiftCell::*ace;
  };
  const Spec specs[] = {{"AC_u", &ShiftCell::mae_ac_u, &ShiftCell::ace_u},   {"AC_c", &ShiftCell::mae_ac_c, &ShiftCell::ace_c},
                        {"DoC_u", &ShiftCell::mae_doc_u, &ShiftCell::ace_u}, {"DoC_c", &ShiftCell::mae_doc_c, &ShiftCell::ace_c},
                        {"ATC_u", &ShiftCell::mae_atc_u, &ShiftCell::ace_u}, {"ATC_c", &ShiftCell::mae_atc_c, &ShiftCell::ace_c}};
  std::vector<CorrelationRow> out;
  auto add_scope = [&](const std::string& scope, auto&& include) {
    for (const auto& sp : specs) {
      std::vector<double> x, y;
      for (const auto& c : cells) {
        if (!include(c)) continue;
        x.push_back(c.*sp.mae);
        y.push_back(c.*sp.ace);
      }
      if (x.size() >= 2) out.push_back({scope, sp.name, pearson(x, y)});
    }
  };
  for (auto s : scopes) add_scope(to_string(s), [s](const ShiftCell& c) { return c.scenario == s; });
  if (scopes.size() > 1) add_scope("all", [](const ShiftCell&) { return true; });
  return out;
}

inline CovariateShiftResult run_covariate_shift(const CovariateShiftConfig& cfg) {
  cfg.validate();
  CovariateShiftResult res;
  res.config = cfg;
  FitOptions fit_opt;
  fit_opt.knn_k = cfg.knn_k;

  for (std::size_t si = 0; si < cfg.scenarios.size(); ++si) {
    const Scenario sc = cfg.scenarios[si];
    const auto sid = static_cast<std::uint64_t>(sc);
    const auto train = sample_scenario(scenario_config(sc, cfg.train_easy, cfg.train_hard,
                                                       derive_seed(cfg.seed, streams::kTraining, sid), cfg.circle_radius));
    const auto calib = sample_scenario(scenario_config(sc, cfg.calib_easy, cfg.calib_hard,
                                                       derive_seed(cfg.seed, streams::kCalibration, sid), cfg.circle_radius));
    const auto setup = sample_scenario(scenario_config(sc, cfg.setup_easy, cfg.setup_hard,
                                                       derive_seed(cfg.seed, streams::kSetup, sid), cfg.circle_radius));
    std::vector<std::vector<LabeledPoint>> tests;
    for (int level : cfg.shift_levels) {
      const auto [easy, hard] = shift_counts(level);
      tests.push_back(sample_scenario(scenario_config(
          sc, easy, hard, derive_seed(cfg.seed, streams::kTest, sid * 16 + static_cast<std::uint64_t>(level)),
          cfg.circle_radius)));
    }

    for (ModelKind mk : cfg.models) {
      const Classifier model = mk == ModelKind::BayesOptimal
                                   ? Classifier::bayes_optimal(scenario_config(sc, 0, 0, 0, cfg.circle_radius))
                                   : fit(mk, train, fit_opt);
      const auto map = fit_isotonic(score_points(model, calib));

      auto calibrated = [&](std::span<const ScoredOutcome> raw) {
        std::vector<ScoredOutcome> out(raw.begin(), raw.end());
        for (auto& o : out) o.score = map.apply(o.score);
        return out;
      };
      const auto setup_u = score_points(model, setup);
      const auto setup_c = calibrated(setup_u);
      const auto stats_u = SourceStats::from_outcomes(setup_u);
      const auto stats_c = SourceStats::from_outcomes(setup_c);
      const auto atc_u = atc_fit(setup_u);
      const auto atc_c = atc_fit(setup_c);

      for (std::size_t li = 0; li < cfg.shift_levels.size(); ++li) {
        const int level = cfg.shift_levels[li];
        const auto& test = tests[li];
        const auto test_u = score_points(model, test);
        const auto test_c = calibrated(test_u);

        ShiftCell cell;
        cell.scenario = sc;
        cell.model = mk;
        cell.shift = level;
        cell.test_accuracy = detail::accuracy_of(test_u);
        std::size_t positives = 0;
        for (const auto& p : test) positives += p.label ? 1 : 0;
        cell.positive_fraction = static_cast<double>(positives) / static_cast<double>(test.size());
        cell.ace_u = ace(test_u, cfg.ace_bins);
        cell.ace_c = ace(test_c, cfg.ace_bins);

        struct Trial {
          double truth, ac_u, ac_c, doc_u, doc_c, atc_u, atc_c;
        };
        std::vector<Trial> trials(cfg.trials);
        const std::uint64_t cell_id = (sid * 16 + static_cast<std::uint64_t>(mk)) * 16 + static_cast<std::uint64_t>(level);
        parallel_for(
            cfg.trials,
            [&](std::size_t t) {
              Rng rng(derive_seed(cfg.seed, streams::kBootstrap, detail::trial_index(cell_id, t)));
              std::uniform_int_distribution<std::size_t> pick(0, test.size() - 1);
              std::vector<double> su(cfg.sample_size), scal(cfg.sample_size);
              double correct = 0.0;
              for (std::size_t j = 0; j < cfg.sample_size; ++j) {
                const std::size_t idx = pick(rng);
                su[j] = test_u[idx].score;
                scal[j] = test_c[idx].score;
                correct += test_u[idx].correct ? 1.0 : 0.0;
              }
              const double truth = correct / static_cast<double>(cfg.sample_size);
              trials[t] = {truth,
                           std::abs(ac_point(su) - truth),
                           std::abs(ac_point(scal) - truth),
                           std::abs(docfeat_estimate(stats_u, su) - truth),
                           std::abs(docfeat_estimate(stats_c, scal) - truth),
                           std::abs(atc_estimate(atc_u, su) - truth),
                           std::abs(atc_estimate(atc_c, scal) - truth)};
            },
            cfg.threads);
        const double tn = std::max<double>(1.0, static_cast<double>(cfg.trials));
        for (const auto& t : trials) {
          cell.bootstrap_accuracy += t.truth / tn;
          cell.mae_ac_u += t.ac_u / tn;
          cell.mae_ac_c += t.ac_c / tn;
          cell.mae_doc_u += t.doc_u / tn;
          cell.mae_doc_c += t.doc_c / tn;
          cell.mae_atc_u += t.atc_u / tn;
          cell.mae_atc_c += t.atc_c / tn;
        }
        res.cells.push_back(cell);
      }
    }
  }
  res.correlations = correlation_table(res.cells, cfg.scenarios);
  return res;
}

inline void write_shift_csv(std::ostream& os, const CovariateShiftResult& r) {
  os << std::setprecision(10);
  os << "scenario,model,shift,test_accuracy,bootstrap_accuracy,positive_fraction,ace_u,ace_c,"
        "mae_ac_u,mae_ac_c,mae_doc_u,mae_doc_c,mae_atc_u,mae_atc_c\n";
  for (const auto& c : r.cells) {
    os << to_string(c.scenario) << ',' << to_string(c.model) << ',' << c.shift << ',' << c.test_accuracy << ','
       << c.bootstrap_accuracy << ',' << c.positive_fraction << ',' << c.ace_u << ',' << c.ace_c << ','
       << c.mae_ac_u << ',' << c.mae_ac_c << ',' << c.mae_doc_u << ',' << c.mae_doc_c << ',' << c.mae_atc_u << ','
       << c.mae_atc_c << '\n';
  }
}

inline void write_correlation_csv(std::ostream& os, const CovariateShiftResult& r) {
  os << std::setprecision(10);
  os << "scope,estimator,pearson\n";
  for (const auto& c : r.correlations) os << c.scope << ',' << c.estimator << ',' << c.pearson << '\n';
}

inline void write_shift_plot_data(std::ostream& os, const CovariateShiftResult& r) {
  os << std::setprecision(10);
  os << "scenario,model,shift,statistic,value\n";
  for (const auto& c : r.cells) {
    auto row = [&](const char* s, double v) {
      os << to_string(c.scenario) << ',' << to_string(c.model) << ',' << c.shift << ',' << s << ',' << v << '\n';
    };
    row("test_accuracy", c.test_accuracy);
    row("ace_u", c.ace_u);
    row("ace_c", c.ace_c);
    row("mae_ac_u", c.mae_ac_u);
    row("mae_ac_c", c.mae_ac_c);
    row("mae_doc_u", c.mae_doc_u);
    row("mae_doc_c", c.mae_doc_c);
    row("mae_atc_u", c.mae_atc_u);
    row("mae_atc_c", c.mae_atc_c);
  }
}

}  // namespace acmon
