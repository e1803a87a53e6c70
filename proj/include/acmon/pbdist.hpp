#pragma once

// Exact Poisson binomial distribution of the number of correct predictions in
// a window, given each prediction's calibrated confidence score.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "acmon/error.hpp"

namespace acmon {

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Real inverse DFT of a Hermitian spectrum given by its first size/2+1 terms:
// out[k] = sum_l spectrum[l] * exp(+2*pi*i*l*k/size).
inline std::vector<double> hermitian_inverse_dft(std::vector<std::complex<double>> spectrum,
                                                 std::size_t size) {
  std::vector<double> out(size);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(size),
                                reinterpret_cast<fftw_complex*>(spectrum.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Round-off from the transform can leave entries like -1e-16; anything below
// -1e-12 means the computation itself is wrong.
inline void clamp_and_normalize(std::vector<double>& pmf) {
  constexpr double kNegativeTolerance = -1e-12;
  double total = 0.0;
  for (double& v : pmf) {
    if (v < 0.0) {
      if (v <= kNegativeTolerance) {
        throw std::logic_error("Poisson binomial PMF entry " + std::to_string(v) +
                               " is below the round-off tolerance");
      }
      v = 0.0;
    }
    total += v;
  }
  for (double& v : pmf) v /= total;
}

inline void validate_probs(std::span<const double> probs) {
  if (probs.empty()) throw Error(ErrorKind::EmptyInput, "probability vector is empty");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorKind::OutOfRange,
                  "probability at index " + std::to_string(i) + " is " + std::to_string(p) +
                      ", expected a finite value in [0, 1]");
    }
  }
}

}  // namespace detail

/// PMF over k = 0..n via the characteristic function
/// chi(w) = prod_j (1 - p_j + p_j e^{iw}) sampled at w_l = 2*pi*l/(n+1),
/// followed by an inverse DFT (Hong 2013).
inline std::vector<double> pmf_dft(std::span<const double> probs) {
  detail::validate_probs(probs);
  const std::size_t size = probs.size() + 1;
  const std::size_t half = size / 2 + 1;

  std::vector<std::complex<double>> spectrum(half);
  for (std::size_t l = 0; l < half; ++l) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(size);
    const double wr = std::cos(omega);
    const double wi = std::sin(omega);
    double re = 1.0;
    double im = 0.0;
    for (double p : probs) {
      const double zr = 1.0 - p + p * wr;
      const double zi = p * wi;
      const double next_re = re * zr - im * zi;
      im = re * zi + im * zr;
      re = next_re;
    }
    // The c2r transform uses the +i convention, so feed conj(chi).
    spectrum[l] = {re / static_cast<double>(size), -im / static_cast<double>(size)};
  }

  auto pmf = detail::hermitian_inverse_dft(std::move(spectrum), size);
  detail::clamp_and_normalize(pmf);
  return pmf;
}

/// PMF by iterated convolution with each Bernoulli(p_j). O(n^2); used as the
/// independent reference for pmf_dft.
inline std::vector<double> pmf_dp(std::span<const double> probs) {
  detail::validate_probs(probs);
  std::vector<double> pmf(probs.size() + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t filled = 0;
  for (double p : probs) {
    ++filled;
    for (std::size_t k = filled; k > 0; --k) {
      pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
    }
    pmf[0] *= (1.0 - p);
  }
  return pmf;
}

struct CountInterval {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// Endpoint rule for central intervals of a discrete CDF F with tail a/2.
//   Conservative: lo = min{k : F(k) >= a/2}, hi = min{k : F(k) >= 1 - a/2}.
//                 Coverage is always >= level.
//   Inclusive:    the k range where a/2 <= F(k) <= 1 - a/2 read literally, so
//                 hi = max{k : F(k) <= 1 - a/2} (never below lo). Coverage can
//                 fall under the level; kept for comparison runs only.
enum class IntervalConvention { Conservative, Inclusive };

/// Distribution of K = sum of independent Bernoulli(p_j).
///
/// The PMF is computed on first use and cached. Copies share the cache, and
/// the first computation is guarded by a once_flag, so a distribution may be
/// queried from several threads.
class PoissonBinomial {
 public:
  explicit PoissonBinomial(std::vector<double> probs) : cache_(std::make_shared<Cache>()) {
    detail::validate_probs(probs);
    probs_ = std::move(probs);
  }

  static PoissonBinomial build(std::span<const double> probs) {
    return PoissonBinomial(std::vector<double>(probs.begin(), probs.end()));
  }

  std::size_t trials() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }

  bool pmf_computed() const noexcept { return cache_->ready.load(std::memory_order_acquire); }

  const std::vector<double>& pmf() const {
    std::call_once(cache_->once, [this] {
      cache_->pmf = pmf_dft(probs_);
      cache_->cdf.resize(cache_->pmf.size());
      double running = 0.0;
      for (std::size_t k = 0; k < cache_->pmf.size(); ++k) {
        running += cache_->pmf[k];
        cache_->cdf[k] = running;
      }
      cache_->ready.store(true, std::memory_order_release);
    });
    return cache_->pmf;
  }

  double cdf(std::size_t k) const {
    if (k > trials()) {
      throw Error(ErrorKind::OutOfRange, "cdf query k=" + std::to_string(k) + " exceeds n=" +
                                             std::to_string(trials()));
    }
    pmf();
    return cache_->cdf[k];
  }

  double mean() const noexcept {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
  }

  double variance() const noexcept {
    double s = 0.0;
    for (double p : probs_) s += p * (1.0 - p);
    return s;
  }

  /// Central interval [lo, hi] for K at the given level. With a = 1 - level,
  /// lo is the smallest k with F(k) >= a/2 and hi the smallest k with
  /// F(k) >= 1 - a/2, so P(lo <= K <= hi) >= level.
  CountInterval central_interval(double level,
                                 IntervalConvention convention = IntervalConvention::Conservative) const {
    if (!(level > 0.0 && level < 1.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "interval level must lie in (0, 1), got " + std::to_string(level));
    }
    pmf();
    const auto& cdf = cache_->cdf;
    const double tail = (1.0 - level) / 2.0;
    auto first_at_least = [&](double target) {
      auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
      return it == cdf.end() ? trials() : static_cast<std::size_t>(it - cdf.begin());
    };
    const std::size_t lo = first_at_least(tail);
    if (convention == IntervalConvention::Conservative) return {lo, first_at_least(1.0 - tail)};
    auto it = std::upper_bound(cdf.begin(), cdf.end(), 1.0 - tail);
    const std::size_t last_within = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
    return {lo, std::max(lo, last_within)};
  }

  /// Exact probability mass on [lo, hi].
  double mass_between(std::size_t lo, std::size_t hi) const {
    const auto& p = pmf();
    double s = 0.0;
    for (std::size_t k = lo; k <= std::min(hi, trials()); ++k) s += p[k];
    return s;
  }

 private:
  struct Cache {
    std::once_flag once;
    std::atomic<bool> ready{false};
    std::vector<double> pmf;
    std::vector<double> cdf;
  };

  std::vector<double> probs_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace acmon
