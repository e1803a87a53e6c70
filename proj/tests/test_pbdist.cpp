#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "acmon/pbdist.hpp"

using namespace acmon;
using Catch::Matchers::WithinAbs;

namespace {

// Brute-force enumeration over all 2^n outcomes.
std::vector<double> pmf_enumerate(const std::vector<double>& p) {
  const std::size_t n = p.size();
  std::vector<double> pmf(n + 1, 0.0);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double prob = 1.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool hit = (mask >> j) & 1U;
      prob *= hit ? p[j] : 1.0 - p[j];
      k += hit ? 1 : 0;
    }
    pmf[k] += prob;
  }
  return pmf;
}

double binomial_pmf(std::size_t n, std::size_t k, double p) {
  const double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace

TEST_CASE("build validates its input", "[pbdist]") {
  CHECK(PoissonBinomial::build(std::vector<double>{0.5, 0.5}).trials() == 2);
  auto kind_of = [](std::vector<double> p) {
    try {
      PoissonBinomial::build(p);
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Parse;
  };
  CHECK(kind_of({1.2}) == ErrorKind::OutOfRange);
  CHECK(kind_of({}) == ErrorKind::EmptyInput);
  CHECK(kind_of({-0.1}) == ErrorKind::OutOfRange);
  CHECK(kind_of({std::nan("")}) == ErrorKind::OutOfRange);
}

TEST_CASE("small hand-computed PMFs", "[pbdist]") {
  for (auto* f : {&pmf_dft, &pmf_dp}) {
    auto a = f(std::vector<double>{0.5, 0.5});
    REQUIRE(a.size() == 3);
    CHECK_THAT(a[0], WithinAbs(0.25, 1e-14));
    CHECK_THAT(a[1], WithinAbs(0.5, 1e-14));
    CHECK_THAT(a[2], WithinAbs(0.25, 1e-14));

    auto b = f(std::vector<double>{0.2, 0.7});
    CHECK_THAT(b[0], WithinAbs(0.24, 1e-14));
    CHECK_THAT(b[1], WithinAbs(0.62, 1e-14));
    CHECK_THAT(b[2], WithinAbs(0.14, 1e-14));

    auto c = f(std::vector<double>{1.0, 1.0, 1.0});
    REQUIRE(c.size() == 4);
    CHECK_THAT(c[0], WithinAbs(0.0, 1e-14));
    CHECK_THAT(c[1], WithinAbs(0.0, 1e-14));
    CHECK_THAT(c[2], WithinAbs(0.0, 1e-14));
    CHECK_THAT(c[3], WithinAbs(1.0, 1e-14));
  }
}

TEST_CASE("DFT and DP agree with enumeration for n <= 12", "[pbdist][oracle]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> p(n);
      for (auto& x : p) x = u(rng);
      if (rep == 1) p[0] = 0.0;
      if (rep == 2) p[n - 1] = 1.0;
      const auto exact = pmf_enumerate(p);
      const auto dft = pmf_dft(p);
      const auto dp = pmf_dp(p);
      for (std::size_t k = 0; k <= n; ++k) {
        CHECK_THAT(dft[k], WithinAbs(exact[k], 1e-12));
        CHECK_THAT(dp[k], WithinAbs(exact[k], 1e-12));
      }
    }
  }
}

TEST_CASE("equal probabilities reproduce the binomial PMF", "[pbdist][oracle]") {
  std::vector<double> p(500, 0.897);
  const auto dft = pmf_dft(p);
  const auto dp = pmf_dp(p);
  for (std::size_t k = 0; k <= 500; ++k) {
    const double b = binomial_pmf(500, k, 0.897);
    CHECK_THAT(dft[k], WithinAbs(b, 1e-10));
    CHECK_THAT(dp[k], WithinAbs(b, 1e-10));
  }
}

TEST_CASE("cdf queries", "[pbdist]") {
  PoissonBinomial half({0.5, 0.5});
  CHECK_THAT(half.cdf(1), WithinAbs(0.75, 1e-14));
  PoissonBinomial two({0.2, 0.7});
  CHECK_THAT(two.cdf(0), WithinAbs(0.24, 1e-14));
  CHECK_THAT(two.cdf(2), WithinAbs(1.0, 1e-9));
  CHECK_THROWS_AS(two.cdf(3), Error);
}

TEST_CASE("moments", "[pbdist]") {
  PoissonBinomial a({0.5, 0.5});
  CHECK(a.mean() == 1.0);
  CHECK(a.variance() == 0.5);
  PoissonBinomial b({1.0, 1.0});
  CHECK(b.mean() == 2.0);
  CHECK(b.variance() == 0.0);
  PoissonBinomial c({0.2, 0.7});
  CHECK_THAT(c.mean(), WithinAbs(0.9, 1e-15));
  CHECK_THAT(c.variance(), WithinAbs(0.37, 1e-15));
}

TEST_CASE("central intervals", "[pbdist]") {
  {
    PoissonBinomial d(std::vector<double>(10, 1.0));
    const auto ci = d.central_interval(0.95);
    CHECK(ci.lo == 10);
    CHECK(ci.hi == 10);
  }
  {
    PoissonBinomial d(std::vector<double>(20, 0.5));
    const auto ci = d.central_interval(0.95);
    CHECK(ci.lo == 6);
    CHECK(ci.hi == 14);
    // The inclusive rule drops the upper endpoint whose CDF passes 0.975.
    const auto incl = d.central_interval(0.95, IntervalConvention::Inclusive);
    CHECK(incl.lo == 6);
    CHECK(incl.hi == 13);
  }
  {
    PoissonBinomial d(std::vector<double>(500, 0.897));
    const auto ci = d.central_interval(0.95);
    CHECK(ci.lo / 500.0 >= 0.869);
    CHECK(ci.hi / 500.0 <= 0.925);
    CHECK(ci.lo < ci.hi);
  }
  PoissonBinomial d({0.3, 0.4});
  CHECK_THROWS_AS(d.central_interval(0.0), Error);
  CHECK_THROWS_AS(d.central_interval(1.0), Error);
}

TEST_CASE("conservative intervals hold at least the requested mass", "[pbdist][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> p(len(rng));
    for (auto& x : p) x = u(rng);
    PoissonBinomial d(p);
    for (double level : {0.8, 0.9, 0.95, 0.99}) {
      const auto ci = d.central_interval(level);
      CHECK(ci.lo <= ci.hi);
      CHECK(d.mass_between(ci.lo, ci.hi) >= level - 1e-12);
    }
  }
}

TEST_CASE("PMF is a distribution and matches the moments", "[pbdist][property]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {1, 2, 7, 64, 127, 128, 255, 500, 1000}) {
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    const auto pmf = pmf_dft(p);
    double total = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      CHECK(pmf[k] >= 0.0);
      total += pmf[k];
      m1 += k * pmf[k];
      m2 += double(k) * k * pmf[k];
    }
    PoissonBinomial d(p);
    CHECK_THAT(total, WithinAbs(1.0, 1e-9));
    CHECK_THAT(m1, WithinAbs(d.mean(), 1e-8));
    CHECK_THAT(m2 - m1 * m1, WithinAbs(d.variance(), 1e-8));
  }
}

TEST_CASE("lazily computed PMF is shared across copies and threads", "[pbdist]") {
  std::vector<double> p(200, 0.3);
  PoissonBinomial d(p);
  CHECK_FALSE(d.pmf_computed());
  PoissonBinomial copy = d;
  std::vector<std::jthread> pool;
  std::vector<double> seen(4);
  for (int i = 0; i < 4; ++i) pool.emplace_back([&, i] { seen[i] = copy.cdf(60); });
  pool.clear();
  CHECK(d.pmf_computed());
  for (double s : seen) CHECK(s == seen[0]);
}
