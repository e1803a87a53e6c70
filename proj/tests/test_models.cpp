#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "acmon/calibration.hpp"
#include "acmon/knn_index.hpp"
#include "acmon/models.hpp"
#include "acmon/synthdata.hpp"

using namespace acmon;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<LabeledPoint> separable_toy() {
  std::vector<LabeledPoint> d;
  for (int i = 0; i < 100; ++i) {
    d.push_back({{-1, -1}, false, 0.0});
    d.push_back({{1, 1}, true, 1.0});
  }
  return d;
}

double accuracy(const Classifier& c, const std::vector<LabeledPoint>& d) {
  double ok = 0.0;
  for (const auto& p : d) ok += c.predict(p.x) == p.label;
  return ok / d.size();
}

std::vector<std::size_t> brute_knn(const std::vector<Point2>& pts, Point2 q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = pts[i].x1 - q.x1, dy = pts[i].x2 - q.x2;
    dist.push_back({dx * dx + dy * dy, i});
  }
  std::sort(dist.begin(), dist.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, pts.size()); ++i) out.push_back(dist[i].second);
  return out;
}

}  // namespace

TEST_CASE("LR separates a separable toy set", "[models]") {
  const auto d = separable_toy();
  const auto lr = fit(ModelKind::LogisticRegression, d);
  CHECK(accuracy(lr, d) == 1.0);
  CHECK(lr.kind() == ModelKind::LogisticRegression);
}

TEST_CASE("LR converges to the gradient tolerance", "[models]") {
  const auto d = scenario1_sample(ScenarioConfig::linear(8000, 2000, 4));
  const auto lr = fit(ModelKind::LogisticRegression, d);
  const auto& p = std::get<LogisticParams>(lr.state());
  CHECK(p.gradient_norm <= 1e-6);
  // Boundary should be close to y = x: w1 > 0, w2 ~ -w1, intercept ~ 0.
  CHECK(p.w1 > 0.5);
  CHECK_THAT(p.w1 + p.w2, WithinAbs(0.0, 0.1));
  CHECK_THAT(p.intercept, WithinAbs(0.0, 0.1));
  // At its boundary the logit is 0.
  const double x1 = 0.7, x2 = -(p.intercept + p.w1 * x1) / p.w2;
  CHECK_THAT(lr.predict_proba({x1, x2}), WithinAbs(0.5, 1e-12));
}

TEST_CASE("GNB fits class moments", "[models]") {
  std::vector<LabeledPoint> d{{{0, 0}, false, 0}, {{2, 0}, false, 0}, {{10, 10}, true, 1}, {{12, 14}, true, 1}};
  const auto g = fit(ModelKind::GaussianNaiveBayes, d);
  const auto& p = std::get<GaussianNBParams>(g.state());
  CHECK(p.mean[0][0] == 1.0);
  CHECK(p.var[0][0] == 1.0);
  CHECK(p.var[0][1] == 1e-9);  // floored
  CHECK(p.mean[1][1] == 12.0);
  CHECK(g.predict({1, 0}) == false);
  CHECK(g.predict({11, 12}) == true);
}

TEST_CASE("KNN votes over k = 5 neighbours", "[models]") {
  std::vector<LabeledPoint> d;
  // 3 positives and 2 negatives near the origin, 5 negatives far away
  for (int i = 0; i < 3; ++i) d.push_back({{0.01 * i, 0}, true, 1});
  for (int i = 0; i < 2; ++i) d.push_back({{0, 0.01 * (i + 1)}, false, 0});
  for (int i = 0; i < 5; ++i) d.push_back({{50.0 + i, 50}, false, 0});
  const auto knn = fit(ModelKind::KNearestNeighbors, d);
  CHECK_THAT(knn.predict_proba({0, 0}), WithinAbs(0.6, 1e-15));
  CHECK_THAT(knn.confidence({0, 0}), WithinAbs(0.6, 1e-15));
  CHECK(knn.predict({0, 0}));
  CHECK(knn.predict_proba({50, 50}) == 0.0);
}

TEST_CASE("k-d tree matches brute force", "[models][oracle]") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z(0.0, 3.0);
  for (std::size_t n : {1, 5, 17, 100, 2000}) {
    std::vector<Point2> pts(n);
    for (auto& p : pts) p = {std::round(z(rng) * 4) / 4, std::round(z(rng) * 4) / 4};  // lattice: many ties
    KdTree2 tree(pts);
    for (int q = 0; q < 200; ++q) {
      const Point2 query{z(rng), z(rng)};
      for (std::size_t k : {1, 5, 12}) CHECK(tree.nearest(query, k) == brute_knn(pts, query, k));
    }
  }
}

TEST_CASE("Bayes-optimal classifier", "[models]") {
  const auto b = Classifier::bayes_optimal(ScenarioConfig::linear(0, 0, 0));
  CHECK(b.predict_proba({3, 3}) == 0.5);
  CHECK(b.confidence({3, 3}) == 0.5);
  CHECK(b.predict({3, 3}));
  CHECK_THROWS_AS(fit(ModelKind::BayesOptimal, separable_toy()), Error);
}

TEST_CASE("confidence is max(p, 1 - p) and at least 0.5", "[models][property]") {
  const auto train = scenario1_sample(ScenarioConfig::linear(4000, 1000, 8));
  const auto test = scenario1_sample(ScenarioConfig::linear(400, 400, 9));
  for (auto kind : {ModelKind::LogisticRegression, ModelKind::GaussianNaiveBayes, ModelKind::KNearestNeighbors}) {
    const auto m = fit(kind, train);
    for (const auto& p : test) {
      const double prob = m.predict_proba(p.x);
      CHECK(prob >= 0.0);
      CHECK(prob <= 1.0);
      CHECK(m.confidence(p.x) == std::max(prob, 1.0 - prob));
      CHECK(m.confidence(p.x) >= 0.5);
      CHECK(m.predict(p.x) == (prob >= 0.5));
    }
  }
}

TEST_CASE("KNN scores lie on the 1/k grid", "[models][property]") {
  const auto train = scenario1_sample(ScenarioConfig::linear(4000, 1000, 1));
  const auto m = fit(ModelKind::KNearestNeighbors, train);
  for (const auto& p : scenario1_sample(ScenarioConfig::linear(300, 300, 2))) {
    const double v = m.predict_proba(p.x) * 5;
    CHECK(v == std::round(v));
  }
}

TEST_CASE("Bayes-optimal scores are calibrated at every shift level", "[models][property]") {
  for (auto make : {&ScenarioConfig::linear, &ScenarioConfig::circular}) {
    for (int level = 0; level <= 3; ++level) {
      const auto [easy, hard] = shift_counts(level);
      const auto cfg = make(easy, hard, 100 + level);
      const auto model = Classifier::bayes_optimal(cfg);
      CHECK(ace(score_points(model, sample_scenario(cfg)), 20) <= 0.010);
    }
  }
}

TEST_CASE("fit rejects bad training data", "[models]") {
  auto kind_of = [](const std::vector<LabeledPoint>& d) {
    try {
      fit(ModelKind::LogisticRegression, d);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Parse;
  };
  CHECK(kind_of({{{0, 0}, true, 1}, {{1, 1}, true, 1}}) == ErrorKind::AllOneClass);
  CHECK(kind_of({{{0, 0}, true, 1}}) == ErrorKind::InvalidArgument);
  CHECK(kind_of({{{NAN, 0}, true, 1}, {{1, 1}, false, 0}}) == ErrorKind::InvalidArgument);
  CHECK_THROWS_AS(Classifier().predict_proba({0, 0}), Error);
}

TEST_CASE("LR and GNB round-trip through JSON", "[models]") {
  const auto train = scenario1_sample(ScenarioConfig::linear(2000, 500, 3));
  for (auto kind : {ModelKind::LogisticRegression, ModelKind::GaussianNaiveBayes}) {
    const auto m = fit(kind, train);
    const auto back = Classifier::from_json(nlohmann::json::parse(m.to_json().dump()));
    for (const auto& p : train) CHECK(back.predict_proba(p.x) == Catch::Approx(m.predict_proba(p.x)).margin(1e-12));
  }
  const auto b = Classifier::bayes_optimal(ScenarioConfig::circular(0, 0, 0));
  const auto b2 = Classifier::from_json(b.to_json());
  CHECK(b2.predict_proba({1, 2}) == b.predict_proba({1, 2}));

  auto knn = fit(ModelKind::KNearestNeighbors, train);
  knn.set_training_reference({{"path", "train.csv"}, {"seed", 3}});
  CHECK(knn.to_json()["training_set"]["seed"] == 3);
  CHECK_THROWS_AS(Classifier::from_json(knn.to_json()), Error);
}

TEST_CASE("model names", "[models]") {
  for (auto k : {ModelKind::LogisticRegression, ModelKind::GaussianNaiveBayes, ModelKind::KNearestNeighbors,
                 ModelKind::BayesOptimal}) {
    CHECK(parse_model_kind(to_string(k)) == k);
  }
}
