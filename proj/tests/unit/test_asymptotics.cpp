#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "barrier/asymptotics.hpp"
#include "barrier/errors.hpp"
#include "barrier/lt_functionals.hpp"

using namespace barrier;
using std::numbers::pi;

TEST(PredictDiscrete, AngleExample) {
  const auto p = predict_discrete(10, 40);
  EXPECT_NEAR(p.phi, pi * 39 / 80, 1e-15);
  EXPECT_NEAR(p.phi, 1.5315, 1e-4);
  EXPECT_NEAR(p.r, 1.0 - 2.0 / 3.0 * std::log(40.0) / 40.0, 1e-15);
  EXPECT_NEAR(p.lambda_approx.real(), 2 * std::cos(p.phi), 1e-15);
}

TEST(PredictDiscrete, ImaginaryPartAndDistance) {
  for (int n : {40, 200, 1600}) {
    for (const auto& p : predict_window(n)) {
      EXPECT_DOUBLE_EQ(p.lambda_approx.imag(), std::pow(n, -2.0 / 3.0));
      EXPECT_DOUBLE_EQ(dist_to_band(p.lambda_approx), std::pow(n, -2.0 / 3.0));
      EXPECT_GT(p.phi, 0.0);
      EXPECT_LT(p.phi, pi);
      EXPECT_GT(p.r, 0.0);
      EXPECT_LT(p.r, 1.0);
    }
  }
}

TEST(PredictDiscrete, OutOfWindowFails) {
  const auto [lo, hi] = index_range(40);
  EXPECT_THROW(predict_discrete(lo - 1, 40), ValidationError);
  EXPECT_THROW(predict_discrete(hi + 1, 40), ValidationError);
  EXPECT_NO_THROW(predict_discrete(lo, 40));
}

TEST(IndexRange, StandardCountFormula) {
  for (int n = 200; n <= 3200; n += 37) {
    const auto [lo, hi] = index_range(n);
    const int expected = static_cast<int>(std::floor((3.0 * n + 2) / 8) - std::ceil((n + 2.0) / 8)) + 1;
    EXPECT_EQ(hi - lo + 1, expected);
    EXPECT_LT(std::abs(double(expected) / n - 0.25), 0.05);
  }
}

TEST(IndexRange, ExtendedWindowIsWider) {
  const IndexWindow ext{WindowKind::extended, 0.05};
  const auto [lo, hi] = index_range(400, ext);
  EXPECT_EQ(lo, static_cast<int>(std::ceil((2 * 400 * 0.05 + 1) / 4)));
  EXPECT_EQ(hi, static_cast<int>(std::floor((2 * 400 * 0.95 + 1) / 4)));
  const auto [slo, shi] = index_range(400);
  EXPECT_LT(lo, slo);
  EXPECT_GT(hi, shi);
}

TEST(RateRegress, Examples) {
  std::vector<std::pair<double, double>> s{{100, 0.01}, {200, 0.005}, {400, 0.0025}};
  EXPECT_NEAR(rate_regress(s), -1.0, 1e-9);
  std::vector<std::pair<double, double>> c{{100, 3}, {200, 3}, {400, 3}};
  EXPECT_NEAR(rate_regress(c), 0.0, 1e-12);
  std::vector<std::pair<double, double>> l;
  for (double n : {200, 400, 800, 1600, 3200}) l.emplace_back(n, std::log(n) / n);
  const double slope = rate_regress(l);
  EXPECT_GT(slope, -1.0);
  EXPECT_LT(slope, -0.8);
}

TEST(RateRegress, Preconditions) {
  std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
  EXPECT_THROW(rate_regress(two), ValidationError);
  std::vector<std::pair<double, double>> flat{{5, 1}, {5, 2}, {5, 3}};
  EXPECT_THROW(rate_regress(flat), ValidationError);
  std::vector<std::pair<double, double>> neg{{1, 1}, {2, -2}, {3, 3}};
  EXPECT_THROW(rate_regress(neg), ValidationError);
}

namespace {

DiscreteEigenpoint point(cplx lambda, Branch b = Branch::minus) { return {0.5, 0.5, lambda, b, 0.0}; }

}  // namespace

TEST(MatchAndMeasure, GreedyShortestFirstOneToOne) {
  std::vector<AsymptoticPrediction> preds(2);
  preds[0].j = 1;
  preds[0].lambda_approx = cplx(0.0, 0.1);
  preds[1].j = 2;
  preds[1].lambda_approx = cplx(0.05, 0.1);
  // Both predictions are nearest to the same eigenvalue; the closer pair wins.
  std::vector<DiscreteEigenpoint> spec{point(cplx(0.04, 0.1)), point(cplx(-0.5, 0.1))};
  const auto m = match_and_measure(preds, spec);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1].matched_lambda.value(), cplx(0.04, 0.1));
  EXPECT_EQ(m[0].matched_lambda.value(), cplx(-0.5, 0.1));
  EXPECT_NEAR(m[0].error, 0.5, 1e-15);
}

TEST(MatchAndMeasure, UnmatchedBookkeepingBelowThreshold) {
  std::vector<AsymptoticPrediction> preds(20);
  std::vector<DiscreteEigenpoint> spec;
  for (int j = 0; j < 20; ++j) {
    preds[j].j = j + 1;
    preds[j].lambda_approx = cplx(0.1 * j - 1.0, 0.05);
    if (j != 7) spec.push_back(point(preds[j].lambda_approx + cplx(0.001, 0)));
  }
  MatchOptions opts;
  opts.radius = 0.01;
  const auto m = match_and_measure(preds, spec, opts);
  int unmatched = 0;
  for (const auto& x : m) unmatched += !x.matched();
  EXPECT_EQ(unmatched, 1);
  EXPECT_FALSE(m[7].matched());
  EXPECT_EQ(m[7].error, 0.0);
}

TEST(MatchAndMeasure, TooManyUnmatchedFails) {
  std::vector<AsymptoticPrediction> preds(5);
  for (int j = 0; j < 5; ++j) preds[j].lambda_approx = cplx(j, 0.1);
  std::vector<DiscreteEigenpoint> spec{point(cplx(0, 0.1))};
  EXPECT_THROW(match_and_measure(preds, spec), ValidationError);
}

TEST(MatchAndMeasure, BranchFilter) {
  std::vector<AsymptoticPrediction> preds(1);
  preds[0].lambda_approx = cplx(0.0, 0.1);
  std::vector<DiscreteEigenpoint> spec{point(cplx(0.0, 0.1), Branch::plus), point(cplx(0.3, 0.1), Branch::minus)};
  MatchOptions opts;
  opts.branch = Branch::minus;
  const auto m = match_and_measure(preds, spec, opts);
  EXPECT_EQ(m[0].matched_lambda.value(), cplx(0.3, 0.1));
}

TEST(MatchAndMeasure, MatchedPointsAreAdmissible) {
  const int n = 200;
  const auto s = discrete_spectrum(DiscreteBarrier(n, std::pow(n, -2.0 / 3.0)));
  MatchOptions opts;
  opts.max_unmatched_fraction = 1.0;
  for (const auto& m : match_and_measure(predict_window(n), s.points, opts)) {
    if (m.matched()) EXPECT_LT(std::abs(*m.matched_k), 1.0);
  }
}
