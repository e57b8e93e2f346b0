#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "barrier/errors.hpp"
#include "barrier/numeric_core.hpp"
#include "barrier/schrodinger_barrier.hpp"
#include "oracles.hpp"

using namespace barrier;
using std::numbers::pi;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST(SparsePolynomial, SumsDuplicateDegreesAndDropsZeros) {
  SparsePolynomial p({{3, 1.0}, {0, 2.0}, {3, 1.0}, {1, 0.0}, {2, cplx{0, 1}}, {2, cplx{0, -1}}});
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.terms()[0].degree, 0);
  EXPECT_EQ(p.terms()[1].degree, 3);
  EXPECT_EQ(p.coefficient(3), cplx(2.0));
  EXPECT_EQ(p.coefficient(1), cplx(0.0));
  EXPECT_EQ(p.degree(), 3);
}

TEST(SparsePolynomial, RejectsNegativeDegree) {
  EXPECT_THROW(SparsePolynomial({{-1, 1.0}}), ValidationError);
}

TEST(Evaluate, UnitImaginaryRootOfZSquaredPlusOne) {
  SparsePolynomial p({{2, 1.0}, {0, 1.0}});
  const auto v = evaluate(p, cplx{0, 1});
  EXPECT_EQ(v.value, cplx(0.0));
  EXPECT_EQ(v.derivative, cplx(0, 2));
}

TEST(Evaluate, HandExpandedQuarticVanishesAtOneWithItsDerivative) {
  // beta (z^3 - 1)(z - 1) - (z^2 - 1)^2 with beta = i, expanded by hand:
  // (i-1) z^4 - i z^3 + 2 z^2 - i z + (i-1); derivative 4(i-1)z^3 - 3i z^2 + 4z - i.
  const cplx i{0, 1};
  SparsePolynomial p({{4, i - 1.0}, {3, -i}, {2, 2.0}, {1, -i}, {0, i - 1.0}});
  const auto v = evaluate(p, 1.0);
  EXPECT_LT(std::abs(v.value), 1e-15);
  EXPECT_LT(std::abs(v.derivative), 1e-15);
  const auto w = evaluate(p, 0.5);
  const cplx expected = (i - 1.0) * 0.0625 - i * 0.125 + 2.0 * 0.25 - i * 0.5 + (i - 1.0);
  EXPECT_TRUE(near(w.value, expected, 1e-15));
}

TEST(Evaluate, AtOriginReturnsLowCoefficients) {
  SparsePolynomial p({{0, cplx{3, -1}}, {1, cplx{0.5, 2}}, {7, 4.0}});
  const auto v = evaluate(p, 0.0);
  EXPECT_EQ(v.value, cplx(3, -1));
  EXPECT_EQ(v.derivative, cplx(0.5, 2));
}

TEST(Evaluate, MatchesDenseHornerOnSparseTerms) {
  SparsePolynomial p({{0, 1.0}, {5, cplx{0, 2}}, {40, -3.0}});
  std::vector<cplx> dense(41, 0.0);
  dense[0] = 1.0;
  dense[5] = cplx{0, 2};
  dense[40] = -3.0;
  for (cplx z : {cplx{0.3, 0.4}, cplx{-0.9, 0.1}, cplx{1.01, -0.02}}) {
    EXPECT_TRUE(near(evaluate(p, z).value, oracle::horner(dense, z), 1e-13));
  }
}

TEST(BackwardError, ZeroAtExactRootAndScaleFree) {
  SparsePolynomial p({{2, 1.0}, {0, -4.0}});
  EXPECT_EQ(backward_error(p, 2.0), 0.0);
  EXPECT_NEAR(backward_error(p, 3.0), 5.0 / 13.0, 1e-15);
}

TEST(SolvePolynomial, ZSquaredPlusOne) {
  const auto r = solve_polynomial(SparsePolynomial({{2, 1.0}, {0, 1.0}}), 1e-12);
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_TRUE(near(r.roots[0].value, cplx(0, -1), 1e-14) || near(r.roots[1].value, cplx(0, -1), 1e-14));
  EXPECT_TRUE(near(r.roots[0].value, cplx(0, 1), 1e-14) || near(r.roots[1].value, cplx(0, 1), 1e-14));
  EXPECT_EQ(r.total_multiplicity(), 2);
}

TEST(SolvePolynomial, DoubleRootMergedWithMultiplicityTwo) {
  const auto r = solve_polynomial(SparsePolynomial({{2, 1.0}, {1, -2.0}, {0, 1.0}}), 1e-12);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_EQ(r.roots[0].multiplicity, 2);
  EXPECT_TRUE(near(r.roots[0].value, 1.0, 1e-12));
}

TEST(SolvePolynomial, RecoversKnownFactorsOfDegreeEight) {
  const std::vector<cplx> factors{{0.5, 0.1}, {-0.7, 0.3}, {1.2, -0.4}, {0.0, 1.5},
                                  {-1.1, -1.1}, {0.3, -0.8}, {2.0, 0.0}, {-0.2, 0.6}};
  const auto coeffs = oracle::expand(factors, cplx{1.5, -0.5});
  const auto r = solve_polynomial(SparsePolynomial::from_dense(coeffs), 1e-12);
  ASSERT_EQ(r.total_multiplicity(), 8);
  for (cplx f : factors) {
    double best = INFINITY;
    for (const auto& root : r.roots) best = std::min(best, std::abs(root.value - f));
    EXPECT_LT(best, 1e-10 * std::abs(f)) << f;
  }
}

TEST(SolvePolynomial, ZeroRootsAtOriginAreSplitOff) {
  const auto r = solve_polynomial(SparsePolynomial({{5, 1.0}, {3, -1.0}}), 1e-12);
  EXPECT_EQ(r.total_multiplicity(), 5);
  bool found_origin = false;
  for (const auto& root : r.roots) {
    if (root.value == 0.0) {
      EXPECT_EQ(root.multiplicity, 3);
      found_origin = true;
    }
  }
  EXPECT_TRUE(found_origin);
}

TEST(SolvePolynomial, RejectsBadInput) {
  EXPECT_THROW(solve_polynomial(SparsePolynomial({{0, 1.0}}), 1e-12), ValidationError);
  EXPECT_THROW(solve_polynomial(SparsePolynomial({{1, 1.0}}), 0.0), ValidationError);
}

TEST(SolvePolynomial, ExhaustedBudgetReportsWorstResidual) {
  SolveOptions opts;
  opts.max_iterations = 1;
  const auto coeffs = oracle::expand({{0.9, 0.1}, {-0.3, 0.2}, {0.1, -0.7}, {1.4, 0.4}, {-2.0, 0.0}});
  try {
    solve_polynomial(SparsePolynomial::from_dense(coeffs), 1e-14, opts);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.worst_residual(), 1e-14);
  }
}

TEST(NewtonRefine, CosineFromOnePointFive) {
  const HolomorphicMap f = [](cplx z) { return HolomorphicValue{std::cos(z), -std::sin(z), 1.0}; };
  const auto r = newton_refine(f, 1.5, 1e-15, 50);
  EXPECT_NEAR(r.root.real(), pi / 2, 1e-12);
  EXPECT_NEAR(r.root.imag(), 0.0, 1e-12);
}

TEST(NewtonRefine, SquareRootOfTwo) {
  const HolomorphicMap f = [](cplx z) { return HolomorphicValue{z * z - 2.0, 2.0 * z, std::max(std::norm(z), 2.0)}; };
  const auto r = newton_refine(f, 1.0, 1e-15, 50);
  EXPECT_NEAR(r.root.real(), std::sqrt(2.0), 1e-12);
}

TEST(NewtonRefine, ReducedEquationFromSeedReachesRelativeResidual) {
  const double h = 2500;
  const cplx c = std::polar(1.0, -pi / 4) * std::sqrt(h);
  const HolomorphicMap f = [c](cplx mu) {
    return HolomorphicValue{mu + c * std::cos(mu), 1.0 - c * std::sin(mu),
                            std::max(std::abs(mu), std::abs(c * std::cos(mu)))};
  };
  const auto r = newton_refine(f, seed_mu(40, h), 1e-11, 100);
  const double rel = std::abs(r.root + c * std::cos(r.root)) / std::max(std::abs(r.root), std::abs(c * std::cos(r.root)));
  EXPECT_LE(rel, 1e-10);
}

TEST(NewtonRefine, FlatDerivativeFailsWithLastIterate) {
  const HolomorphicMap f = [](cplx z) { return HolomorphicValue{z * z + 1.0, 2.0 * z, 1.0}; };
  try {
    newton_refine(f, 0.0, 1e-12, 50);
    FAIL() << "expected NewtonError";
  } catch (const NewtonError& e) {
    EXPECT_EQ(e.last_iterate(), cplx(0.0));
  }
}

TEST(NewtonRefine, StagnationIsReported) {
  // |z|^2 + 1 never vanishes; Newton on the non-holomorphic map cannot descend forever.
  const HolomorphicMap f = [](cplx z) { return HolomorphicValue{std::norm(z) + 1.0, 1.0, 1.0}; };
  EXPECT_THROW(newton_refine(f, 0.0, 1e-12, 50), NewtonError);
}

TEST(ChebyshevU, LowOrders) {
  EXPECT_EQ(chebyshev_U(0, cplx{3.7, -1}), cplx(1.0));
  EXPECT_EQ(chebyshev_U(1, cplx{3.7, -1}), cplx(7.4, -2));
  EXPECT_EQ(chebyshev_U(2, 0.0), cplx(-1.0));
}

TEST(ChebyshevU, JoukowskyIdentityAtOneHalf) {
  const double z = 0.5;
  EXPECT_NEAR(chebyshev_U(2, 1.25).real(), 5.25, 1e-14);
  EXPECT_NEAR((std::pow(z, 3) - std::pow(z, -3)) / (z - 1 / z), 5.25, 1e-14);
}

TEST(ChebyshevU, NegativeOrderRejected) { EXPECT_THROW(chebyshev_U(-1, 0.0), ValidationError); }

TEST(Rectangle, RequiresPositiveExtents) {
  EXPECT_THROW(Rectangle(cplx{1, 0}, cplx{1, 1}), ValidationError);
  EXPECT_THROW(Rectangle(cplx{0, 1}, cplx{1, 1}), ValidationError);
  EXPECT_NO_THROW(Rectangle(cplx{0, 0}, cplx{1, 1}));
}

TEST(CountZeros, CosineHasOneZeroInUnitStrip) {
  EXPECT_EQ(count_zeros([](cplx z) { return std::cos(z); }, Rectangle({1, -1}, {2, 1}), 64), 1);
}

TEST(CountZeros, CubeRootsOfUnity) {
  EXPECT_EQ(count_zeros([](cplx z) { return z * z * z - 1.0; }, Rectangle({-2, -2}, {2, 2}), 64), 3);
}

TEST(CountZeros, CountsMultiplicity) {
  EXPECT_EQ(count_zeros([](cplx z) { return std::pow(z - 0.1, 4) * (z + 3.0); }, Rectangle({-1, -1}, {1, 1}), 64), 4);
}

TEST(CountZeros, ZeroOnContourIsBoundaryProximity) {
  EXPECT_THROW(count_zeros([](cplx z) { return z - 1.5; }, Rectangle({1, 0}, {2, 1}), 64), BoundaryProximityError);
}

TEST(CountZeros, RequiresSixtyFourSamples) {
  EXPECT_THROW(count_zeros([](cplx z) { return z; }, Rectangle({-1, -1}, {1, 1}), 63), ValidationError);
}

TEST(CountZeros, AgreesWithNewtonOnContinuousWindow) {
  const ContinuousBarrier op(2500);
  const auto s = continuous_spectrum(op);
  ASSERT_TRUE(s.count_window.has_value());
  EXPECT_EQ(count_zeros([](cplx mu) { return char_residual(mu, 2500); }, *s.count_window, 512), s.roots_in_window);
  EXPECT_EQ(s.roots_in_window, s.distinct_roots);
}
