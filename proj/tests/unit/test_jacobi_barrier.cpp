#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "barrier/errors.hpp"
#include "barrier/jacobi_barrier.hpp"
#include "oracles.hpp"

using namespace barrier;
using std::numbers::pi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(DiscreteBarrier, ValidatesParameters) {
  EXPECT_THROW(DiscreteBarrier(1, 0.1), ValidationError);
  EXPECT_THROW(DiscreteBarrier(5, 0.0), ValidationError);
  EXPECT_THROW(DiscreteBarrier(5, -1.0), ValidationError);
  const DiscreteBarrier op(5, 0.3);
  EXPECT_EQ(op.beta(), cplx(0, 0.3));
}

TEST(CharPoly, NEqualsTwoMinusCollidingTermsAreSummed) {
  const cplx i{0, 1};
  const auto p = char_poly(2, i, Branch::minus);
  EXPECT_EQ(p.degree(), 4);
  EXPECT_EQ(p.coefficient(4), i - 1.0);
  EXPECT_EQ(p.coefficient(3), -i);
  EXPECT_EQ(p.coefficient(2), cplx(2.0));
  EXPECT_EQ(p.coefficient(1), -i);
  EXPECT_EQ(p.coefficient(0), i - 1.0);
}

TEST(CharPoly, NEqualsThreeHasSevenTerms) {
  const auto p = char_poly(DiscreteBarrier(3, 0.5), Branch::minus);
  ASSERT_EQ(p.terms().size(), 7u);
  for (int d = 0; d <= 6; ++d) EXPECT_EQ(p.terms()[d].degree, d);
}

TEST(CharPoly, DegreeIsTwiceN) {
  for (int n : {2, 3, 7, 40, 3200})
    for (Branch b : {Branch::minus, Branch::plus}) EXPECT_EQ(char_poly(DiscreteBarrier(n, 0.2), b).degree(), 2 * n);
}

TEST(CharPoly, MatchesFactoredFormAtRandomPoints) {
  // minus: beta (z^{n+1} - 1)(z^{n-1} - 1) - z^{n-2} (z^2 - 1)^2
  // plus:  beta (z^{n+1} + 1)(z^{n-1} + 1) + z^{n-2} (z^2 - 1)^2
  std::mt19937_64 rng(7);
  const cplx beta{0.3, 0.8};
  for (int n : {2, 3, 6, 11}) {
    const auto pm = char_poly(n, beta, Branch::minus);
    const auto pp = char_poly(n, beta, Branch::plus);
    for (int t = 0; t < 20; ++t) {
      const cplx z = oracle::random_in_annulus(rng, 0.2, 1.5);
      const cplx q = std::pow(z, n - 2) * std::pow(z * z - 1.0, 2);
      const cplx m = beta * (std::pow(z, n + 1) - 1.0) * (std::pow(z, n - 1) - 1.0) - q;
      const cplx p = beta * (std::pow(z, n + 1) + 1.0) * (std::pow(z, n - 1) + 1.0) + q;
      EXPECT_LT(rel(evaluate(pm, z).value, m), 1e-12);
      EXPECT_LT(rel(evaluate(pp, z).value, p), 1e-12);
    }
  }
}

TEST(KFromZ, ArithmeticExample) { EXPECT_NEAR(std::abs(k_from_z(0.5, 2, Branch::minus) - 3.5), 0.0, 1e-15); }

TEST(KFromZ, LimitAtUnitCircleDoubleRoots) {
  for (int n = 3; n <= 50; ++n) {
    const double expected = (n + 1.0) / (n - 1.0);
    EXPECT_NEAR(std::abs(k_from_z(1.0, n, Branch::minus)), expected, 1e-10) << n;
    const Branch at_minus_one = n % 2 == 1 ? Branch::minus : Branch::plus;
    EXPECT_NEAR(std::abs(k_from_z(-1.0, n, at_minus_one)), expected, 1e-10) << n;
  }
}

TEST(KFromZ, SingularAwayFromPlusMinusOne) {
  EXPECT_THROW(k_from_z(std::polar(1.0, 2 * pi / 3), 4, Branch::minus), SingularInputError);
}

TEST(KFromZ, ConsistentWithBetaAtEveryRoot) {
  const DiscreteBarrier op(12, 0.7);
  for (Branch b : {Branch::minus, Branch::plus}) {
    const auto roots = solve_polynomial(char_poly(op, b), 1e-12);
    for (const auto& r : roots.roots) {
      if (std::abs(std::abs(r.value) - 1.0) < 1e-6 && std::abs(std::abs(r.value.real()) - 1.0) < 1e-6) continue;
      const cplx k = k_from_z(r.value, op.n(), b);
      EXPECT_LT(std::abs(k + 1.0 / k - r.value - 1.0 / r.value - op.beta()), 1e-8) << r.value;
    }
  }
}

TEST(BirmanSchwinger, ZeroCouplingGivesIdentity) {
  for (cplx k : {cplx{0.3, 0.2}, cplx{-0.5, 0.5}, cplx{0.1, -0.8}}) {
    EXPECT_NEAR(std::abs(birman_schwinger_det(7, 0.0, k) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(chebyshev_det_form(2, 0.0, k) - 1.0), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(tridiagonal_det_form(7, 0.0, k) - 1.0), 0.0, 1e-13);
  }
}

TEST(BirmanSchwinger, MatchesClosedFormWithCoupledBeta) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5, 8, 13}) {
    for (int t = 0; t < 20; ++t) {
      const cplx z = oracle::random_in_annulus(rng, 0.1, 0.9);
      const cplx k = oracle::random_in_annulus(rng, 0.1, 0.9);
      const cplx beta = k + 1.0 / k - z - 1.0 / z;
      EXPECT_LT(rel(birman_schwinger_det(n, beta, k), oracle::closed_form_det(n, z, k)), 1e-8) << n << z << k;
    }
  }
}

TEST(BirmanSchwinger, DenseMatchesLongDoubleElimination) {
  std::mt19937_64 rng(5);
  for (int n : {4, 20, 60}) {
    const cplx k = oracle::random_in_annulus(rng, 0.2, 0.95);
    const cplx beta{0.0, 0.4};
    const auto ref = oracle::naive_det(n, beta, k);
    EXPECT_LT(rel(birman_schwinger_det(n, beta, k), cplx(double(ref.real()), double(ref.imag()))), 1e-10);
  }
}

TEST(BirmanSchwinger, SizeLimit) {
  EXPECT_THROW(birman_schwinger_det(kDenseDeterminantLimit + 1, cplx{0, 0.1}, cplx{0.3, 0.3}), SizeLimitError);
}

TEST(BirmanSchwinger, ThreeFormsAgree) {
  std::mt19937_64 rng(3);
  for (int n : {2, 3, 10, 39, 150}) {
    for (int t = 0; t < 10; ++t) {
      const cplx k = oracle::random_in_annulus(rng, 0.1, 0.95);
      const cplx beta{0.0, 0.1 + 0.9 * (t / 10.0)};
      const cplx dense = birman_schwinger_det(n, beta, k);
      EXPECT_LT(rel(chebyshev_det_form(n, beta, k), dense), 1e-8) << n << k;
      EXPECT_LT(rel(tridiagonal_det_form(n, beta, k), dense), 1e-8) << n << k;
    }
  }
}

TEST(BirmanSchwinger, RejectsKOutsideDisk) {
  EXPECT_THROW(birman_schwinger_det(5, cplx{0, 1}, 0.0), ValidationError);
  EXPECT_THROW(birman_schwinger_det(5, cplx{0, 1}, 1.0), ValidationError);
}

TEST(DefaultRoute, DenseForSmallN) {
  EXPECT_EQ(default_route(39), DeterminantRoute::dense);
  EXPECT_EQ(default_route(kDenseRouteMaxN), DeterminantRoute::dense);
  EXPECT_EQ(default_route(kDenseRouteMaxN + 1), DeterminantRoute::tridiagonal);
}

TEST(DiscreteSpectrum, FigureOneInstanceIsCertified) {
  const DiscreteBarrier op(39, 0.1);
  const auto s = discrete_spectrum(op);
  EXPECT_EQ(s.disk_multiplicity, 2 * 39 - 2);
  ASSERT_FALSE(s.points.empty());
  for (const auto& p : s.points) {
    EXPECT_LT(std::abs(p.z), 1.0);
    EXPECT_GT(p.z.imag(), 0.0);
    EXPECT_LT(std::abs(p.k), 1.0);
    EXPECT_LT(std::abs(p.lambda - (op.beta() + p.z + 1.0 / p.z)), 1e-8);
    EXPECT_LT(std::abs(p.lambda - (p.k + 1.0 / p.k)), 1e-8);
    EXPECT_GE(p.lambda.real(), -2.0);
    EXPECT_LE(p.lambda.real(), 2.0);
    EXPECT_GT(p.lambda.imag(), 0.0);
    EXPECT_LE(p.lambda.imag(), op.h());
    EXPECT_LE(p.bs_residual, kBsGate);
    EXPECT_LT(std::abs(chebyshev_det_form(op, p.k)), 1e-8);
  }
  EXPECT_TRUE(std::is_sorted(s.points.begin(), s.points.end(), [](const auto& a, const auto& b) {
    return a.lambda.real() < b.lambda.real() ||
           (a.lambda.real() == b.lambda.real() && a.lambda.imag() < b.lambda.imag());
  }));
}

TEST(DiscreteSpectrum, DeterminantSmallAtEigenpoints) {
  // |D(k)| relative to the size of the matrix entries raised to the dimension.
  const DiscreteBarrier op(39, 0.1);
  for (const auto& p : discrete_spectrum(op).points) {
    const cplx c = p.k * op.beta() / (p.k * p.k - 1.0);
    double norm1 = 0.0;
    for (int i = 0; i < op.n(); ++i) norm1 += std::abs(c) * std::pow(std::abs(p.k), i);
    norm1 += 1.0;
    EXPECT_LE(std::abs(birman_schwinger_det(op, p.k)), 1e-8 * std::pow(norm1, op.n()));
  }
}

TEST(DiscreteSpectrum, SmallInstanceMatchesBruteForceGrid) {
  // Local minima of |D| over a 400x400 lambda grid, polished by a few secant
  // steps on the same determinant built from scratch.
  const int n = 2;
  const cplx beta{0, 1};
  const int m = 400;
  const double dx = 4.0 / m, dy = 1.0 / m;
  auto det_at = [&](cplx lambda) {
    const cplx k = oracle::k_of_lambda(lambda);
    const auto d = oracle::naive_det(n, beta, k);
    return cplx(double(d.real()), double(d.imag()));
  };
  std::vector<double> grid(static_cast<std::size_t>(m + 1) * m);
  auto at = [&](int i, int j) -> double& { return grid[static_cast<std::size_t>(i) * m + (j - 1)]; };
  for (int i = 0; i <= m; ++i)
    for (int j = 1; j <= m; ++j) at(i, j) = std::abs(det_at(cplx(-2.0 + i * dx, j * dy)));

  std::vector<cplx> oracle_zeros;
  for (int i = 1; i < m; ++i) {
    for (int j = 2; j < m; ++j) {
      const double v = at(i, j);
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if ((di || dj) && at(i + di, j + dj) < v) minimum = false;
      if (!minimum || v > 0.05) continue;
      cplx x0(-2.0 + i * dx, j * dy), x1 = x0 + cplx(dx / 4, dy / 4);
      for (int it = 0; it < 30; ++it) {
        const cplx f0 = det_at(x0), f1 = det_at(x1);
        if (f1 == f0) break;
        const cplx x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        x1 = x2;
      }
      if (std::abs(det_at(x1)) < 1e-12) oracle_zeros.push_back(x1);
    }
  }

  const auto s = discrete_spectrum(DiscreteBarrier(n, 1.0));
  EXPECT_EQ(s.disk_multiplicity, 2);
  ASSERT_EQ(s.points.size(), oracle_zeros.size());
  for (const auto& p : s.points) {
    double best = INFINITY;
    for (cplx zo : oracle_zeros) best = std::min(best, std::abs(zo - p.lambda));
    EXPECT_LT(best, 1e-8) << p.lambda;
  }
}

TEST(DiscreteSpectrum, DiskCountAcrossParameters) {
  for (int n : {2, 3, 5, 10, 39, 100})
    for (double h : {0.1, 1.0}) EXPECT_EQ(discrete_spectrum(DiscreteBarrier(n, h)).disk_multiplicity, 2 * n - 2);
}

TEST(DiscreteSpectrum, RejectsNonPositiveTolerance) {
  EXPECT_THROW(discrete_spectrum(DiscreteBarrier(5, 0.1), 0.0), ValidationError);
}

TEST(DiscreteSpectrum, TridiagonalRouteAboveCutoff) {
  const auto s = discrete_spectrum(DiscreteBarrier(200, std::pow(200.0, -2.0 / 3.0)));
  EXPECT_EQ(s.route, DeterminantRoute::tridiagonal);
  EXPECT_EQ(s.disk_multiplicity, 398);
  EXPECT_LE(s.worst_bs_residual, kBsGate);
  EXPECT_EQ(eigenvalues(s).size(), s.points.size());
}
