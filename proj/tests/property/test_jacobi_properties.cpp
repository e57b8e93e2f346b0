#include <gtest/gtest.h>

#include <algorithm>

#include "barrier/jacobi_barrier.hpp"
#include "generators.hpp"

using namespace barrier;

namespace {

double nearest(const RootSet& set, cplx z) {
  double best = INFINITY;
  for (const auto& r : set.roots) best = std::min(best, std::abs(r.value - z));
  return best;
}

int multiplicity_at(const RootSet& set, cplx z) {
  int m = 0;
  for (const auto& r : set.roots)
    if (std::abs(r.value - z) < 1e-6) m += r.multiplicity;
  return m;
}

}  // namespace

class SymmetrySuite : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(SymmetrySuite, ReciprocityReflectionAndCircleRoots) {
  const auto [n, h] = GetParam();
  const DiscreteBarrier op(n, h);
  const auto s = discrete_spectrum(op);
  for (Branch b : {Branch::minus, Branch::plus}) {
    const auto p = char_poly(op, b);
    for (int d = 0; d <= 2 * n; ++d) EXPECT_EQ(p.coefficient(d), p.coefficient(2 * n - d)) << d;
    const RootSet& set = b == Branch::minus ? s.minus_roots : s.plus_roots;
    for (const auto& r : set.roots) EXPECT_LT(nearest(set, 1.0 / r.value), 1e-8) << r.value;
  }
  const auto reflect = [](cplx z) { return -std::conj(z); };
  if (n % 2 == 1) {
    for (const RootSet* set : {&s.minus_roots, &s.plus_roots})
      for (const auto& r : set->roots) EXPECT_LT(nearest(*set, reflect(r.value)), 1e-8);
    EXPECT_EQ(multiplicity_at(s.minus_roots, 1.0), 2);
    EXPECT_EQ(multiplicity_at(s.minus_roots, -1.0), 2);
    for (const auto& r : s.plus_roots.roots) EXPECT_GT(std::abs(std::abs(r.value) - 1.0), 1e-8);
  } else {
    for (const auto& r : s.minus_roots.roots) EXPECT_LT(nearest(s.plus_roots, reflect(r.value)), 1e-8);
    EXPECT_EQ(multiplicity_at(s.minus_roots, 1.0), 2);
    EXPECT_EQ(multiplicity_at(s.plus_roots, -1.0), 2);
  }
  EXPECT_EQ(s.disk_multiplicity, 2 * n - 2);
}

INSTANTIATE_TEST_SUITE_P(SmallBarriers, SymmetrySuite,
                         ::testing::Combine(::testing::Range(2, 13), ::testing::Values(0.1, 1.0)));

TEST(JacobiProperties, AdmissibilityTestsAgreeOnDiskRoots) {
  gen::Source src(4);
  for (int t = 0; t < 12; ++t) {
    const DiscreteBarrier op(src.integer(2, 60), src.uniform(0.02, 2.0));
    const auto s = discrete_spectrum(op);
    for (Branch b : {Branch::minus, Branch::plus}) {
      for (const auto& r : (b == Branch::minus ? s.minus_roots : s.plus_roots).roots) {
        const cplx z = r.value;
        if (std::abs(z) >= 1.0 - 1e-8 || std::abs(z) < 1e-12) continue;
        const double ratio = admissibility_ratio(z, op.n(), b);
        const double kk = std::abs(k_from_z(z, op.n(), b));
        if (std::abs(kk - 1.0) < 1e-10) continue;
        EXPECT_EQ(ratio < 1.0, kk < 1.0) << z;
      }
    }
  }
}

TEST(JacobiProperties, EigenvaluesRespectEnclosureAndGate) {
  gen::Source src(5);
  for (int t = 0; t < 12; ++t) {
    const DiscreteBarrier op(src.integer(2, 120), src.uniform(0.01, 3.0));
    for (const auto& p : discrete_spectrum(op).points) {
      EXPECT_LE(std::abs(p.lambda.real()), 2.0);
      EXPECT_GT(p.lambda.imag(), 0.0);
      EXPECT_LE(p.lambda.imag(), op.h() + 1e-12);
      EXPECT_LE(p.bs_residual, kBsGate);
      EXPECT_LT(std::abs(p.k), 1.0);
    }
  }
}

TEST(JacobiProperties, CircleRootsAreNeverAdmissible) {
  for (int n = 2; n <= 50; ++n) {
    EXPECT_GT(std::abs(k_from_z(1.0, n, Branch::minus)), 1.0);
    EXPECT_GT(std::abs(k_from_z(-1.0, n, n % 2 ? Branch::minus : Branch::plus)), 1.0);
  }
}

TEST(JacobiProperties, ChebyshevMatchesDenseAtRandomAdmissibleK) {
  gen::Source src(6);
  for (int t = 0; t < 100; ++t) {
    const int n = src.integer(2, 80);
    const cplx beta{0.0, src.uniform(0.01, 2.0)};
    const cplx k = src.polar(0.05, 0.97);
    const cplx d = birman_schwinger_det(n, beta, k);
    EXPECT_LT(std::abs(chebyshev_det_form(n, beta, k) - d), 1e-8 * std::abs(d)) << n << k;
  }
}
