#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <string>

#include "barrier/errors.hpp"
#include "barrier/jacobi_barrier.hpp"

namespace barrier {

namespace {

constexpr double kDiskMargin = 1e-8;
constexpr double kCircleExclusion = 1e-6;

double sign_of(Branch b) { return b == Branch::minus ? -1.0 : 1.0; }

RootSet solve_branch(const DiscreteBarrier& op, Branch branch, double tol) {
  const double n = op.n();
  SolveOptions options;
  options.initial_radius = std::max(0.3, 1.0 - (2.0 / 3.0) * std::log(n) / n);
  return solve_polynomial(char_poly(op, branch), tol, options);
}

}  // namespace

DiscreteBarrier::DiscreteBarrier(int n, double h) : n_(n), h_(h) {
  if (n < 2) throw ValidationError("DiscreteBarrier: n must be at least 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("DiscreteBarrier: h must be positive and finite");
}

std::string_view to_string(Branch b) noexcept { return b == Branch::minus ? "minus" : "plus"; }

SparsePolynomial char_poly(int n, cplx beta, Branch branch) {
  if (n < 2) throw ValidationError("char_poly: n must be at least 2");
  const double s = sign_of(branch);
  return SparsePolynomial({{2 * n, beta},
                           {n + 2, s},
                           {n + 1, s * beta},
                           {n, -2.0 * s},
                           {n - 1, s * beta},
                           {n - 2, s},
                           {0, beta}});
}

SparsePolynomial char_poly(const DiscreteBarrier& op, Branch branch) {
  return char_poly(op.n(), op.beta(), branch);
}

cplx k_from_z(cplx z, int n, Branch branch) {
  if (n < 2) throw ValidationError("k_from_z: n must be at least 2");
  const double s = sign_of(branch);
  // The denominator z^n + s z vanishes at z = 1 (minus) and at z = -1 when
  // (-1)^(n-1) = -s; there the numerator vanishes too.
  for (double point : {1.0, -1.0}) {
    const bool singular = std::pow(point, n) + s * point == 0.0;
    if (singular && std::abs(z - point) < 1e-8) {
      return (n + 1.0) * ipow(z, n) / (static_cast<double>(n) * ipow(z, n - 1) + s);
    }
  }
  const cplx den = ipow(z, n) + s * z;
  if (std::abs(den) <= 1e-14) throw SingularInputError("k_from_z: denominator vanishes away from +-1");
  return (ipow(z, n + 1) + s) / den;
}

double admissibility_ratio(cplx z, int n, Branch branch) {
  const double s = sign_of(branch);
  return std::abs(ipow(z, n + 1) + s) / std::abs(ipow(z, n) + s * z);
}

DiscreteSpectrum discrete_spectrum(const DiscreteBarrier& op, double tol) {
  if (!(tol > 0.0)) throw ValidationError("discrete_spectrum: tol must be positive");

  auto minus = std::async(std::launch::async, solve_branch, op, Branch::minus, tol);
  auto plus = std::async(std::launch::async, solve_branch, op, Branch::plus, tol);

  DiscreteSpectrum out;
  out.minus_roots = minus.get();
  out.plus_roots = plus.get();
  out.route = default_route(op.n());
  out.worst_backward_error =
      std::max(out.minus_roots.certified_backward_error, out.plus_roots.certified_backward_error);

  std::ostringstream oracle_failures;
  int failures = 0;
  const double h = op.h();
  const cplx ih{0.0, h};

  for (Branch branch : {Branch::minus, Branch::plus}) {
    const RootSet& roots = branch == Branch::minus ? out.minus_roots : out.plus_roots;
    for (const Root& r : roots.roots) {
      const cplx z = r.value;
      if (std::abs(z) >= 1.0 - kDiskMargin) continue;
      out.disk_multiplicity += r.multiplicity;
      if (z.imag() <= 1e-10) continue;
      if (std::abs(z - 1.0) < kCircleExclusion || std::abs(z + 1.0) < kCircleExclusion) continue;

      const cplx k = k_from_z(z, op.n(), branch);
      const double ak = std::abs(k);
      if (std::abs(ak - 1.0) < kIndeterminateMargin) {
        out.indeterminate.push_back(z);
        continue;
      }
      const bool by_k = ak < 1.0;
      const bool by_inequality = admissibility_ratio(z, op.n(), branch) < 1.0;
      if (by_k != by_inequality) {
        ++failures;
        oracle_failures << " [" << to_string(branch) << " z=" << z << ": |k| test and inequality disagree]";
        continue;
      }
      if (!by_k) continue;

      const cplx lambda = ih + z + 1.0 / z;
      const cplx lambda_k = k + 1.0 / k;
      if (std::abs(lambda - lambda_k) > 1e-8 * std::max(1.0, std::abs(lambda))) {
        ++failures;
        oracle_failures << " [" << to_string(branch) << " z=" << z << ": lambda mismatch "
                        << std::abs(lambda - lambda_k) << "]";
        continue;
      }
      if (std::abs(lambda.real()) > 2.0 + 1e-9 || !(lambda.imag() > 0.0) || lambda.imag() > h * (1.0 + 1e-9)) {
        ++failures;
        oracle_failures << " [" << to_string(branch) << " z=" << z << ": lambda=" << lambda
                        << " outside the enclosing rectangle]";
        continue;
      }
      const double residual = bs_residual(op.n(), op.beta(), k, out.route);
      if (!(residual <= kBsGate)) {
        ++failures;
        oracle_failures << " [" << to_string(branch) << " z=" << z << ": determinant residual " << residual << "]";
        continue;
      }
      out.worst_bs_residual = std::max(out.worst_bs_residual, residual);
      out.points.push_back({z, k, lambda, branch, residual});
    }
  }
  if (failures > 0) {
    throw CertificationError("discrete_spectrum(n=" + std::to_string(op.n()) + ", h=" + std::to_string(h) +
                             "): " + std::to_string(failures) + " oracle disagreements:" + oracle_failures.str());
  }

  std::sort(out.points.begin(), out.points.end(), [](const DiscreteEigenpoint& a, const DiscreteEigenpoint& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return out;
}

std::vector<cplx> eigenvalues(const DiscreteSpectrum& s) {
  std::vector<cplx> out;
  out.reserve(s.points.size());
  for (const auto& p : s.points) out.push_back(p.lambda);
  return out;
}

}  // namespace barrier
