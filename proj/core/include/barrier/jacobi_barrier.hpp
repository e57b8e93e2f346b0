#pragma once

#include <string_view>
#include <vector>

#include "barrier/numeric_core.hpp"

namespace barrier {

/// T = J0 + i h P_n: free Jacobi operator plus a constant imaginary barrier on sites 1..n.
class DiscreteBarrier {
 public:
  DiscreteBarrier(int n, double h);
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  cplx beta() const noexcept { return {0.0, h_}; }

 private:
  int n_;
  double h_;
};

enum class Branch { minus, plus };

std::string_view to_string(Branch b) noexcept;

struct DiscreteEigenpoint {
  cplx z;
  cplx k;
  cplx lambda;
  Branch branch;
  double bs_residual;
};

enum class DeterminantRoute { dense, tridiagonal };

struct DiscreteSpectrum {
  std::vector<DiscreteEigenpoint> points;  // sorted by Re lambda, then Im lambda
  RootSet minus_roots;
  RootSet plus_roots;
  std::vector<cplx> indeterminate;  // disk roots with ||k| - 1| < 1e-10
  int disk_multiplicity = 0;        // over both branches, |z| < 1 - 1e-8
  double worst_backward_error = 0.0;
  double worst_bs_residual = 0.0;
  DeterminantRoute route = DeterminantRoute::dense;
};

/// Characteristic polynomial of one branch, for general complex beta.
SparsePolynomial char_poly(int n, cplx beta, Branch branch);
SparsePolynomial char_poly(const DiscreteBarrier& op, Branch branch);

/// k as a function of a characteristic root z; the removable singularity at
/// the double roots on the unit circle is resolved by its limit.
cplx k_from_z(cplx z, int n, Branch branch);

/// Strict form of the admissibility constraint |z^{n+1} -+ 1| < |z^n -+ z|, as a ratio.
double admissibility_ratio(cplx z, int n, Branch branch);

inline constexpr int kDenseDeterminantLimit = 2000;
inline constexpr int kDenseRouteMaxN = 160;
inline constexpr double kBsGate = 1e-6;
inline constexpr double kIndeterminateMargin = 1e-10;

/// det(I + (k beta / (k^2 - 1)) Q_n(k)) by pivoted LU, Q_ij = k^|i-j|.
cplx birman_schwinger_det(int n, cplx beta, cplx k);
cplx birman_schwinger_det(const DiscreteBarrier& op, cplx k);

/// Same determinant through the tridiagonal inverse of Q_n(k); O(n).
cplx tridiagonal_det_form(int n, cplx beta, cplx k);

/// (k^n / (1 - k^2)) [U_n(xi) - 2k U_{n-1}(xi) + k^2 U_{n-2}(xi)], xi = (k + 1/k - beta)/2.
cplx chebyshev_det_form(int n, cplx beta, cplx k);
cplx chebyshev_det_form(const DiscreteBarrier& op, cplx k);

/// Normalized residual |D(k)| / (|k| |D'(k)|): the relative Newton distance from k
/// to the nearest determinant zero.
double bs_residual(int n, cplx beta, cplx k, DeterminantRoute route);

DeterminantRoute default_route(int n) noexcept;

DiscreteSpectrum discrete_spectrum(const DiscreteBarrier& op, double tol = 1e-12);

/// Eigenvalues only.
std::vector<cplx> eigenvalues(const DiscreteSpectrum& s);

}  // namespace barrier
