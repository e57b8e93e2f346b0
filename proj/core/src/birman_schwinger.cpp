#include <cmath>
#include <string>
#include <vector>

#include "barrier/errors.hpp"
#include "barrier/jacobi_barrier.hpp"

namespace barrier {

namespace detail {

void check_k(cplx k) {
  const double ak = std::abs(k);
  if (!(ak > 0.0) || !(ak < 1.0)) throw ValidationError("determinant: requires 0 < |k| < 1");
  if (std::abs(k * k - 1.0) <= 1e-14) throw SingularInputError("determinant: |k^2 - 1| too small");
}

cplx dense_det(int n, cplx beta, cplx k) {
  if (n > kDenseDeterminantLimit) {
    throw SizeLimitError("birman_schwinger_det: n = " + std::to_string(n) + " exceeds the dense limit " +
                         std::to_string(kDenseDeterminantLimit));
  }
  const cplx c = k * beta / (k * k - 1.0);
  std::vector<cplx> powers(n);
  powers[0] = 1.0;
  for (int d = 1; d < n; ++d) powers[d] = powers[d - 1] * k;

  std::vector<cplx> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[i * n + j] = c * powers[std::abs(i - j)] + (i == j ? 1.0 : 0.0);
    }
  }

  cplx det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      det = -det;
    }
    const cplx diag = a[col * n + col];
    det *= diag;
    for (int r = col + 1; r < n; ++r) {
      const cplx factor = a[r * n + col] / diag;
      if (factor == 0.0) continue;
      cplx* row = &a[r * n];
      const cplx* prow = &a[col * n];
      for (int j = col + 1; j < n; ++j) row[j] -= factor * prow[j];
    }
  }
  return det;
}

// Q_n(k)^{-1} = tridiag(-k, 1+k^2, -k) / (1 - k^2) with unit corner diagonal,
// det Q_n = (1 - k^2)^{n-1}. Hence det(I + cQ) = det(M) / (1 - k^2) where
// M = tridiag(-k, d_i - k beta, -k).
cplx tridiag_det(int n, cplx beta, cplx k) {
  const cplx k2 = k * k;
  const cplx shift = k * beta;
  auto diag = [&](int i) { return (i == 0 || i == n - 1) ? 1.0 - shift : 1.0 + k2 - shift; };
  cplx prev = 1.0;
  cplx cur = diag(0);
  for (int i = 1; i < n; ++i) {
    const cplx next = diag(i) * cur - k2 * prev;
    prev = cur;
    cur = next;
  }
  return cur / (1.0 - k2);
}

cplx chebyshev_det(int n, cplx beta, cplx k) {
  const cplx xi = 0.5 * (k + 1.0 / k - beta);
  const cplx bracket = chebyshev_U(n, xi) - 2.0 * k * chebyshev_U(n - 1, xi) + k * k * chebyshev_U(n - 2, xi);
  return ipow(k, n) / (1.0 - k * k) * bracket;
}

}  // namespace detail

cplx birman_schwinger_det(int n, cplx beta, cplx k) {
  if (n < 1) throw ValidationError("birman_schwinger_det: n must be positive");
  detail::check_k(k);
  return detail::dense_det(n, beta, k);
}

cplx birman_schwinger_det(const DiscreteBarrier& op, cplx k) {
  return birman_schwinger_det(op.n(), op.beta(), k);
}

cplx tridiagonal_det_form(int n, cplx beta, cplx k) {
  if (n < 2) throw ValidationError("tridiagonal_det_form: n must be at least 2");
  detail::check_k(k);
  return detail::tridiag_det(n, beta, k);
}

cplx chebyshev_det_form(int n, cplx beta, cplx k) {
  if (n < 2) throw ValidationError("chebyshev_det_form: n must be at least 2");
  detail::check_k(k);
  return detail::chebyshev_det(n, beta, k);
}

cplx chebyshev_det_form(const DiscreteBarrier& op, cplx k) {
  return chebyshev_det_form(op.n(), op.beta(), k);
}

DeterminantRoute default_route(int n) noexcept {
  return n <= kDenseRouteMaxN ? DeterminantRoute::dense : DeterminantRoute::tridiagonal;
}

double bs_residual(int n, cplx beta, cplx k, DeterminantRoute route) {
  detail::check_k(k);
  auto det = [&](cplx x) {
    return route == DeterminantRoute::dense ? detail::dense_det(n, beta, x) : detail::tridiag_det(n, beta, x);
  };
  const double eta = 1e-6 * std::abs(k);
  const cplx d0 = det(k);
  const cplx slope = (det(k + eta) - det(k - eta)) / (2.0 * eta);
  if (slope == 0.0) return d0 == 0.0 ? 0.0 : INFINITY;
  return std::abs(d0) / (std::abs(k) * std::abs(slope));
}

}  // namespace barrier
