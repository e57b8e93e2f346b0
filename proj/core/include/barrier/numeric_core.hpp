#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace barrier {

using cplx = std::complex<double>;

struct Term {
  int degree;
  cplx coefficient;
};

/// Polynomial stored as sorted (degree, coefficient) pairs. Duplicate degrees
/// are summed and zero coefficients dropped on construction.
class SparsePolynomial {
 public:
  SparsePolynomial() = default;
  explicit SparsePolynomial(std::vector<Term> terms);

  /// Coefficients c_0, c_1, ... in ascending degree.
  static SparsePolynomial from_dense(std::span<const cplx> ascending);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  int degree() const noexcept { return terms_.empty() ? -1 : terms_.back().degree; }
  int lowest_degree() const noexcept { return terms_.empty() ? -1 : terms_.front().degree; }
  cplx coefficient(int degree) const;
  SparsePolynomial derivative() const;

 private:
  std::vector<Term> terms_;
};

struct PolyValue {
  cplx value;
  cplx derivative;
};

/// z^d by binary exponentiation.
cplx ipow(cplx z, int d);

PolyValue evaluate(const SparsePolynomial& p, cplx z);

/// |p(z)| / sum |c_d| |z|^d, evaluated in reversed form when |z| > 1.
double backward_error(const SparsePolynomial& p, cplx z);

struct Root {
  cplx value;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  double certified_backward_error = 0.0;
  int iterations = 0;

  int total_multiplicity() const;
};

struct SolveOptions {
  /// Radius of the initial circle; defaults to the geometric mean root modulus.
  std::optional<double> initial_radius;
  /// Cluster merge distance; defaults to 10*sqrt(tol), see merge note in polynomial.cpp.
  std::optional<double> cluster_radius;
  int max_iterations = 600;
};

/// All roots of p via Aberth-Ehrlich simultaneous iteration.
RootSet solve_polynomial(const SparsePolynomial& p, double tol, const SolveOptions& options = {});

struct HolomorphicValue {
  cplx value;
  cplx derivative;
  double scale;  // magnitude of the largest additive term at the point
};

using HolomorphicMap = std::function<HolomorphicValue(cplx)>;
using ComplexMap = std::function<cplx(cplx)>;

struct NewtonResult {
  cplx root;
  double residual = 0.0;  // |f| / scale at root
  int iterations = 0;
};

/// Damped Newton. Throws NewtonError on divergence or a vanishing derivative.
NewtonResult newton_refine(const HolomorphicMap& f, cplx seed, double tol, int max_iter = 100);

/// Wraps a value-only map with a central-difference derivative and scale |f|.
HolomorphicMap with_numeric_derivative(ComplexMap f, double step = 1e-7);

cplx chebyshev_U(int n, cplx xi);

class Rectangle {
 public:
  Rectangle(cplx lower_left, cplx upper_right);
  cplx lower_left() const noexcept { return lower_left_; }
  cplx upper_right() const noexcept { return upper_right_; }
  bool contains(cplx z) const noexcept;

 private:
  cplx lower_left_;
  cplx upper_right_;
};

/// Winding number of f around the rectangle boundary (argument principle).
int count_zeros(const ComplexMap& f, const Rectangle& region, int samples_per_side = 256);

}  // namespace barrier
