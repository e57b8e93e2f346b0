#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "barrier/errors.hpp"
#include "barrier/numeric_core.hpp"

namespace barrier {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Reversed evaluation at w = 1/z: q(w) = sum c_d w^(D-d), q'(w) and the
// magnitude sum, all bounded for |w| <= 1.
struct Reversed {
  cplx q;
  cplx dq;
  double magnitude;
};

Reversed evaluate_reversed(const SparsePolynomial& p, cplx w) {
  const int top = p.degree();
  Reversed r{0.0, 0.0, 0.0};
  const double aw = std::abs(w);
  for (const auto& t : p.terms()) {
    const int e = top - t.degree;
    const cplx wp = ipow(w, e);
    r.q += t.coefficient * wp;
    r.magnitude += std::abs(t.coefficient) * std::pow(aw, e);
    if (e > 0) r.dq += static_cast<double>(e) * t.coefficient * ipow(w, e - 1);
  }
  return r;
}

// Newton correction p/p' computed without overflow on either side of the circle.
cplx newton_ratio(const SparsePolynomial& p, cplx z) {
  if (std::abs(z) <= 1.0) {
    const auto [v, d] = evaluate(p, z);
    if (v == 0.0) return 0.0;
    return v / d;
  }
  const cplx w = 1.0 / z;
  const auto r = evaluate_reversed(p, w);
  if (r.q == 0.0) return 0.0;
  // p'/p = (D - w q'/q) / z
  const cplx log_deriv = (static_cast<double>(p.degree()) - w * r.dq / r.q) / z;
  return 1.0 / log_deriv;
}

SparsePolynomial shift_down(const SparsePolynomial& p, int by) {
  std::vector<Term> terms;
  terms.reserve(p.terms().size());
  for (const auto& t : p.terms()) terms.push_back({t.degree - by, t.coefficient});
  return SparsePolynomial(std::move(terms));
}

std::vector<cplx> aberth(const SparsePolynomial& p, double radius, double stop, int max_iter,
                         int& iterations) {
  const int deg = p.degree();
  std::vector<cplx> z(deg);
  for (int i = 0; i < deg; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / deg + 0.4;
    z[i] = std::polar(radius, angle);
  }
  std::vector<char> frozen(deg, 0);
  int active = deg;
  iterations = 0;
  while (active > 0 && iterations < max_iter) {
    ++iterations;
    for (int i = 0; i < deg; ++i) {
      if (frozen[i]) continue;
      const cplx ratio = newton_ratio(p, z[i]);
      if (ratio == 0.0) {
        frozen[i] = 1;
        --active;
        continue;
      }
      cplx repulsion = 0.0;
      for (int j = 0; j < deg; ++j) {
        if (j == i) continue;
        const cplx diff = z[i] - z[j];
        if (diff != 0.0) repulsion += 1.0 / diff;
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[i] -= step;
      if (backward_error(p, z[i]) <= stop || std::abs(step) <= 2.0 * kEps * std::abs(z[i])) {
        frozen[i] = 1;
        --active;
      }
    }
  }
  return z;
}

// A root of multiplicity m is a simple root of p^(m-1); the cluster mean is
// only accurate to about eps^(1/m), Newton on the derivative restores it.
cplx polish_cluster(const SparsePolynomial& p, cplx centre, int multiplicity, double radius) {
  SparsePolynomial d = p;
  for (int k = 1; k < multiplicity; ++k) d = d.derivative();
  cplx z = centre;
  for (int it = 0; it < 8; ++it) {
    const auto [v, dv] = evaluate(d, z);
    if (v == 0.0 || dv == 0.0) break;
    const cplx step = v / dv;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    z -= step;
    if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(z))) break;
  }
  return std::abs(z - centre) <= radius * std::max(1.0, std::abs(centre)) ? z : centre;
}

}  // namespace

cplx ipow(cplx z, int d) {
  if (d < 0) return 1.0 / ipow(z, -d);
  cplx result = 1.0;
  cplx base = z;
  while (d > 0) {
    if (d & 1) result *= base;
    base *= base;
    d >>= 1;
  }
  return result;
}

SparsePolynomial::SparsePolynomial(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.degree < b.degree; });
  for (const auto& t : terms) {
    if (t.degree < 0) throw ValidationError("negative degree in polynomial term");
    if (!terms_.empty() && terms_.back().degree == t.degree) {
      terms_.back().coefficient += t.coefficient;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coefficient == 0.0; });
}

SparsePolynomial SparsePolynomial::from_dense(std::span<const cplx> ascending) {
  std::vector<Term> terms;
  for (std::size_t d = 0; d < ascending.size(); ++d) {
    if (ascending[d] != 0.0) terms.push_back({static_cast<int>(d), ascending[d]});
  }
  return SparsePolynomial(std::move(terms));
}

cplx SparsePolynomial::coefficient(int degree) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), degree,
                             [](const Term& t, int d) { return t.degree < d; });
  if (it != terms_.end() && it->degree == degree) return it->coefficient;
  return 0.0;
}

SparsePolynomial SparsePolynomial::derivative() const {
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    if (t.degree > 0) terms.push_back({t.degree - 1, static_cast<double>(t.degree) * t.coefficient});
  }
  return SparsePolynomial(std::move(terms));
}

int RootSet::total_multiplicity() const {
  return std::accumulate(roots.begin(), roots.end(), 0,
                         [](int acc, const Root& r) { return acc + r.multiplicity; });
}

PolyValue evaluate(const SparsePolynomial& p, cplx z) {
  PolyValue out{0.0, 0.0};
  for (const auto& t : p.terms()) {
    if (t.degree == 0) {
      out.value += t.coefficient;
      continue;
    }
    const cplx below = ipow(z, t.degree - 1);
    out.value += t.coefficient * below * z;
    out.derivative += static_cast<double>(t.degree) * t.coefficient * below;
  }
  return out;
}

double backward_error(const SparsePolynomial& p, cplx z) {
  if (std::abs(z) > 1.0) {
    const auto r = evaluate_reversed(p, 1.0 / z);
    return r.magnitude > 0.0 ? std::abs(r.q) / r.magnitude : 0.0;
  }
  const double az = std::abs(z);
  double magnitude = 0.0;
  for (const auto& t : p.terms()) magnitude += std::abs(t.coefficient) * std::pow(az, t.degree);
  return magnitude > 0.0 ? std::abs(evaluate(p, z).value) / magnitude : 0.0;
}

RootSet solve_polynomial(const SparsePolynomial& p, double tol, const SolveOptions& options) {
  if (!(tol > 0.0)) throw ValidationError("solve_polynomial: tol must be positive");
  if (p.degree() < 1) throw ValidationError("solve_polynomial: degree must be at least 1");

  RootSet out;
  const int zeros_at_origin = p.lowest_degree();
  const SparsePolynomial q = zeros_at_origin > 0 ? shift_down(p, zeros_at_origin) : p;
  if (zeros_at_origin > 0) out.roots.push_back({0.0, zeros_at_origin});

  std::vector<cplx> raw;
  if (q.degree() == 1) {
    raw.push_back(-q.coefficient(0) / q.coefficient(1));
  } else if (q.degree() > 1) {
    double radius = options.initial_radius.value_or(0.0);
    if (!(radius > 0.0)) {
      radius = std::pow(std::abs(q.coefficient(0)) / std::abs(q.coefficient(q.degree())),
                        1.0 / q.degree());
    }
    const double stop = 8.0 * kEps * static_cast<double>(q.terms().size());
    raw = aberth(q, radius, stop, options.max_iterations, out.iterations);
  }

  double worst = 0.0;
  for (const auto& r : raw) {
    const double be = backward_error(q, r);
    if (!std::isfinite(be)) {
      throw ConvergenceError("solve_polynomial: non-finite iterate", std::numeric_limits<double>::infinity());
    }
    worst = std::max(worst, be);
  }
  if (worst > tol) {
    throw ConvergenceError("solve_polynomial: backward error " + std::to_string(worst) +
                               " exceeds tolerance after " + std::to_string(out.iterations) +
                               " iterations",
                           worst);
  }
  out.certified_backward_error = worst;

  // binary64 resolves a double root only to about sqrt(eps), so the merge
  // radius scales with sqrt(tol) rather than tol itself.
  const double merge = options.cluster_radius.value_or(10.0 * std::sqrt(tol));
  const std::size_t m = raw.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double scale = std::max(1.0, std::abs(raw[i]));
      if (std::abs(raw[i] - raw[j]) < merge * scale) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t i = 0; i < m; ++i) groups[find(i)].push_back(i);
  for (const auto& g : groups) {
    if (g.empty()) continue;
    cplx centre = 0.0;
    for (auto i : g) centre += raw[i];
    centre /= static_cast<double>(g.size());
    if (g.size() > 1) centre = polish_cluster(q, centre, static_cast<int>(g.size()), merge);
    out.roots.push_back({centre, static_cast<int>(g.size())});
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

}  // namespace barrier
