#include <cmath>

#include "barrier/errors.hpp"
#include "barrier/numeric_core.hpp"

namespace barrier {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

NewtonResult newton_refine(const HolomorphicMap& f, cplx seed, double tol, int max_iter) {
  if (!(tol > 0.0)) throw ValidationError("newton_refine: tol must be positive");
  cplx z = seed;
  HolomorphicValue v = f(z);
  if (!finite(v.value) || !finite(v.derivative)) throw NewtonError("non-finite value at seed", z);

  for (int it = 0; it <= max_iter; ++it) {
    const double scale = v.scale > 0.0 ? v.scale : 1.0;
    const double residual = std::abs(v.value) / scale;
    if (residual <= tol) return {z, residual, it};
    if (it == max_iter) break;
    if (std::abs(v.derivative) < 1e-300) throw NewtonError("derivative vanished", z);

    const cplx step = v.value / v.derivative;
    double damping = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, damping *= 0.5) {
      const cplx trial = z - damping * step;
      const HolomorphicValue tv = f(trial);
      if (finite(tv.value) && finite(tv.derivative) && std::abs(tv.value) < std::abs(v.value)) {
        z = trial;
        v = tv;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NewtonError("residual stagnated above tolerance", z);
  }
  throw NewtonError("iteration budget exhausted", z);
}

HolomorphicMap with_numeric_derivative(ComplexMap f, double step) {
  return [f = std::move(f), step](cplx z) {
    const double h = step * std::max(1.0, std::abs(z));
    const cplx v = f(z);
    const cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
    return HolomorphicValue{v, d, std::max(std::abs(v), 1.0)};
  };
}

}  // namespace barrier
