#include <algorithm>
#include <cmath>
#include <numbers>

#include "barrier/errors.hpp"
#include "barrier/numeric_core.hpp"

namespace barrier {

namespace {

constexpr double kStepCap = std::numbers::pi / 2.0;
constexpr int kMaxDepth = 48;

struct Walker {
  const ComplexMap& f;
  double min_abs = INFINITY;
  double max_abs = 0.0;

  cplx sample(cplx z) {
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("count_zeros: map is not finite on the contour");
    }
    const double a = std::abs(v);
    min_abs = std::min(min_abs, a);
    max_abs = std::max(max_abs, a);
    return v;
  }

  double segment(cplx a, cplx fa, cplx b, cplx fb, int depth) {
    if (fa == 0.0 || fb == 0.0) throw BoundaryProximityError("count_zeros: zero on the contour");
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= kStepCap) return d;
    if (depth >= kMaxDepth) {
      throw BoundaryProximityError("count_zeros: phase refinement did not resolve near the contour");
    }
    const cplx m = 0.5 * (a + b);
    const cplx fm = sample(m);
    return segment(a, fa, m, fm, depth + 1) + segment(m, fm, b, fb, depth + 1);
  }
};

}  // namespace

Rectangle::Rectangle(cplx lower_left, cplx upper_right)
    : lower_left_(lower_left), upper_right_(upper_right) {
  if (!(upper_right.real() > lower_left.real()) || !(upper_right.imag() > lower_left.imag())) {
    throw ValidationError("Rectangle: extents must be strictly positive");
  }
}

bool Rectangle::contains(cplx z) const noexcept {
  return z.real() > lower_left_.real() && z.real() < upper_right_.real() &&
         z.imag() > lower_left_.imag() && z.imag() < upper_right_.imag();
}

int count_zeros(const ComplexMap& f, const Rectangle& region, int samples_per_side) {
  if (samples_per_side < 64) throw ValidationError("count_zeros: samples_per_side must be >= 64");
  const cplx ll = region.lower_left();
  const cplx ur = region.upper_right();
  const cplx corners[5] = {ll, {ur.real(), ll.imag()}, ur, {ll.real(), ur.imag()}, ll};

  Walker w{f};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const cplx a = corners[side];
    const cplx b = corners[side + 1];
    cplx prev_z = a;
    cplx prev_f = w.sample(a);
    for (int s = 1; s <= samples_per_side; ++s) {
      const cplx z = a + (b - a) * (static_cast<double>(s) / samples_per_side);
      const cplx fz = w.sample(z);
      total += w.segment(prev_z, prev_f, z, fz, 0);
      prev_z = z;
      prev_f = fz;
    }
  }
  if (w.min_abs < 1e-12 * w.max_abs) {
    throw BoundaryProximityError("count_zeros: |f| on the contour fell below 1e-12 of its maximum");
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace barrier
