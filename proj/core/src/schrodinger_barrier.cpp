#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "barrier/errors.hpp"
#include "barrier/lt_functionals.hpp"
#include "barrier/schrodinger_barrier.hpp"

namespace barrier {

namespace {

using std::numbers::pi;

constexpr double kDuplicateRadius = 1e-6;
constexpr double kPoleGuard = 1e-14;

cplx rotation() { return std::polar(1.0, -pi / 4.0); }

double family_sign(RootFamily f) { return f == RootFamily::principal ? 1.0 : -1.0; }

HolomorphicMap reduced_map(double h, RootFamily family) {
  const cplx c = family_sign(family) * rotation() * std::sqrt(h);
  return [c, h](cplx mu) {
    const cplx cs = std::cos(mu);
    return HolomorphicValue{mu + c * cs, 1.0 - c * std::sin(mu), std::max(std::abs(mu), std::sqrt(h) * std::abs(cs))};
  };
}

HolomorphicMap char_map(double h) {
  return [h](cplx mu) {
    const cplx ih{0.0, h};
    const cplx cs = std::cos(mu);
    return HolomorphicValue{mu * mu + ih * cs * cs, 2.0 * mu - ih * std::sin(2.0 * mu), char_scale(mu, h)};
  };
}

void check_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("h must be positive and finite");
}

// Roots found twice (pairwise closer than 1e-6) are kept once.
std::vector<ContinuousRoot> deduplicate(std::vector<ContinuousRoot> roots) {
  std::sort(roots.begin(), roots.end(), [](const ContinuousRoot& a, const ContinuousRoot& b) {
    if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
    return a.mu.imag() < b.mu.imag();
  });
  std::vector<ContinuousRoot> out;
  for (const auto& r : roots) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (r.mu.real() - it->mu.real() > kDuplicateRadius) break;
      if (std::abs(r.mu - it->mu) < kDuplicateRadius) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(r);
  }
  return out;
}

RootFamily classify_family(cplx mu, double h) {
  const cplx c = rotation() * std::sqrt(h) * std::cos(mu);
  return std::abs(mu + c) <= std::abs(mu - c) ? RootFamily::principal : RootFamily::companion;
}

long long nearest_index(cplx mu, RootFamily family) {
  if (mu.imag() <= 0.0) return 0;
  const double offset = family == RootFamily::principal ? 7.0 * pi / 4.0 : 3.0 * pi / 4.0;
  return std::max(0LL, std::llround((offset - mu.real()) / (2.0 * pi)));
}

// Splits certified roots into admissible eigenpoints and rejected roots.
void classify(const ContinuousBarrier& op, const std::vector<ContinuousRoot>& roots, double tol,
              ContinuousSpectrum& out) {
  const double h = op.h();
  std::ostringstream problems;
  int bad = 0;
  for (const auto& r : roots) {
    const double res = std::abs(char_residual(r.mu, h)) / char_scale(r.mu, h);
    if (!(res <= tol)) {
      ++bad;
      problems << " [mu=" << r.mu << " residual " << res << "]";
      continue;
    }
    out.worst_residual = std::max(out.worst_residual, res);
    if (!admissible(r.mu)) {
      out.rejected.push_back({r.j, r.family, r.mu, res});
      continue;
    }
    const cplx k = cplx{0.0, 1.0} * r.mu * std::tan(r.mu);
    const cplx lambda = r.mu * r.mu + cplx{0.0, h};
    if (std::abs(lambda - k * k) > 1e-8 * std::abs(lambda)) {
      ++bad;
      problems << " [mu=" << r.mu << " lambda != k^2]";
      continue;
    }
    if (!(lambda.imag() > 0.0) || lambda.imag() > h * (1.0 + 1e-12)) {
      ++bad;
      problems << " [mu=" << r.mu << " lambda=" << lambda << " outside the strip]";
      continue;
    }
    const double defect = eigenfunction_matching(r.mu, h);
    const double defect_scale = std::abs(k * std::cos(r.mu)) + std::abs(r.mu * std::sin(r.mu));
    out.worst_matching_defect = std::max(out.worst_matching_defect, defect / defect_scale);
    out.points.push_back({r.j, r.family, r.mu, k, lambda, res});
  }
  if (bad > 0) {
    throw CertificationError("continuous spectrum: " + std::to_string(bad) + " roots failed certification:" +
                             problems.str());
  }
  std::sort(out.points.begin(), out.points.end(), [](const ContinuousEigenpoint& a, const ContinuousEigenpoint& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
}

// Argument-principle count over `box`, nudging the edges away from zeros that
// sit on the contour. Returns the count and the rectangle actually used.
std::pair<int, Rectangle> count_with_nudge(double h, Rectangle box, int samples) {
  const auto f = [h](cplx mu) { return char_residual(mu, h); };
  for (int attempt = 0;; ++attempt) {
    try {
      return {count_zeros(f, box, samples), box};
    } catch (const BoundaryProximityError&) {
      if (attempt >= 4) throw;
      const cplx nudge{0.037 * (attempt + 1), 0.029 * (attempt + 1)};
      box = Rectangle(box.lower_left() - nudge, box.upper_right() + nudge);
    }
  }
}

int inside(const std::vector<ContinuousRoot>& roots, const Rectangle& box) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](const auto& r) { return box.contains(r.mu); }));
}

}  // namespace

ContinuousBarrier::ContinuousBarrier(double h) : h_(h) { check_h(h); }

std::string_view to_string(RootFamily f) noexcept { return f == RootFamily::principal ? "principal" : "companion"; }

SeedWindow::SeedWindow(double alpha, double beta, double gamma, WindowRule rule)
    : alpha_(alpha), beta_(beta), gamma_(gamma), rule_(rule) {
  if (!(0.0 < gamma && gamma < 2.0 * alpha && 2.0 * alpha < 2.0 * beta && 2.0 * beta < 1.0)) {
    throw ValidationError("SeedWindow: requires 0 < gamma < 2 alpha < 2 beta < 1");
  }
}

cplx char_residual(cplx mu, double h) {
  check_h(h);
  const cplx cs = std::cos(mu);
  return mu * mu + cplx{0.0, h} * cs * cs;
}

double char_scale(cplx mu, double h) { return std::max(std::norm(mu), h * std::norm(std::cos(mu))); }

cplx reduced_residual(cplx mu, double h, RootFamily family) {
  check_h(h);
  return mu + family_sign(family) * rotation() * std::sqrt(h) * std::cos(mu);
}

bool admissible(cplx mu) {
  const cplx cs = std::cos(mu);
  if (std::abs(cs) <= kPoleGuard) throw SingularInputError("admissible: mu is too close to a pole of tan");
  const cplx product = mu * std::sin(mu) / cs;
  const double a = mu.real();
  const double b = mu.imag();
  // Re(mu tan mu) = (a sin 2a - b sinh 2b) / (cos 2a + cosh 2b) and the denominator is positive.
  const double lhs = a * std::sin(2.0 * a);
  const double rhs = b * std::sinh(2.0 * b);
  const double closed = lhs - rhs;
  const bool direct_positive = product.real() > 0.0;
  const bool closed_positive = closed > 0.0;
  if (direct_positive != closed_positive && std::abs(product.real()) > 1e-12 * std::abs(product) &&
      std::abs(closed) > 1e-12 * (std::abs(lhs) + std::abs(rhs))) {
    std::ostringstream msg;
    msg << "admissible: direct and closed forms disagree at mu=" << mu;
    throw CertificationError(msg.str());
  }
  return closed_positive;
}

cplx seed_mu(long long j, double h, RootFamily family) {
  if (j < 1) throw ValidationError("seed_mu: j must be positive");
  check_h(h);
  const double m = family == RootFamily::principal ? 8.0 * j - 7.0 : 8.0 * j - 3.0;
  return {-(pi / 4.0) * m, std::log(pi * m / (2.0 * std::sqrt(h)))};
}

JRange window_j_range(double h, const SeedWindow& w) {
  check_h(h);
  return {static_cast<long long>(std::ceil(std::pow(h, w.alpha() + 0.5))),
          static_cast<long long>(std::floor(std::pow(h, w.beta() + 0.5)))};
}

JRange band_j_range(double h, const SeedWindow& w) {
  check_h(h);
  // alpha log h <= log(pi (8j - 7) / (2 sqrt h)) <= beta log h
  auto index = [h](double exponent) { return (2.0 * std::pow(h, exponent + 0.5) / pi + 7.0) / 8.0; };
  return {std::max(1LL, static_cast<long long>(std::ceil(index(w.alpha())))),
          static_cast<long long>(std::floor(index(w.beta())))};
}

JRange seed_j_range(double h, const SeedWindow& w) {
  return w.rule() == WindowRule::power_law ? window_j_range(h, w) : band_j_range(h, w);
}

ContinuousSpectrum continuous_spectrum(const ContinuousBarrier& op, const SeedWindow& w, double tol) {
  if (!(tol > 0.0)) throw ValidationError("continuous_spectrum: tol must be positive");
  const double h = op.h();
  ContinuousSpectrum out;
  out.range = seed_j_range(h, w);
  if (out.range.empty()) {
    throw ValidationError("continuous_spectrum: seed window is empty for h = " + std::to_string(h));
  }

  std::vector<ContinuousRoot> found;
  for (RootFamily family : {RootFamily::principal, RootFamily::companion}) {
    const HolomorphicMap f = reduced_map(h, family);
    for (long long j = out.range.j_min; j <= out.range.j_max; ++j) {
      try {
        const NewtonResult r = newton_refine(f, seed_mu(j, h, family), tol / 4.0, 100);
        if (!(r.root.real() < -1e-8)) {
          ++out.newton_failures;
          continue;
        }
        found.push_back({j, family, r.root, r.residual});
      } catch (const NewtonError&) {
        ++out.newton_failures;
      }
    }
  }
  const double attempts = 2.0 * static_cast<double>(out.range.size());
  if (out.newton_failures > 0.01 * attempts) {
    throw ConvergenceError("continuous_spectrum: " + std::to_string(out.newton_failures) + " of " +
                               std::to_string(static_cast<long long>(attempts)) + " seeds failed to converge",
                           static_cast<double>(out.newton_failures) / attempts);
  }
  found = deduplicate(std::move(found));
  out.distinct_roots = static_cast<int>(found.size());
  classify(op, found, tol, out);

  // Count window: edges halfway between neighbouring roots in Re, above the
  // real axis so that the lower root family and the mirror images stay out.
  double im_lo = INFINITY;
  double im_hi = -INFINITY;
  for (const auto& r : found) {
    im_lo = std::min(im_lo, r.mu.imag());
    im_hi = std::max(im_hi, r.mu.imag());
  }
  const double margin = std::min(0.75, std::max(im_lo, 0.05) / 2.0);
  const double lo_j = static_cast<double>(out.range.j_min);
  const double hi_j = static_cast<double>(out.range.j_max);
  const Rectangle box({pi / 4.0 - 2.0 * pi * hi_j, im_lo - margin},
                      {std::min(9.0 * pi / 4.0 - 2.0 * pi * lo_j, -0.1), im_hi + margin});
  const int samples = static_cast<int>(std::max<long long>(256, 8 * out.range.size()));
  auto [count, used] = count_with_nudge(h, box, samples);
  out.zero_count = count;
  out.count_window = used;
  const int expected = inside(found, used);
  out.roots_in_window = expected;
  if (count != expected) {
    throw CertificationError("continuous_spectrum: argument principle counts " + std::to_string(count) +
                             " zeros in the window but " + std::to_string(expected) + " distinct roots were found");
  }
  return out;
}

ContinuousSpectrum full_spectrum(const ContinuousBarrier& op, double tol, double grid_step) {
  if (!(tol > 0.0)) throw ValidationError("full_spectrum: tol must be positive");
  if (!(grid_step > 0.0)) throw ValidationError("full_spectrum: grid_step must be positive");
  const double h = op.h();
  const double sqrt_h = std::sqrt(h);

  // Upper roots have Im mu ~ log(2|Re mu|/sqrt h) and Im lambda = h + 2 Re mu Im mu,
  // so the strip is left once |Re mu| log(2|Re mu|/sqrt h) exceeds h/2.
  double reach = std::max(sqrt_h, 1.0);
  for (int it = 0; it < 200; ++it) {
    const double g = std::max(std::log(2.0 * reach / sqrt_h), 0.5);
    const double next = 0.5 * h / g;
    if (std::abs(next - reach) < 1e-9 * reach) break;
    reach = 0.5 * (reach + next);
  }
  const double re_left = -(1.15 * reach + 3.0 * pi);
  const double im_half = std::max(std::log(2.0 * reach / sqrt_h), 0.0) + 1.0;

  const HolomorphicMap f = char_map(h);
  for (int refinement = 0; refinement < 3; ++refinement) {
    const double step = grid_step / (1 << refinement);
    std::vector<ContinuousRoot> found;
    for (double re = re_left; re <= -0.1; re += step) {
      for (double im = -im_half; im <= im_half; im += step) {
        try {
          const NewtonResult r = newton_refine(f, {re, im}, tol / 4.0, 60);
          if (r.root.real() < -1e-8 && std::abs(r.root.imag()) < im_half + 5.0) {
            found.push_back({0, RootFamily::principal, r.root, r.residual});
          }
        } catch (const NewtonError&) {
        }
      }
    }
    found = deduplicate(std::move(found));
    const Rectangle box({re_left, -im_half}, {-0.1, im_half});
    auto [count, used] = count_with_nudge(h, box, 4096);
    std::erase_if(found, [&](const ContinuousRoot& r) { return !used.contains(r.mu); });
    if (count != static_cast<int>(found.size())) continue;

    for (auto& r : found) {
      r.family = classify_family(r.mu, h);
      r.j = nearest_index(r.mu, r.family);
    }
    ContinuousSpectrum out;
    out.range = {1, 0};
    out.distinct_roots = static_cast<int>(found.size());
    out.zero_count = count;
    out.roots_in_window = static_cast<int>(found.size());
    out.count_window = used;
    classify(op, found, tol, out);
    return out;
  }
  throw CertificationError("full_spectrum: grid-seeded Newton did not recover every zero counted by the "
                           "argument principle");
}

double eigenfunction_matching(cplx mu, double h) {
  check_h(h);
  const cplx cs = std::cos(mu);
  if (std::abs(cs) <= kPoleGuard) throw SingularInputError("eigenfunction_matching: cos mu vanishes");
  const cplx k = cplx{0.0, 1.0} * mu * std::sin(mu) / cs;
  return std::abs(cplx{0.0, 1.0} * k * cs + mu * std::sin(mu));
}

double tilde_potential_norm_pp(double h, double p) {
  check_h(h);
  return 2.0 * std::pow(h, 1.0 - p);
}

ScalingPair rescale_to_tilde(const ContinuousBarrier& op, std::span<const ContinuousEigenpoint> spectrum, double p,
                             double sigma) {
  if (!(p >= 1.0)) throw ValidationError("rescale_to_tilde: p must be at least 1");
  if (!(sigma >= 0.5)) throw ValidationError("rescale_to_tilde: sigma must be at least 1/2");
  const double h = op.h();
  const double h2 = h * h;
  double tilde_sum = 0.0;
  double direct_sum = 0.0;
  for (const auto& e : spectrum) {
    if (e.lambda == 0.0) throw SingularInputError("rescale_to_tilde: lambda = 0 in spectrum");
    const cplx scaled = e.lambda / h2;
    tilde_sum += std::pow(dist_to_halfline(scaled), p) / std::pow(std::abs(scaled), sigma);
    direct_sum += std::pow(e.lambda.imag(), p) / std::pow(std::abs(e.lambda), sigma);
  }
  return {tilde_sum / tilde_potential_norm_pp(h, p), 0.5 * std::pow(h, 2.0 * sigma - p - 1.0) * direct_sum};
}

std::vector<cplx> eigenvalues(const ContinuousSpectrum& s) {
  std::vector<cplx> out;
  out.reserve(s.points.size());
  for (const auto& p : s.points) out.push_back(p.lambda);
  return out;
}

}  // namespace barrier
