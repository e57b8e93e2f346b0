#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "barrier/numeric_core.hpp"

namespace barrier {

/// H = -d^2/dx^2 + i h chi_[-1,1].
class ContinuousBarrier {
 public:
  explicit ContinuousBarrier(double h);
  double h() const noexcept { return h_; }

 private:
  double h_;
};

/// principal: mu + e^{-i pi/4} sqrt(h) cos mu = 0; companion: the opposite sign.
/// Both factors of mu^2 + i h cos^2 mu.
enum class RootFamily { principal, companion };

std::string_view to_string(RootFamily f) noexcept;

/// power_law: j in [h^{alpha+1/2}, h^{beta+1/2}]
/// imag_band: j such that the seed satisfies alpha log h <= Im mu <= beta log h
enum class WindowRule { power_law, imag_band };

class SeedWindow {
 public:
  SeedWindow() = default;
  SeedWindow(double alpha, double beta, double gamma, WindowRule rule = WindowRule::imag_band);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  WindowRule rule() const noexcept { return rule_; }

 private:
  double alpha_ = 0.15;
  double beta_ = 0.40;
  double gamma_ = 0.25;
  WindowRule rule_ = WindowRule::imag_band;
};

struct JRange {
  long long j_min = 1;
  long long j_max = 0;
  bool empty() const noexcept { return j_min > j_max; }
  long long size() const noexcept { return empty() ? 0 : j_max - j_min + 1; }
};

struct ContinuousEigenpoint {
  long long j = 0;  // seed index; 0 for grid-seeded roots
  RootFamily family = RootFamily::principal;
  cplx mu;
  cplx k;
  cplx lambda;
  double residual = 0.0;  // |mu^2 + i h cos^2 mu| / max(|mu|^2, h |cos mu|^2)
};

struct ContinuousRoot {
  long long j = 0;
  RootFamily family = RootFamily::principal;
  cplx mu;
  double residual = 0.0;
};

struct ContinuousSpectrum {
  std::vector<ContinuousEigenpoint> points;  // admissible, sorted by Re lambda
  std::vector<ContinuousRoot> rejected;      // roots failing Re(mu tan mu) > 0
  JRange range;
  std::optional<Rectangle> count_window;
  int zero_count = 0;
  int distinct_roots = 0;
  int roots_in_window = 0;  // distinct roots inside count_window
  int newton_failures = 0;
  double worst_residual = 0.0;
  double worst_matching_defect = 0.0;
};

cplx char_residual(cplx mu, double h);
cplx reduced_residual(cplx mu, double h, RootFamily family = RootFamily::principal);
double char_scale(cplx mu, double h);

bool admissible(cplx mu);

cplx seed_mu(long long j, double h, RootFamily family = RootFamily::principal);

JRange window_j_range(double h, const SeedWindow& w);
JRange band_j_range(double h, const SeedWindow& w);
JRange seed_j_range(double h, const SeedWindow& w);

/// Window spectrum from the closed-form seeds of both root families.
ContinuousSpectrum continuous_spectrum(const ContinuousBarrier& op, const SeedWindow& w = {}, double tol = 1e-10);

/// Every root of mu^2 + i h cos^2 mu with Re mu < 0 whose lambda can lie in the
/// strip, found by Newton from a grid of seeds and checked by the argument principle.
ContinuousSpectrum full_spectrum(const ContinuousBarrier& op, double tol = 1e-10, double grid_step = 0.5);

double eigenfunction_matching(cplx mu, double h);

struct ScalingPair {
  double lhs;
  double rhs;
};

/// ||V~_h||_p^p for the rescaled potential i chi_[-h,h] / h: 2 h^{1-p}.
double tilde_potential_norm_pp(double h, double p);

ScalingPair rescale_to_tilde(const ContinuousBarrier& op, std::span<const ContinuousEigenpoint> spectrum, double p,
                             double sigma);

std::vector<cplx> eigenvalues(const ContinuousSpectrum& s);

}  // namespace barrier
