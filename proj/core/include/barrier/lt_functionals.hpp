#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barrier/jacobi_barrier.hpp"
#include "barrier/numeric_core.hpp"
#include "barrier/schrodinger_barrier.hpp"

namespace barrier {

double dist_to_band(cplx lambda);
double dist_to_halfline(cplx lambda);

/// sum dist(lambda, [-2,2])^omega
double sum_theorem1(std::span<const cplx> spectrum, double omega);
/// sum dist(lambda, [-2,2])^p / |lambda^2 - 4|^sigma
double sum_theorem2(std::span<const cplx> spectrum, double p, double sigma);
/// p > 1: sum dist^{p+tau} / |lambda^2 - 4|^{1/2}; p = 1: sum dist^{1+tau} / |lambda^2 - 4|^{1/2+tau/4}
double sum_hk(std::span<const cplx> spectrum, double p, double tau);

enum class SumMode { theorem1, theorem2, hk };

class SumSpec {
 public:
  static SumSpec theorem1(double p, double omega);
  static SumSpec theorem2(double p, double sigma);
  static SumSpec hk(double p, double tau);
  /// Exactly one of omega, sigma, tau must be set.
  static SumSpec from_parts(double p, std::optional<double> omega, std::optional<double> sigma,
                            std::optional<double> tau);

  SumMode mode() const noexcept { return mode_; }
  double p() const noexcept { return p_; }
  /// omega, sigma or tau depending on the mode.
  double exponent() const noexcept { return exponent_; }
  std::string describe() const;

  double evaluate(std::span<const cplx> spectrum) const;

 private:
  SumSpec(SumMode mode, double p, double exponent) : mode_(mode), p_(p), exponent_(exponent) {}
  SumMode mode_;
  double p_;
  double exponent_;
};

struct ScanRow {
  double param = 0.0;  // n or h
  double norm_p = 0.0;
  double raw_sum = 0.0;
  double scaled_sum = 0.0;
  long long eigencount = 0;
  std::string note;  // non-empty when the spectrum for this row failed
  bool ok() const noexcept { return note.empty(); }
};

using DiscreteSpectrumProvider = std::function<DiscreteSpectrum(const DiscreteBarrier&)>;
using ContinuousSpectrumProvider = std::function<ContinuousSpectrum(const ContinuousBarrier&, const SeedWindow&)>;

/// ||b||_p for the barrier b_k = i n^{-2/3}, k = 1..n.
double discrete_norm(long long n, double p);

/// T_n with h = n^{-2/3}; scaled_sum = raw_sum / norm_p^p. Rows keep input order.
std::vector<ScanRow> scan_discrete(const SumSpec& mode, std::span<const int> n_list, double tol = 1e-12,
                                   const DiscreteSpectrumProvider& provider = {});

/// Window spectra of H_h; raw_sum = sum (Im lambda)^p / |lambda|^sigma, scaled by h^{2 sigma - p - 1}.
std::vector<ScanRow> scan_continuous(double p, double sigma, std::span<const double> h_list, const SeedWindow& w = {},
                                     double tol = 1e-10, const ContinuousSpectrumProvider& provider = {});

/// Leading lower bound for the continuous scaled sum from the window estimate.
double continuous_lower_bound(double p, double sigma, double h, const SeedWindow& w);

}  // namespace barrier
