#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "barrier/jacobi_barrier.hpp"

namespace barrier {

struct AsymptoticPrediction {
  int j = 0;
  double phi = 0.0;
  double r = 0.0;
  cplx lambda_approx;
};

enum class WindowKind { standard, extended };

struct IndexWindow {
  WindowKind kind = WindowKind::standard;
  double epsilon = 0.05;  // extended window only
};

/// Admissible index range [j_lo, j_hi] for n.
std::pair<int, int> index_range(int n, const IndexWindow& w = {});

AsymptoticPrediction predict_discrete(int j, int n, const IndexWindow& w = {});
std::vector<AsymptoticPrediction> predict_window(int n, const IndexWindow& w = {});

struct Match {
  int j = 0;
  std::optional<cplx> matched_lambda;
  std::optional<cplx> matched_k;
  double error = 0.0;  // |matched - approx|; 0 when unmatched
  bool matched() const noexcept { return matched_lambda.has_value(); }
};

struct MatchOptions {
  /// Maximum lambda distance for a pairing; unlimited when unset.
  std::optional<double> radius;
  /// Only eigenpoints of this branch are candidates; all branches when unset.
  std::optional<Branch> branch;
  double max_unmatched_fraction = 0.10;
};

/// Greedy nearest-neighbour pairing in lambda, shortest distances first.
std::vector<Match> match_and_measure(std::span<const AsymptoticPrediction> predictions,
                                     std::span<const DiscreteEigenpoint> spectrum, const MatchOptions& options = {});

double rate_regress(std::span<const std::pair<double, double>> samples);

}  // namespace barrier
