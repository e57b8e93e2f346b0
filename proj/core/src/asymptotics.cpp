#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "barrier/asymptotics.hpp"
#include "barrier/errors.hpp"

namespace barrier {

std::pair<int, int> index_range(int n, const IndexWindow& w) {
  if (n < 2) throw ValidationError("index_range: n must be at least 2");
  const double nd = n;
  if (w.kind == WindowKind::standard) {
    return {static_cast<int>(std::ceil((nd + 2.0) / 8.0)), static_cast<int>(std::floor((3.0 * nd + 2.0) / 8.0))};
  }
  if (!(w.epsilon > 0.0 && w.epsilon < 0.5)) throw ValidationError("index_range: epsilon must lie in (0, 1/2)");
  return {static_cast<int>(std::ceil((2.0 * nd * w.epsilon + 1.0) / 4.0)),
          static_cast<int>(std::floor((2.0 * nd * (1.0 - w.epsilon) + 1.0) / 4.0))};
}

AsymptoticPrediction predict_discrete(int j, int n, const IndexWindow& w) {
  const auto [lo, hi] = index_range(n, w);
  if (j < lo || j > hi) {
    throw ValidationError("predict_discrete: j = " + std::to_string(j) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] for n = " + std::to_string(n));
  }
  const double nd = n;
  AsymptoticPrediction out;
  out.j = j;
  out.phi = std::numbers::pi * (4.0 * j - 1.0) / (2.0 * nd);
  out.r = 1.0 - (2.0 / 3.0) * std::log(nd) / nd;
  out.lambda_approx = {2.0 * std::cos(out.phi), std::pow(nd, -2.0 / 3.0)};
  return out;
}

std::vector<AsymptoticPrediction> predict_window(int n, const IndexWindow& w) {
  const auto [lo, hi] = index_range(n, w);
  std::vector<AsymptoticPrediction> out;
  for (int j = lo; j <= hi; ++j) out.push_back(predict_discrete(j, n, w));
  return out;
}

std::vector<Match> match_and_measure(std::span<const AsymptoticPrediction> predictions,
                                     std::span<const DiscreteEigenpoint> spectrum, const MatchOptions& options) {
  struct Pair {
    double distance;
    std::size_t prediction;
    std::size_t eigen;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    for (std::size_t e = 0; e < spectrum.size(); ++e) {
      if (options.branch && spectrum[e].branch != *options.branch) continue;
      const double d = std::abs(spectrum[e].lambda - predictions[i].lambda_approx);
      if (options.radius && d > *options.radius) continue;
      pairs.push_back({d, i, e});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.prediction != b.prediction) return a.prediction < b.prediction;
    return a.eigen < b.eigen;
  });

  std::vector<Match> out(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) out[i].j = predictions[i].j;
  std::vector<char> used(spectrum.size(), 0);
  for (const auto& p : pairs) {
    if (out[p.prediction].matched() || used[p.eigen]) continue;
    used[p.eigen] = 1;
    out[p.prediction].matched_lambda = spectrum[p.eigen].lambda;
    out[p.prediction].matched_k = spectrum[p.eigen].k;
    out[p.prediction].error = p.distance;
  }

  const auto unmatched = std::count_if(out.begin(), out.end(), [](const Match& m) { return !m.matched(); });
  if (!predictions.empty() &&
      static_cast<double>(unmatched) > options.max_unmatched_fraction * static_cast<double>(predictions.size())) {
    throw ValidationError("match_and_measure: " + std::to_string(unmatched) + " of " +
                          std::to_string(predictions.size()) + " predictions have no eigenvalue partner");
  }
  return out;
}

double rate_regress(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw ValidationError("rate_regress: at least 3 samples are required");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [s, e] : samples) {
    if (!(s > 0.0) || !(e > 0.0)) throw ValidationError("rate_regress: samples must be positive");
    mx += std::log(s);
    my += std::log(e);
  }
  const double m = static_cast<double>(samples.size());
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [s, e] : samples) {
    const double dx = std::log(s) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (sxx <= 1e-300 * m) throw ValidationError("rate_regress: scales have zero variance");
  return sxy / sxx;
}

}  // namespace barrier
