#include <cmath>
#include <numbers>
#include <sstream>

#include "barrier/errors.hpp"
#include "barrier/lt_functionals.hpp"

namespace barrier {

namespace {

double endpoint_weight(cplx lambda, double exponent) {
  const double w = std::abs(lambda * lambda - 4.0);
  if (w == 0.0) throw SingularInputError("Lieb-Thirring weight is singular at lambda = +-2");
  return std::pow(w, exponent);
}

}  // namespace

double dist_to_band(cplx lambda) {
  const double x = lambda.real();
  const double y = std::abs(lambda.imag());
  if (std::abs(x) <= 2.0) return y;
  return std::hypot(std::abs(x) - 2.0, y);
}

double dist_to_halfline(cplx lambda) {
  if (lambda.real() >= 0.0) return std::abs(lambda.imag());
  return std::abs(lambda);
}

double sum_theorem1(std::span<const cplx> spectrum, double omega) {
  if (!(omega >= 0.0)) throw ValidationError("sum_theorem1: omega must be non-negative");
  double s = 0.0;
  for (cplx l : spectrum) s += std::pow(dist_to_band(l), omega);
  return s;
}

double sum_theorem2(std::span<const cplx> spectrum, double p, double sigma) {
  if (!(p >= 1.0)) throw ValidationError("sum_theorem2: p must be at least 1");
  if (!(sigma >= 0.0)) throw ValidationError("sum_theorem2: sigma must be non-negative");
  double s = 0.0;
  for (cplx l : spectrum) s += std::pow(dist_to_band(l), p) / endpoint_weight(l, sigma);
  return s;
}

double sum_hk(std::span<const cplx> spectrum, double p, double tau) {
  if (!(p >= 1.0)) throw ValidationError("sum_hk: p must be at least 1");
  if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("sum_hk: tau must lie in (0, 1)");
  const double weight_exponent = p > 1.0 ? 0.5 : 0.5 + tau / 4.0;
  double s = 0.0;
  for (cplx l : spectrum) s += std::pow(dist_to_band(l), p + tau) / endpoint_weight(l, weight_exponent);
  return s;
}

SumSpec SumSpec::theorem1(double p, double omega) {
  if (!(p >= 0.0)) throw ValidationError("SumSpec: p must be non-negative");
  if (!(omega >= 0.0)) throw ValidationError("SumSpec: omega must be non-negative");
  return {SumMode::theorem1, p, omega};
}

SumSpec SumSpec::theorem2(double p, double sigma) {
  if (!(p >= 1.0)) throw ValidationError("SumSpec: p must be at least 1");
  if (!(sigma >= 0.5)) throw ValidationError("SumSpec: sigma must be at least 1/2");
  return {SumMode::theorem2, p, sigma};
}

SumSpec SumSpec::hk(double p, double tau) {
  if (!(p >= 1.0)) throw ValidationError("SumSpec: p must be at least 1");
  if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("SumSpec: tau must lie in (0, 1)");
  return {SumMode::hk, p, tau};
}

SumSpec SumSpec::from_parts(double p, std::optional<double> omega, std::optional<double> sigma,
                            std::optional<double> tau) {
  const int set = omega.has_value() + sigma.has_value() + tau.has_value();
  if (set != 1) throw ValidationError("SumSpec: exactly one of omega, sigma, tau must be given");
  if (omega) return theorem1(p, *omega);
  if (sigma) return theorem2(p, *sigma);
  return hk(p, *tau);
}

std::string SumSpec::describe() const {
  std::ostringstream s;
  switch (mode_) {
    case SumMode::theorem1: s << "theorem1(p=" << p_ << ", omega=" << exponent_ << ")"; break;
    case SumMode::theorem2: s << "theorem2(p=" << p_ << ", sigma=" << exponent_ << ")"; break;
    case SumMode::hk: s << "hk(p=" << p_ << ", tau=" << exponent_ << ")"; break;
  }
  return s.str();
}

double SumSpec::evaluate(std::span<const cplx> spectrum) const {
  switch (mode_) {
    case SumMode::theorem1: return sum_theorem1(spectrum, exponent_);
    case SumMode::theorem2: return sum_theorem2(spectrum, p_, exponent_);
    case SumMode::hk: return sum_hk(spectrum, p_, exponent_);
  }
  return 0.0;
}

double discrete_norm(long long n, double p) {
  if (n < 1) throw ValidationError("discrete_norm: n must be positive");
  if (!(p > 0.0)) throw ValidationError("discrete_norm: p must be positive");
  return std::pow(static_cast<double>(n), 1.0 / p - 2.0 / 3.0);
}

std::vector<ScanRow> scan_discrete(const SumSpec& mode, std::span<const int> n_list, double tol,
                                   const DiscreteSpectrumProvider& provider) {
  for (int n : n_list) {
    if (n < 2) throw ValidationError("scan_discrete: every n must be at least 2");
  }
  if (!(mode.p() > 0.0)) throw ValidationError("scan_discrete: p must be positive");
  std::vector<ScanRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    ScanRow row;
    row.param = n;
    row.norm_p = discrete_norm(n, mode.p());
    try {
      const DiscreteBarrier op(n, std::pow(static_cast<double>(n), -2.0 / 3.0));
      const DiscreteSpectrum s = provider ? provider(op) : discrete_spectrum(op, tol);
      const auto lambdas = eigenvalues(s);
      row.eigencount = static_cast<long long>(lambdas.size());
      row.raw_sum = mode.evaluate(lambdas);
      row.scaled_sum = row.raw_sum / std::pow(row.norm_p, mode.p());
    } catch (const Error& e) {
      row.raw_sum = NAN;
      row.scaled_sum = NAN;
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ScanRow> scan_continuous(double p, double sigma, std::span<const double> h_list, const SeedWindow& w,
                                     double tol, const ContinuousSpectrumProvider& provider) {
  if (!(p >= 1.0)) throw ValidationError("scan_continuous: p must be at least 1");
  if (!(sigma >= 0.5)) throw ValidationError("scan_continuous: sigma must be at least 1/2");
  for (double h : h_list) {
    if (!(h > 0.0)) throw ValidationError("scan_continuous: every h must be positive");
  }
  std::vector<ScanRow> rows;
  rows.reserve(h_list.size());
  for (double h : h_list) {
    ScanRow row;
    row.param = h;
    row.norm_p = std::pow(tilde_potential_norm_pp(h, p), 1.0 / p);
    try {
      const ContinuousBarrier op(h);
      const ContinuousSpectrum s = provider ? provider(op, w) : continuous_spectrum(op, w, tol);
      double raw = 0.0;
      for (const auto& e : s.points) raw += std::pow(e.lambda.imag(), p) / std::pow(std::abs(e.lambda), sigma);
      row.eigencount = static_cast<long long>(s.points.size());
      row.raw_sum = raw;
      row.scaled_sum = std::pow(h, 2.0 * sigma - p - 1.0) * raw;
    } catch (const Error& e) {
      row.raw_sum = NAN;
      row.scaled_sum = NAN;
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double continuous_lower_bound(double p, double sigma, double h, const SeedWindow& w) {
  using std::numbers::pi;
  if (sigma == 0.5) return (w.beta() - w.alpha()) / (std::pow(2.0, p + 1.0) * pi) * std::log(h);
  return std::pow(h, (2.0 * sigma - 1.0) * (0.5 - w.alpha())) /
         (std::pow(2.0, 2.0 * sigma + p) * std::pow(pi, 2.0 * sigma) * (2.0 * sigma - 1.0));
}

}  // namespace barrier
