#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "barrier/asymptotics.hpp"
#include "barrier/errors.hpp"
#include "barrier/figures.hpp"
#include "barrier/io.hpp"
#include "barrier/lt_functionals.hpp"
#include "barrier/schrodinger_barrier.hpp"
#include "barrier/version.hpp"
#include "json.hpp"

namespace barrier {

namespace {

using json = nlohmann::json;
using Params = std::map<std::string, std::string>;

struct Outcome {
  Table table;
  std::vector<CertificationCheck> checks;
  std::vector<std::string> notes;
  std::string svg;
};

double real(const Params& p, const std::string& k) { return std::stod(p.at(k)); }
long long integer(const Params& p, const std::string& k) { return std::stoll(p.at(k)); }

template <class T>
std::vector<T> list(const Params& p, const std::string& k) {
  std::vector<T> out;
  std::stringstream ss(p.at(k));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if constexpr (std::is_integral_v<T>) {
      out.push_back(static_cast<T>(std::stoll(item)));
    } else {
      out.push_back(std::stod(item));
    }
  }
  return out;
}

SeedWindow window_from(const Params& p) {
  return SeedWindow(real(p, "alpha"), real(p, "beta"), real(p, "gamma"),
                    p.at("rule") == "power" ? WindowRule::power_law : WindowRule::imag_band);
}

CertificationCheck check_at_most(std::string name, double worst, double threshold) {
  return {std::move(name), worst, threshold, worst <= threshold};
}

std::string note(const std::string& key, double value) { return key + "=" + format_number(value); }

// ---------------------------------------------------------------------------

Outcome jacobi_spectrum_cmd(const Params& p) {
  const DiscreteBarrier op(static_cast<int>(integer(p, "n")), real(p, "h"));
  const double tol = real(p, "tol");
  const DiscreteSpectrum s = cached_discrete_spectrum(op, tol);
  Outcome out;
  out.table.columns = csv_columns(Command::jacobi_spectrum);
  for (const auto& e : s.points) {
    out.table.rows.push_back({std::string(to_string(e.branch)), e.z.real(), e.z.imag(), e.k.real(), e.k.imag(),
                              e.lambda.real(), e.lambda.imag(), e.bs_residual});
  }
  out.checks.push_back(check_at_most("polynomial_backward_error", s.worst_backward_error, tol));
  out.checks.push_back(check_at_most("birman_schwinger_residual", s.worst_bs_residual, kBsGate));
  out.checks.push_back(check_at_most("disk_root_count", std::abs(s.disk_multiplicity - (2.0 * op.n() - 2.0)), 0.0));
  out.notes.push_back(note("eigenvalues", static_cast<double>(s.points.size())));
  out.notes.push_back(note("disk_multiplicity", s.disk_multiplicity));
  out.notes.push_back(note("indeterminate_roots", static_cast<double>(s.indeterminate.size())));
  out.svg = render_discrete_spectrum(op, s);
  return out;
}

void continuous_rows(const ContinuousSpectrum& s, Table& table) {
  for (const auto& e : s.points) {
    table.rows.push_back({static_cast<std::int64_t>(e.j), std::string(to_string(e.family)), e.mu.real(), e.mu.imag(),
                          e.k.real(), e.k.imag(), e.lambda.real(), e.lambda.imag(), e.residual});
  }
}

void continuous_checks(const ContinuousSpectrum& s, double tol, Outcome& out) {
  out.checks.push_back(check_at_most("char_residual", s.worst_residual, tol));
  out.checks.push_back(
      check_at_most("argument_principle_count", std::abs(s.zero_count - s.roots_in_window), 0.0));
  out.checks.push_back(check_at_most("eigenfunction_matching", s.worst_matching_defect, 1e-12));
  out.notes.push_back(note("eigenvalues", static_cast<double>(s.points.size())));
  out.notes.push_back(note("rejected_roots", static_cast<double>(s.rejected.size())));
  out.notes.push_back(note("distinct_roots", s.distinct_roots));
  out.notes.push_back(note("zero_count", s.zero_count));
  if (!s.range.empty()) {
    out.notes.push_back(note("j_min", static_cast<double>(s.range.j_min)));
    out.notes.push_back(note("j_max", static_cast<double>(s.range.j_max)));
  }
}

Outcome schrodinger_spectrum_cmd(const Params& p) {
  const ContinuousBarrier op(real(p, "h"));
  const double tol = real(p, "tol");
  const ContinuousSpectrum s = p.at("mode") == "full" ? full_spectrum(op, tol, real(p, "grid_step"))
                                                      : continuous_spectrum(op, window_from(p), tol);
  Outcome out;
  out.table.columns = csv_columns(Command::schrodinger_spectrum);
  continuous_rows(s, out.table);
  continuous_checks(s, tol, out);
  out.svg = render_figure2(op, s);
  return out;
}

void scan_checks(const std::vector<ScanRow>& rows, Outcome& out) {
  double failed = 0;
  for (const auto& r : rows) {
    if (!r.ok()) {
      ++failed;
      out.notes.push_back("row " + format_number(r.param) + ": " + r.note);
    }
  }
  out.checks.push_back(check_at_most("scan_rows_certified", failed, 0.0));
}

Outcome lt_scan_discrete_cmd(const Params& p) {
  auto maybe = [&](const char* k) { return p.count(k) ? std::optional<double>(real(p, k)) : std::nullopt; };
  const SumSpec spec = SumSpec::from_parts(real(p, "p"), maybe("omega"), maybe("sigma"), maybe("tau"));
  const auto ns = list<int>(p, "n_list");
  const double tol = real(p, "tol");
  const auto rows =
      scan_discrete(spec, ns, tol, [tol](const DiscreteBarrier& op) { return cached_discrete_spectrum(op, tol); });
  Outcome out;
  out.table.columns = csv_columns(Command::lt_scan_discrete);
  Series series{spec.describe(), {}, {}};
  for (const auto& r : rows) {
    out.table.rows.push_back({static_cast<std::int64_t>(r.param), r.norm_p, r.raw_sum, r.scaled_sum,
                              static_cast<std::int64_t>(r.eigencount)});
    series.x.push_back(r.param);
    series.y.push_back(r.scaled_sum);
  }
  scan_checks(rows, out);
  out.notes.push_back("mode " + spec.describe());
  out.svg = render_scan("discrete scan", "n", "scaled sum", {series});
  return out;
}

Outcome lt_scan_continuous_cmd(const Params& p) {
  const double pe = real(p, "p");
  const double sigma = real(p, "sigma");
  const auto hs = list<double>(p, "h_list");
  const SeedWindow w = window_from(p);
  const auto rows = scan_continuous(pe, sigma, hs, w, real(p, "tol"));
  Outcome out;
  out.table.columns = csv_columns(Command::lt_scan_continuous);
  Series scaled{"scaled sum", {}, {}};
  Series bound{"leading lower bound", {}, {}};
  for (const auto& r : rows) {
    const double lb = continuous_lower_bound(pe, sigma, r.param, w);
    out.table.rows.push_back(
        {r.param, r.norm_p, r.raw_sum, r.scaled_sum, static_cast<std::int64_t>(r.eigencount), lb});
    scaled.x.push_back(r.param);
    scaled.y.push_back(r.scaled_sum);
    bound.x.push_back(r.param);
    bound.y.push_back(lb);
  }
  scan_checks(rows, out);
  out.svg = render_scan("continuous scan", "h", "scaled sum", {scaled, bound});
  return out;
}

Outcome asymptotics_check_cmd(const Params& p) {
  IndexWindow w;
  w.kind = p.at("window") == "extended" ? WindowKind::extended : WindowKind::standard;
  w.epsilon = real(p, "epsilon");
  const double tol = real(p, "tol");
  const double radius_factor = real(p, "radius_factor");
  const bool minus_only = p.at("branch") == "minus";

  Outcome out;
  out.table.columns = csv_columns(Command::asymptotics_check);
  std::vector<std::pair<double, double>> samples;
  double worst_unmatched = 0.0;
  double worst_floor_gap = 0.0;
  double worst_k = 0.0;
  Series measured{"max error", {}, {}};
  for (int n : list<int>(p, "n_list")) {
    const DiscreteBarrier op(n, std::pow(static_cast<double>(n), -2.0 / 3.0));
    const DiscreteSpectrum s = cached_discrete_spectrum(op, tol);
    const auto predictions = predict_window(n, w);
    MatchOptions opts;
    opts.radius = radius_factor * std::log(static_cast<double>(n)) / n;
    if (minus_only) opts.branch = Branch::minus;
    opts.max_unmatched_fraction = 1.0;
    const auto matches = match_and_measure(predictions, s.points, opts);

    long long matched = 0;
    double max_error = 0.0;
    double min_dist = INFINITY;
    for (const auto& m : matches) {
      if (!m.matched()) continue;
      ++matched;
      max_error = std::max(max_error, m.error);
      min_dist = std::min(min_dist, dist_to_band(*m.matched_lambda));
      worst_k = std::max(worst_k, std::abs(*m.matched_k));
    }
    const double unmatched =
        predictions.empty() ? 0.0 : 1.0 - static_cast<double>(matched) / static_cast<double>(predictions.size());
    const double floor = 0.5 * std::pow(static_cast<double>(n), -2.0 / 3.0);
    worst_unmatched = std::max(worst_unmatched, unmatched);
    if (n >= 800 && matched > 0) worst_floor_gap = std::max(worst_floor_gap, floor - min_dist);
    if (n >= 800 && matched < static_cast<long long>(predictions.size())) {
      // Window indices without an eigenvalue cannot meet the distance floor.
      worst_floor_gap = std::max(worst_floor_gap, floor);
    }
    if (matched > 0) {
      samples.emplace_back(n, max_error);
      measured.x.push_back(n);
      measured.y.push_back(max_error);
    }
    out.table.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(predictions.size()),
                              static_cast<std::int64_t>(matched), unmatched, max_error,
                              std::log(static_cast<double>(n)) / n, min_dist, floor});
  }
  out.checks.push_back(check_at_most("unmatched_fraction", worst_unmatched, 0.10));
  out.checks.push_back({"matched_k_inside_unit_disk", worst_k, 1.0, worst_k < 1.0});
  out.checks.push_back(check_at_most("dist_floor_shortfall", worst_floor_gap, 0.0));
  if (samples.size() >= 3) {
    const double slope = rate_regress(samples);
    out.notes.push_back(note("rate_slope", slope));
    out.checks.push_back({"rate_slope_in_(-1.1,-0.7)", slope, -0.7, slope > -1.1 && slope < -0.7});
  }
  out.svg = render_scan("asymptotic error", "n", "max |lambda - approx|", {measured});
  return out;
}

Outcome figure1_cmd(const Params& p) {
  const DiscreteBarrier op(static_cast<int>(integer(p, "n")), real(p, "h"));
  const double tol = real(p, "tol");
  const int grid = static_cast<int>(integer(p, "grid"));
  const DiscreteSpectrum s = discrete_spectrum(op, tol);
  const auto minus_region = emit_region_contour(op.n(), Branch::minus, grid);
  const auto plus_region = emit_region_contour(op.n(), Branch::plus, grid);

  Outcome out;
  out.table.columns = csv_columns(Command::figure1);
  double mismatches = 0;
  for (Branch branch : {Branch::minus, Branch::plus}) {
    const RootSet& roots = branch == Branch::minus ? s.minus_roots : s.plus_roots;
    const auto& region = branch == Branch::minus ? minus_region : plus_region;
    for (const Root& r : roots.roots) {
      const cplx z = r.value;
      const bool in_disk = std::abs(z) < 1.0 - 1e-8;
      const auto hit = std::find_if(s.points.begin(), s.points.end(),
                                    [&](const auto& e) { return e.branch == branch && e.z == z; });
      const bool admissible = hit != s.points.end();
      const bool upper = z.imag() > 1e-10;
      const bool inside = upper && in_disk && region_contains(region, z);
      const bool indeterminate =
          std::any_of(s.indeterminate.begin(), s.indeterminate.end(), [&](cplx q) { return q == z; });
      if (upper && in_disk && !indeterminate && admissible != inside) ++mismatches;
      const cplx lambda = admissible ? hit->lambda : cplx{NAN, NAN};
      out.table.rows.push_back({std::string(to_string(branch)), z.real(), z.imag(),
                                static_cast<std::int64_t>(r.multiplicity), static_cast<std::int64_t>(in_disk),
                                static_cast<std::int64_t>(admissible), static_cast<std::int64_t>(inside),
                                lambda.real(), lambda.imag()});
    }
  }
  out.checks.push_back(check_at_most("region_containment_mismatches", mismatches, 0.0));
  out.checks.push_back(check_at_most("birman_schwinger_residual", s.worst_bs_residual, kBsGate));
  out.checks.push_back(check_at_most("disk_root_count", std::abs(s.disk_multiplicity - (2.0 * op.n() - 2.0)), 0.0));
  out.notes.push_back(note("eigenvalues", static_cast<double>(s.points.size())));
  out.notes.push_back(note("minus_region_area", region_area(minus_region)));
  out.notes.push_back(note("plus_region_area", region_area(plus_region)));
  out.svg = render_figure1(op, s, minus_region, plus_region);
  return out;
}

Outcome figure2_cmd(const Params& p) {
  const ContinuousBarrier op(real(p, "h"));
  const double tol = real(p, "tol");
  const ContinuousSpectrum s = full_spectrum(op, tol, real(p, "grid_step"));
  Outcome out;
  out.table.columns = csv_columns(Command::figure2);
  continuous_rows(s, out.table);
  continuous_checks(s, tol, out);
  out.svg = render_figure2(op, s);
  return out;
}

Outcome dispatch(Command c, const Params& p) {
  switch (c) {
    case Command::jacobi_spectrum: return jacobi_spectrum_cmd(p);
    case Command::schrodinger_spectrum: return schrodinger_spectrum_cmd(p);
    case Command::lt_scan_discrete: return lt_scan_discrete_cmd(p);
    case Command::lt_scan_continuous: return lt_scan_continuous_cmd(p);
    case Command::asymptotics_check: return asymptotics_check_cmd(p);
    case Command::figure1: return figure1_cmd(p);
    case Command::figure2: return figure2_cmd(p);
  }
  throw ValidationError("unknown command");
}

// --- spectrum cache ---------------------------------------------------------

std::string cache_key(const DiscreteBarrier& op, double tol) {
  return std::string("discrete-spectrum|") + kToolVersion + "|n=" + std::to_string(op.n()) +
         "|h=" + format_number(op.h()) + "|tol=" + format_number(tol);
}

std::optional<DiscreteSpectrum> load_cached(const std::filesystem::path& file, const std::string& key) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    DiscreteSpectrum s;
    for (const auto& e : j.at("points")) {
      s.points.push_back({{e[1].get<double>(), e[2].get<double>()},
                          {e[3].get<double>(), e[4].get<double>()},
                          {e[5].get<double>(), e[6].get<double>()},
                          e[0].get<std::string>() == "minus" ? Branch::minus : Branch::plus,
                          e[7].get<double>()});
    }
    for (const auto& z : j.at("indeterminate")) s.indeterminate.emplace_back(z[0].get<double>(), z[1].get<double>());
    s.disk_multiplicity = j.at("disk_multiplicity").get<int>();
    s.worst_backward_error = j.at("worst_backward_error").get<double>();
    s.worst_bs_residual = j.at("worst_bs_residual").get<double>();
    s.route = j.at("route").get<std::string>() == "dense" ? DeterminantRoute::dense : DeterminantRoute::tridiagonal;
    return s;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void store_cached(const std::filesystem::path& file, const std::string& key, const DiscreteSpectrum& s) {
  json j;
  j["key"] = key;
  json points = json::array();
  for (const auto& e : s.points) {
    points.push_back({std::string(to_string(e.branch)), e.z.real(), e.z.imag(), e.k.real(), e.k.imag(),
                      e.lambda.real(), e.lambda.imag(), e.bs_residual});
  }
  j["points"] = std::move(points);
  json ind = json::array();
  for (cplx z : s.indeterminate) ind.push_back({z.real(), z.imag()});
  j["indeterminate"] = std::move(ind);
  j["disk_multiplicity"] = s.disk_multiplicity;
  j["worst_backward_error"] = s.worst_backward_error;
  j["worst_bs_residual"] = s.worst_bs_residual;
  j["route"] = s.route == DeterminantRoute::dense ? "dense" : "tridiagonal";
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  const auto tmp = file.string() + ".tmp" + std::to_string(fnv1a(key) ^ static_cast<std::uint64_t>(std::rand()));
  {
    std::ofstream out(tmp);
    out << j.dump();
    if (!out) return;
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace

DiscreteSpectrum cached_discrete_spectrum(const DiscreteBarrier& op, double tol) {
  const char* dir = std::getenv("BARRIER_SPECTRA_CACHE");
  if (dir == nullptr || *dir == '\0') return discrete_spectrum(op, tol);
  const std::string key = cache_key(op, tol);
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
  const std::filesystem::path file = std::filesystem::path(dir) / name;
  if (auto hit = load_cached(file, key)) return *hit;
  DiscreteSpectrum s = discrete_spectrum(op, tol);
  store_cached(file, key, s);
  return s;
}

ResultEnvelope run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ResultEnvelope env;
  env.config = config;
  env.config.parameters = validate(config);
  env.tool_version = kToolVersion;

  Outcome outcome;
  try {
    outcome = dispatch(config.command, env.config.parameters);
  } catch (const Error& e) {
    env.status = RunStatus::certification_failure;
    env.error = e.what();
  }
  env.table = std::move(outcome.table);
  if (env.table.columns.empty()) env.table.columns = csv_columns(config.command);
  env.certification_summary = std::move(outcome.checks);
  env.notes = std::move(outcome.notes);
  if (env.status == RunStatus::ok) {
    const bool all_passed = std::all_of(env.certification_summary.begin(), env.certification_summary.end(),
                                        [](const CertificationCheck& c) { return c.passed; });
    if (!all_passed) env.status = RunStatus::certification_failure;
  }

  std::string stem(to_string(config.command));
  std::replace(stem.begin(), stem.end(), '-', '_');
  std::vector<std::pair<std::string, std::string>> files;
  if (config.formats.count(Format::csv)) files.emplace_back(stem + ".csv", to_csv(env.table));
  if (config.formats.count(Format::svg) && !outcome.svg.empty()) files.emplace_back(stem + ".svg", outcome.svg);
  for (const auto& f : files) env.files.push_back(f.first);
  if (config.formats.count(Format::json)) env.files.push_back(stem + ".json");

  env.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.formats.count(Format::json)) files.emplace_back(stem + ".json", to_json(env));
  write_outputs_atomically(config.output_dir, files);
  return env;
}

}  // namespace barrier
