#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "barrier/errors.hpp"
#include "barrier/io.hpp"
#include "barrier/lt_functionals.hpp"
#include "json.hpp"

namespace barrier {

namespace {

using json = nlohmann::ordered_json;

struct CommandInfo {
  Command command;
  std::string_view name;
  std::string_view help;
};

constexpr std::array<CommandInfo, 7> kCommands{{
    {Command::jacobi_spectrum, "jacobi-spectrum", "certified discrete spectrum of the Jacobi barrier operator"},
    {Command::schrodinger_spectrum, "schrodinger-spectrum", "certified spectrum of the continuous barrier operator"},
    {Command::lt_scan_discrete, "lt-scan-discrete", "Lieb-Thirring sums over an n ladder with h = n^(-2/3)"},
    {Command::lt_scan_continuous, "lt-scan-continuous", "window Lieb-Thirring sums over an h ladder"},
    {Command::asymptotics_check, "asymptotics-check", "compare spectra with the asymptotic eigenvalue formula"},
    {Command::figure1, "figure1", "three-panel z-plane / lambda-plane figure for the Jacobi barrier"},
    {Command::figure2, "figure2", "lambda-plane scatter for the continuous barrier"},
}};

ParamSpec req(std::string name, ParamKind kind, std::string help) {
  return {std::move(name), kind, true, "", {}, std::move(help)};
}
ParamSpec opt(std::string name, ParamKind kind, std::string def, std::string help) {
  return {std::move(name), kind, false, std::move(def), {}, std::move(help)};
}
ParamSpec choice(std::string name, std::vector<std::string> choices, std::string help) {
  std::string def = choices.front();
  return {std::move(name), ParamKind::choice, false, std::move(def), std::move(choices), std::move(help)};
}

std::vector<ParamSpec> window_params() {
  return {opt("alpha", ParamKind::real, "0.15", "seed window alpha"),
          opt("beta", ParamKind::real, "0.4", "seed window beta"),
          opt("gamma", ParamKind::real, "0.25", "seed window gamma"),
          choice("rule", {"band", "power"}, "j range rule: imaginary-part band or power law")};
}

template <class T>
T parse_scalar(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ValidationError("parameter '" + key + "': cannot parse '" + text + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ValidationError("parameter '" + key + "' must be finite");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_scalar<T>(key, item));
  if (out.empty()) throw ValidationError("parameter '" + key + "' must be a non-empty list");
  return out;
}

json number_to_json(double x) {
  if (std::isfinite(x)) return x;
  return json{{"nonfinite", format_number(x)}};
}

double number_from_json(const json& j) {
  if (j.is_object()) {
    const std::string s = j.at("nonfinite").get<std::string>();
    if (s == "nan") return NAN;
    return s == "inf" ? INFINITY : -INFINITY;
  }
  return j.get<double>();
}

bool same_double(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b;
}

bool same_cell(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<double>(&a)) return same_double(*x, std::get<double>(b));
  return a == b;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  for (const auto& info : kCommands) {
    if (info.command == c) return info.name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const auto& info : kCommands) {
    if (info.name == name) return info.command;
  }
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> all = [] {
    std::vector<Command> v;
    for (const auto& info : kCommands) v.push_back(info.command);
    return v;
  }();
  return all;
}

std::string_view command_help(Command c) {
  for (const auto& info : kCommands) {
    if (info.command == c) return info.help;
  }
  return "";
}

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::svg: return "svg";
  }
  return "csv";
}

std::set<Format> parse_formats(std::string_view list) {
  std::set<Format> out;
  std::stringstream ss{std::string(list)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") {
      out.insert(Format::csv);
    } else if (item == "json") {
      out.insert(Format::json);
    } else if (item == "svg") {
      out.insert(Format::svg);
    } else {
      throw ValidationError("unknown format '" + item + "' (expected csv, json, svg)");
    }
  }
  if (out.empty()) throw ValidationError("at least one output format is required");
  return out;
}

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::validation_error: return "validation_error";
    case RunStatus::certification_failure: return "certification_failure";
  }
  return "ok";
}

int ResultEnvelope::exit_code() const noexcept {
  switch (status) {
    case RunStatus::ok: return 0;
    case RunStatus::validation_error: return 1;
    case RunStatus::certification_failure: return 2;
  }
  return 2;
}

const std::vector<ParamSpec>& command_schema(Command c) {
  static const auto schemas = [] {
    std::map<Command, std::vector<ParamSpec>> m;
    m[Command::jacobi_spectrum] = {req("n", ParamKind::integer, "barrier length (>= 2)"),
                                   req("h", ParamKind::real, "coupling magnitude (> 0)"),
                                   opt("tol", ParamKind::real, "1e-12", "polynomial backward-error tolerance")};
    m[Command::schrodinger_spectrum] = {req("h", ParamKind::real, "coupling magnitude (> 0)")};
    for (auto& p : window_params()) m[Command::schrodinger_spectrum].push_back(p);
    m[Command::schrodinger_spectrum].push_back(choice("mode", {"window", "full"}, "seed window or full strip search"));
    m[Command::schrodinger_spectrum].push_back(opt("tol", ParamKind::real, "1e-10", "relative residual tolerance"));
    m[Command::schrodinger_spectrum].push_back(opt("grid_step", ParamKind::real, "0.5", "seed grid spacing (full mode)"));

    m[Command::lt_scan_discrete] = {req("p", ParamKind::real, "potential norm exponent"),
                                    opt("omega", ParamKind::real, "", "theorem-1 exponent"),
                                    opt("sigma", ParamKind::real, "", "theorem-2 weight exponent"),
                                    opt("tau", ParamKind::real, "", "HK exponent"),
                                    req("n_list", ParamKind::integer_list, "comma-separated barrier lengths"),
                                    opt("tol", ParamKind::real, "1e-12", "polynomial backward-error tolerance")};
    m[Command::lt_scan_continuous] = {req("p", ParamKind::real, "exponent p (>= 1)"),
                                      req("sigma", ParamKind::real, "weight exponent (>= 1/2)"),
                                      req("h_list", ParamKind::real_list, "comma-separated couplings")};
    for (auto& p : window_params()) m[Command::lt_scan_continuous].push_back(p);
    m[Command::lt_scan_continuous].push_back(opt("tol", ParamKind::real, "1e-10", "relative residual tolerance"));

    m[Command::asymptotics_check] = {
        req("n_list", ParamKind::integer_list, "comma-separated barrier lengths"),
        choice("window", {"standard", "extended"}, "index window"),
        opt("epsilon", ParamKind::real, "0.05", "extended-window margin"),
        opt("radius_factor", ParamKind::real, "3", "match radius in units of log(n)/n"),
        choice("branch", {"minus", "all"}, "eigenpoints eligible for matching"),
        opt("tol", ParamKind::real, "1e-12", "polynomial backward-error tolerance")};
    m[Command::figure1] = {opt("n", ParamKind::integer, "39", "barrier length"),
                           opt("h", ParamKind::real, "0.1", "coupling magnitude"),
                           opt("grid", ParamKind::integer, "1024", "contour grid resolution (>= 256)"),
                           opt("tol", ParamKind::real, "1e-12", "polynomial backward-error tolerance")};
    m[Command::figure2] = {opt("h", ParamKind::real, "2500", "coupling magnitude"),
                           opt("tol", ParamKind::real, "1e-10", "relative residual tolerance"),
                           opt("grid_step", ParamKind::real, "0.5", "seed grid spacing")};
    return m;
  }();
  return schemas.at(c);
}

std::map<std::string, std::string> validate(const RunConfig& config) {
  const auto& schema = command_schema(config.command);
  for (const auto& [key, value] : config.parameters) {
    const bool known = std::any_of(schema.begin(), schema.end(), [&](const ParamSpec& s) { return s.name == key; });
    if (!known) {
      throw ValidationError("unknown parameter '" + key + "' for command " + std::string(to_string(config.command)));
    }
  }
  std::map<std::string, std::string> resolved;
  for (const auto& spec : schema) {
    auto it = config.parameters.find(spec.name);
    std::string value;
    if (it != config.parameters.end()) {
      value = it->second;
    } else if (spec.required) {
      throw ValidationError("missing required parameter '" + spec.name + "'");
    } else if (spec.default_value.empty()) {
      continue;
    } else {
      value = spec.default_value;
    }
    switch (spec.kind) {
      case ParamKind::integer: parse_scalar<long long>(spec.name, value); break;
      case ParamKind::real: parse_scalar<double>(spec.name, value); break;
      case ParamKind::integer_list: parse_list<long long>(spec.name, value); break;
      case ParamKind::real_list: parse_list<double>(spec.name, value); break;
      case ParamKind::choice:
        if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
          throw ValidationError("parameter '" + spec.name + "': '" + value + "' is not an allowed choice");
        }
        break;
    }
    resolved[spec.name] = value;
  }
  if (config.formats.empty()) throw ValidationError("at least one output format is required");

  auto real = [&](const std::string& k) { return parse_scalar<double>(k, resolved.at(k)); };
  auto integer = [&](const std::string& k) { return parse_scalar<long long>(k, resolved.at(k)); };
  auto positive = [&](const std::string& k) {
    if (resolved.count(k) && !(real(k) > 0.0)) throw ValidationError("parameter '" + k + "' must be positive");
  };
  positive("tol");
  positive("h");
  positive("grid_step");
  if (resolved.count("n") && integer("n") < 2) throw ValidationError("parameter 'n' must be at least 2");
  if (resolved.count("grid") && integer("grid") < 256) throw ValidationError("parameter 'grid' must be at least 256");
  if (resolved.count("n_list")) {
    for (long long n : parse_list<long long>("n_list", resolved.at("n_list"))) {
      if (n < 2 || n > 100000) throw ValidationError("every n in n_list must lie in [2, 100000]");
    }
  }
  if (resolved.count("h_list")) {
    for (double h : parse_list<double>("h_list", resolved.at("h_list"))) {
      if (!(h > 0.0)) throw ValidationError("every h in h_list must be positive");
    }
  }
  if (resolved.count("alpha")) {
    // Throws on a violated ordering constraint.
    (void)SeedWindow(real("alpha"), real("beta"), real("gamma"));
  }
  if (config.command == Command::lt_scan_discrete) {
    int set = 0;
    for (const char* k : {"omega", "sigma", "tau"}) set += static_cast<int>(resolved.count(k));
    if (set != 1) throw ValidationError("lt-scan-discrete needs exactly one of --omega, --sigma, --tau");
    auto maybe = [&](const char* k) { return resolved.count(k) ? std::optional<double>(real(k)) : std::nullopt; };
    (void)SumSpec::from_parts(real("p"), maybe("omega"), maybe("sigma"), maybe("tau"));
  }
  if (config.command == Command::lt_scan_continuous) {
    if (!(real("p") >= 1.0)) throw ValidationError("parameter 'p' must be at least 1");
    if (!(real("sigma") >= 0.5)) throw ValidationError("parameter 'sigma' must be at least 1/2");
  }
  if (config.command == Command::asymptotics_check) {
    const double eps = real("epsilon");
    if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("parameter 'epsilon' must lie in (0, 1/2)");
    positive("radius_factor");
  }
  return resolved;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string to_csv(const Table& t) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + field(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              out += format_number(v);
            } else if constexpr (std::is_same_v<V, std::int64_t>) {
              out += std::to_string(v);
            } else {
              out += field(v);
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultEnvelope& e) {
  json j;
  json params = json::object();
  for (const auto& [k, v] : e.config.parameters) params[k] = v;
  json formats = json::array();
  for (Format f : e.config.formats) formats.push_back(std::string(to_string(f)));
  j["config_echo"] = {{"command", std::string(to_string(e.config.command))},
                      {"parameters", params},
                      {"output_dir", e.config.output_dir.string()},
                      {"formats", formats}};
  j["tool_version"] = e.tool_version;
  j["wall_time_seconds"] = number_to_json(e.wall_time_seconds);
  j["status"] = std::string(to_string(e.status));
  j["exit_code"] = e.exit_code();
  j["error"] = e.error;
  j["columns"] = e.table.columns;
  json rows = json::array();
  for (const auto& row : e.table.rows) {
    json r = json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              r.push_back(number_to_json(v));
            } else {
              r.push_back(v);
            }
          },
          cell);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  json checks = json::array();
  for (const auto& c : e.certification_summary) {
    checks.push_back({{"check", c.name},
                      {"worst_residual", number_to_json(c.worst_residual)},
                      {"threshold", number_to_json(c.threshold)},
                      {"passed", c.passed}});
  }
  j["certification_summary"] = std::move(checks);
  j["notes"] = e.notes;
  j["files"] = e.files;
  return j.dump(2) + "\n";
}

ResultEnvelope envelope_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("envelope_from_json: ") + ex.what());
  }
  try {
    ResultEnvelope e;
    const auto& cfg = j.at("config_echo");
    const auto cmd = parse_command(cfg.at("command").get<std::string>());
    if (!cmd) throw ValidationError("envelope_from_json: unknown command");
    e.config.command = *cmd;
    for (const auto& [k, v] : cfg.at("parameters").items()) e.config.parameters[k] = v.get<std::string>();
    e.config.output_dir = cfg.at("output_dir").get<std::string>();
    e.config.formats.clear();
    for (const auto& f : cfg.at("formats")) {
      for (Format fmt : parse_formats(f.get<std::string>())) e.config.formats.insert(fmt);
    }
    e.tool_version = j.at("tool_version").get<std::string>();
    e.wall_time_seconds = number_from_json(j.at("wall_time_seconds"));
    const std::string status = j.at("status").get<std::string>();
    if (status == "ok") {
      e.status = RunStatus::ok;
    } else if (status == "validation_error") {
      e.status = RunStatus::validation_error;
    } else {
      e.status = RunStatus::certification_failure;
    }
    e.error = j.at("error").get<std::string>();
    e.table.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : r) {
        if (c.is_number_integer()) {
          row.emplace_back(c.get<std::int64_t>());
        } else if (c.is_number() || c.is_object()) {
          row.emplace_back(number_from_json(c));
        } else {
          row.emplace_back(c.get<std::string>());
        }
      }
      e.table.rows.push_back(std::move(row));
    }
    for (const auto& c : j.at("certification_summary")) {
      e.certification_summary.push_back({c.at("check").get<std::string>(), number_from_json(c.at("worst_residual")),
                                         number_from_json(c.at("threshold")), c.at("passed").get<bool>()});
    }
    e.notes = j.at("notes").get<std::vector<std::string>>();
    e.files = j.at("files").get<std::vector<std::string>>();
    return e;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("envelope_from_json: ") + ex.what());
  }
}

bool equivalent(const ResultEnvelope& a, const ResultEnvelope& b) {
  if (a.config.command != b.config.command || a.config.parameters != b.config.parameters ||
      a.config.output_dir != b.config.output_dir || a.config.formats != b.config.formats) {
    return false;
  }
  if (a.tool_version != b.tool_version || !same_double(a.wall_time_seconds, b.wall_time_seconds) ||
      a.status != b.status || a.error != b.error || a.notes != b.notes || a.files != b.files) {
    return false;
  }
  if (a.table.columns != b.table.columns || a.table.rows.size() != b.table.rows.size()) return false;
  for (std::size_t r = 0; r < a.table.rows.size(); ++r) {
    if (a.table.rows[r].size() != b.table.rows[r].size()) return false;
    for (std::size_t c = 0; c < a.table.rows[r].size(); ++c) {
      if (!same_cell(a.table.rows[r][c], b.table.rows[r][c])) return false;
    }
  }
  if (a.certification_summary.size() != b.certification_summary.size()) return false;
  for (std::size_t i = 0; i < a.certification_summary.size(); ++i) {
    const auto& x = a.certification_summary[i];
    const auto& y = b.certification_summary[i];
    if (x.name != y.name || !same_double(x.worst_residual, y.worst_residual) ||
        !same_double(x.threshold, y.threshold) || x.passed != y.passed) {
      return false;
    }
  }
  return true;
}

const std::vector<std::string>& csv_columns(Command c) {
  static const std::map<Command, std::vector<std::string>> columns{
      {Command::jacobi_spectrum, {"branch", "z_re", "z_im", "k_re", "k_im", "lambda_re", "lambda_im", "bs_residual"}},
      {Command::schrodinger_spectrum,
       {"j", "family", "mu_re", "mu_im", "k_re", "k_im", "lambda_re", "lambda_im", "residual"}},
      {Command::lt_scan_discrete, {"n", "norm", "raw_sum", "scaled_sum", "eigencount"}},
      {Command::lt_scan_continuous, {"h", "norm", "raw_sum", "scaled_sum", "eigencount", "lower_bound"}},
      {Command::asymptotics_check,
       {"n", "predictions", "matched", "unmatched_fraction", "max_error", "log_n_over_n", "min_dist", "dist_floor"}},
      {Command::figure1,
       {"branch", "z_re", "z_im", "multiplicity", "in_disk", "admissible", "inside_region", "lambda_re", "lambda_im"}},
      {Command::figure2,
       {"j", "family", "mu_re", "mu_im", "k_re", "k_im", "lambda_re", "lambda_im", "residual"}},
  };
  return columns.at(c);
}

std::vector<std::string> write_outputs_atomically(const std::filesystem::path& output_dir,
                                                  const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  const fs::path staging = output_dir / (".staging-" + std::to_string(::getpid()) + "-" + std::to_string(stamp));
  fs::create_directory(staging);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{staging};

  for (const auto& [name, content] : files) {
    std::ofstream out(staging / name, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw Error("failed to write " + (staging / name).string());
  }
  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    fs::rename(staging / name, output_dir / name);
    written.push_back(name);
  }
  return written;
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace barrier
