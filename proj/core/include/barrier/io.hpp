#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "barrier/jacobi_barrier.hpp"

namespace barrier {

enum class Command {
  jacobi_spectrum,
  schrodinger_spectrum,
  lt_scan_discrete,
  lt_scan_continuous,
  asymptotics_check,
  figure1,
  figure2,
};

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;
const std::vector<Command>& all_commands();

enum class Format { csv, json, svg };

std::string_view to_string(Format f) noexcept;
std::set<Format> parse_formats(std::string_view csv_list);

enum class ParamKind { integer, real, integer_list, real_list, choice };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  bool required = false;
  std::string default_value;  // empty: no default
  std::vector<std::string> choices;
  std::string help;
};

const std::vector<ParamSpec>& command_schema(Command c);
std::string_view command_help(Command c);

struct RunConfig {
  Command command = Command::jacobi_spectrum;
  std::map<std::string, std::string> parameters;
  std::filesystem::path output_dir = ".";
  std::set<Format> formats = {Format::csv, Format::json};
};

/// Throws ValidationError on unknown keys, missing required keys, malformed
/// values, or out-of-range values. Returns the parameters with defaults filled in.
std::map<std::string, std::string> validate(const RunConfig& config);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CertificationCheck {
  std::string name;
  double worst_residual = 0.0;
  double threshold = 0.0;
  bool passed = true;
};

enum class RunStatus { ok, validation_error, certification_failure };

std::string_view to_string(RunStatus s) noexcept;

struct ResultEnvelope {
  RunConfig config;  // parameters echoed with defaults resolved
  std::string tool_version;
  double wall_time_seconds = 0.0;
  RunStatus status = RunStatus::ok;
  std::string error;
  Table table;
  std::vector<CertificationCheck> certification_summary;
  std::vector<std::string> notes;
  std::vector<std::string> files;

  int exit_code() const noexcept;
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

std::string to_csv(const Table& t);
std::string to_json(const ResultEnvelope& e);
ResultEnvelope envelope_from_json(std::string_view text);

/// Field-by-field equality with NaN == NaN.
bool equivalent(const ResultEnvelope& a, const ResultEnvelope& b);

/// Pinned CSV header for each command's main table.
const std::vector<std::string>& csv_columns(Command c);

/// Writes every file into a staging directory under output_dir and renames
/// them into place once all of them are complete.
std::vector<std::string> write_outputs_atomically(const std::filesystem::path& output_dir,
                                                  const std::vector<std::pair<std::string, std::string>>& files);

/// Validates, dispatches, and writes the requested formats. Computational
/// failures are captured in the envelope; validation failures throw.
ResultEnvelope run(const RunConfig& config);

/// Spectrum lookup through the optional on-disk cache named by BARRIER_SPECTRA_CACHE.
DiscreteSpectrum cached_discrete_spectrum(const DiscreteBarrier& op, double tol);

std::uint64_t fnv1a(std::string_view bytes) noexcept;

}  // namespace barrier
