// barrier-spectra <command> [--param value ...] --out DIR --format csv,json,svg

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "barrier/errors.hpp"
#include "barrier/io.hpp"
#include "barrier/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Certified spectra and Lieb-Thirring sums for rectangular barrier operators"};
  app.set_help_flag("--help", "print this help message and exit");
  app.set_version_flag("--version", barrier::kToolVersion);
  app.require_subcommand(1);

  struct Slot {
    barrier::Command command;
    CLI::App* sub;
    std::map<std::string, std::string> values;
    std::string out = ".";
    std::string formats = "csv,json";
  };
  std::vector<Slot> slots;
  slots.reserve(barrier::all_commands().size());
  for (barrier::Command c : barrier::all_commands()) {
    slots.push_back({c, nullptr, {}, ".", "csv,json"});
  }
  for (auto& slot : slots) {
    slot.sub = app.add_subcommand(std::string(barrier::to_string(slot.command)),
                                  std::string(barrier::command_help(slot.command)));
    for (const auto& spec : barrier::command_schema(slot.command)) {
      std::string help = spec.help;
      if (!spec.choices.empty()) {
        help += " {";
        for (std::size_t i = 0; i < spec.choices.size(); ++i) help += (i ? "," : "") + spec.choices[i];
        help += "}";
      }
      if (!spec.default_value.empty()) help += " [default " + spec.default_value + "]";
      if (spec.required) help += " (required)";
      // Defaults and ranges are applied by barrier::validate, not here.
      slot.sub->add_option_function<std::string>(
          "--" + spec.name, [&slot, name = spec.name](const std::string& v) { slot.values[name] = v; }, help);
    }
    slot.sub->add_option("--out", slot.out, "output directory")->required();
    slot.sub->add_option("--format", slot.formats, "comma-separated subset of csv,json,svg")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (auto& slot : slots) {
    if (!slot.sub->parsed()) continue;
    try {
      barrier::RunConfig config;
      config.command = slot.command;
      config.parameters = slot.values;
      config.output_dir = slot.out;
      config.formats = barrier::parse_formats(slot.formats);
      const barrier::ResultEnvelope env = barrier::run(config);
      std::cout << barrier::to_string(config.command) << ": " << barrier::to_string(env.status) << " ("
                << env.table.rows.size() << " rows, " << env.wall_time_seconds << " s)\n";
      for (const auto& c : env.certification_summary) {
        std::cout << "  " << (c.passed ? "ok  " : "FAIL") << ' ' << c.name << " worst=" << c.worst_residual
                  << " threshold=" << c.threshold << '\n';
      }
      for (const auto& n : env.notes) std::cout << "  " << n << '\n';
      for (const auto& f : env.files) std::cout << "  wrote " << (config.output_dir / f).string() << '\n';
      if (!env.error.empty()) std::cerr << "error: " << env.error << '\n';
      return env.exit_code();
    } catch (const barrier::ValidationError& e) {
      std::cerr << "validation error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 1;
}
