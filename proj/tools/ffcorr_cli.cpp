// ffcorr: batch front end. Usage: ffcorr <command> [--config FILE] [flags];
// flags override config-file values.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ffcorr/config.hpp"
#include "ffcorr/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact correlation experiments for multiplicative functions over F_q[x]"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");

  std::string command;
  std::string commands;
  for (const char* c : ffcorr::kCommands) commands += std::string(commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->required();

  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "key=value experiment file");

  // Flags that map one-to-one onto config keys.
  const std::vector<std::pair<std::string, std::string>> simple = {
      {"--p", "p"},
      {"--n", "n"},
      {"--n-range", "n_range"},
      {"--domain", "domain"},
      {"--functions", "functions"},
      {"--shifts", "shifts"},
      {"--gamma", "gamma"},
      {"--depth", "depth"},
      {"--cutoff", "cutoff"},
      {"--t-grid", "t_grid"},
      {"--output,-o", "output"},
      {"--cache-dir", "cache_dir"},
      {"--partitions", "partitions"},
      {"--max-deg", "max_deg"},
      {"--poly", "poly"},
      {"--y", "y"},
      {"--C,--bound-constant", "bound_constant"},
      {"--bv-t", "bv_t"},
  };
  std::vector<std::optional<std::string>> values(simple.size());
  for (std::size_t i = 0; i < simple.size(); ++i) {
    app.add_option(simple[i].first, values[i], "config key " + simple[i].second);
  }
  std::optional<std::string> f, g, h, h1, h2;
  app.add_option("--f", f, "first function spec");
  app.add_option("--g", g, "second function spec");
  app.add_option("--h", h, "single shift (chowla: h2 with h1 = 0; tk, diagnostics: h)");
  app.add_option("--h1", h1, "first shift");
  app.add_option("--h2", h2, "second shift");
  bool timing = false;
  bool print_config = false;
  app.add_flag("--timing", timing, "write measured seconds into report CSVs");
  app.add_flag("--print-config", print_config, "print the effective configuration and continue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  ffcorr::ExperimentConfig config;
  try {
    if (config_path) config = ffcorr::load_config(*config_path);
    for (std::size_t i = 0; i < simple.size(); ++i) {
      if (values[i]) ffcorr::set_config_value(config, simple[i].second, *values[i]);
    }
    if (f || g) {
      if (!f) throw ffcorr::ValidationError("--g needs --f");
      config.functions = {*f};
      if (g) config.functions.push_back(*g);
    }
    if (h) config.shifts = {*h};
    if (h1 || h2) config.shifts = {h1.value_or("0"), h2.value_or("0")};
    if (timing) config.timing = true;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (print_config) std::cout << ffcorr::format_config(config);
  return ffcorr::dispatch(command, config, std::cout, std::cerr);
}
