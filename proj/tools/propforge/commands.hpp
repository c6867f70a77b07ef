#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace propforge::cli {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Common to every config-driven subcommand.
struct ConfigFlags {
  std::string config;
  std::vector<std::string> sets;
  unsigned threads{0};
};

void add_config_flags(CLI::App& sub, ConfigFlags& flags);

/// Each register_* adds a subcommand; `run` executes it after parsing and
/// returns an exit code.
struct Command {
  CLI::App* sub;
  std::function<int(Streams)> run;
};
Command register_generate(CLI::App& app);
Command register_sweep(CLI::App& app);
Command register_analyze(CLI::App& app);
Command register_simulate(CLI::App& app);
Command register_verify(CLI::App& app);

/// Entry point shared by the binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace propforge::cli
