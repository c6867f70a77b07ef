
#include "propforge/commands.hpp"
#include "propforge/config.hpp"

namespace propforge::cli {

void add_config_flags(CLI::App& sub, ConfigFlags& flags) {
  sub.add_option("--config", flags.config, "JSON config file (partial configs merge onto the defaults)");
  sub.add_option("--set", flags.sets, "Override one config value, e.g. --set generator.width=128")
      ->allow_extra_args(false);
  sub.add_option("--threads", flags.threads, "Worker threads (0 = PROPFORGE_THREADS or hardware)");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic event-camera propeller data, detection metrics and tracking simulation", "propforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "propforge 0.1.0");

  const std::vector<Command> commands{register_generate(app), register_sweep(app), register_analyze(app),
                                      register_simulate(app), register_verify(app)};

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  for (const auto& cmd : commands) {
    if (!cmd.sub->parsed()) continue;
    try {
      return cmd.run(Streams{out, err});
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kRuntimeError;
    }
  }
  return kUsageError;
}

}  // namespace propforge::cli
