#include <cstdio>
#include <memory>
#include <optional>

#include "propforge/commands.hpp"
#include "propforge/common/io.hpp"
#include "propforge/common/json_fields.hpp"
#include "propforge/config.hpp"
#include "propforge/track/sim.hpp"

namespace propforge::cli {

using nlohmann::json;

namespace {

inline constexpr int kSimConfigVersion = 1;

struct SimulateArgs {
  ConfigFlags cfg;
  std::string out;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> episodes;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
};

json simulate_defaults() {
  return {{"version", kSimConfigVersion},
          {"mode", "land"},
          {"episodes", 50},
          {"seed", 1},
          {"scenario", track::to_json(track::reference_scenario())}};
}

}  // namespace

Command register_simulate(CLI::App& app) {
  auto args = std::make_shared<SimulateArgs>();
  auto* sub = app.add_subcommand("simulate", "Closed-loop follow or land episodes with the tracking controller");
  add_config_flags(*sub, args->cfg);
  sub->add_option("--out", args->out, "Optional directory for the summary, trajectories and error CSVs");
  sub->add_option("--mode", args->mode, "follow or land");
  sub->add_option("--episodes", args->episodes, "Number of seeded episodes");
  sub->add_option("--seed", args->seed, "Batch seed");
  sub->add_option("--noise", args->noise, "Noise scale (0 = noise-free)");

  return {sub, [args](Streams io) {
            json flags = json::object();
            if (args->mode) flags["mode"] = *args->mode;
            if (args->episodes) flags["episodes"] = *args->episodes;
            if (args->seed) flags["seed"] = *args->seed;
            if (args->noise) flags["scenario"]["noise"] = *args->noise;
            const json resolved = resolve_config(simulate_defaults(), args->cfg.config, flags, args->cfg.sets);

            track::SimMode mode{};
            std::uint64_t episodes = 0;
            std::uint64_t seed = 0;
            track::SimScenario scenario;
            parse_config([&] {
              StrictReader r(resolved, "simulate");
              if (r.get<int>("version") != kSimConfigVersion) throw UsageError("simulate: unsupported config version");
              mode = track::sim_mode_from_string(r.get<std::string>("mode"));
              episodes = r.get<std::uint64_t>("episodes");
              seed = r.get<std::uint64_t>("seed");
              scenario = track::sim_scenario_from_json(r.at("scenario"));
              r.finish();
              return 0;
            });

            const bool write = !args->out.empty();
            const auto batch = track::simulate_batch(scenario, mode, episodes, seed, args->cfg.threads, write);

            char line[160];
            std::snprintf(line, sizeof line, "%s: success rate %.3f (%zu/%llu)\n", std::string(to_string(mode)).c_str(),
                          batch.success_rate, batch.successes, static_cast<unsigned long long>(episodes));
            io.out << line;
            io.out << "digest: " << batch.digest << "\n";

            if (write) {
              const std::filesystem::path out = args->out;
              echo_config(out, resolved);
              json detail = json::array();
              for (std::size_t i = 0; i < batch.episodes.size(); ++i) {
                const auto& e = batch.episodes[i];
                char name[32];
                std::snprintf(name, sizeof name, "episode_%03zu", i);
                write_file_atomic(out / "episodes" / (std::string(name) + ".json"), e.trajectory.dump() + "\n");
                write_file_atomic(out / "centroid_error" / (std::string(name) + ".csv"), track::centroid_error_csv(e));
                detail.push_back({{"index", i},
                                  {"success", e.success},
                                  {"outcome", e.outcome},
                                  {"touchdown_error", e.touchdown_error},
                                  {"final_centroid_error", e.final_centroid_error},
                                  {"duration", e.duration},
                                  {"digest", e.digest}});
              }
              const json summary{{"mode", to_string(mode)},
                                 {"episodes", episodes},
                                 {"successes", batch.successes},
                                 {"success_rate", batch.success_rate},
                                 {"digest", batch.digest},
                                 {"results", detail}};
              write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
            }
            return static_cast<int>(kOk);
          }};
}

}  // namespace propforge::cli
