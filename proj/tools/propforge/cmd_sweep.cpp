#include <cstdio>
#include <memory>
#include <optional>
#include <set>

#include "propforge/commands.hpp"
#include "propforge/common/io.hpp"
#include "propforge/common/json_fields.hpp"
#include "propforge/config.hpp"
#include "propforge/eval/sweep.hpp"

namespace propforge::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kDetectors{"oracle", "baseline", "heatmap-dir"};

struct SweepArgs {
  ConfigFlags cfg;
  std::string out;
  std::optional<std::string> detector;
  std::optional<std::string> heatmaps;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  bool require_events{false};
  bool emit_datasets{false};
};

json sweep_defaults() {
  return {{"sweep", eval::to_json(eval::SweepSpec{})},
          {"detector", "oracle"},
          {"heatmap_dir", ""},
          {"require_events", false},
          {"emit_datasets", false}};
}

}  // namespace

Command register_sweep(CLI::App& app) {
  auto args = std::make_shared<SweepArgs>();
  auto* sub = app.add_subcommand("sweep", "Detection rate per parameter cell, one axis varied at a time");
  add_config_flags(*sub, args->cfg);
  sub->add_option("--out", args->out, "Output directory")->required();
  sub->add_option("--detector", args->detector, "oracle, baseline or heatmap-dir");
  sub->add_option("--heatmaps", args->heatmaps, "Prediction root for heatmap-dir: <root>/<cell>/{index:06}.pred.png");
  sub->add_option("--samples", args->samples, "Frames per cell");
  sub->add_option("--seed", args->seed, "Sweep seed");
  sub->add_option("--threshold", args->threshold, "Heatmap confidence threshold");
  sub->add_flag("--require-events", args->require_events, "Oracle skips propellers without events");
  sub->add_flag("--emit-datasets", args->emit_datasets, "Also write each cell's frames as a dataset");

  return {sub, [args](Streams io) {
            json flags = json::object();
            if (args->detector) flags["detector"] = *args->detector;
            if (args->heatmaps) flags["heatmap_dir"] = *args->heatmaps;
            if (args->samples) flags["sweep"]["samples_per_cell"] = *args->samples;
            if (args->seed) flags["sweep"]["seed"] = *args->seed;
            if (args->threshold) flags["sweep"]["detector"]["threshold"] = *args->threshold;
            if (args->require_events) flags["require_events"] = true;
            if (args->emit_datasets) flags["emit_datasets"] = true;
            const json resolved = resolve_config(sweep_defaults(), args->cfg.config, flags, args->cfg.sets);

            struct Parsed {
              eval::SweepSpec spec;
              std::string detector;
              std::string heatmap_dir;
              bool require_events;
              bool emit;
            };
            const Parsed p = parse_config([&] {
              StrictReader r(resolved, "sweep command");
              Parsed q{eval::sweep_spec_from_json(r.at("sweep")), r.get<std::string>("detector"),
                       r.get<std::string>("heatmap_dir"), r.get<bool>("require_events"), r.get<bool>("emit_datasets")};
              r.finish();
              return q;
            });
            if (!kDetectors.count(p.detector)) throw UsageError("unknown detector '" + p.detector + "'");
            if (p.detector == "heatmap-dir" && p.heatmap_dir.empty()) {
              throw UsageError("heatmap-dir detector needs --heatmaps");
            }

            const std::filesystem::path out = args->out;
            echo_config(out, resolved);
            if (p.emit) eval::emit_sweep_datasets(p.spec, out / "datasets", args->cfg.threads);

            eval::HeatmapDetector det;
            if (p.detector == "oracle") det = eval::oracle_detector(p.require_events);
            else if (p.detector == "baseline") det = eval::baseline_detector();
            else det = eval::heatmap_dir_detector(p.heatmap_dir);

            const auto table = eval::run_sweep(p.spec, det, args->cfg.threads);
            write_file_atomic(out / "sweep.csv", table.csv());
            write_file_atomic(out / "sweep.json", table.to_json().dump(2) + "\n");

            std::size_t na = 0;
            for (const auto& c : table.cells) {
              char line[128];
              if (c.dr) {
                std::snprintf(line, sizeof line, "%-10s %8g  DR %6.2f%%  (%llu propellers)\n", c.id.param.c_str(),
                              c.id.value, 100.0 * *c.dr, static_cast<unsigned long long>(c.n_samples));
              } else {
                ++na;
                std::snprintf(line, sizeof line, "%-10s %8g  DR     NA\n", c.id.param.c_str(), c.id.value);
                io.err << "warning: " << c.id.name() << ": " << c.error << "\n";
              }
              io.out << line;
            }
            if (na) io.err << "warning: " << na << " cell(s) without a result\n";
            io.out << "wrote " << (out / "sweep.csv").string() << "\n";
            return static_cast<int>(kOk);
          }};
}

}  // namespace propforge::cli
