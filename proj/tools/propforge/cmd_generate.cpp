#include <memory>
#include <optional>
#include <tuple>

#include "propforge/commands.hpp"
#include "propforge/common/json_fields.hpp"
#include "propforge/common/sha256.hpp"
#include "propforge/config.hpp"
#include "propforge/dataset/dataset.hpp"

namespace propforge::cli {

using nlohmann::json;

namespace {

struct GenerateArgs {
  ConfigFlags cfg;
  std::string out;
  std::optional<std::uint64_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backgrounds;
  std::optional<int> width;
  std::optional<int> height;
};

json generate_defaults() {
  return {{"count", 100}, {"seed", 0}, {"generator", dataset::to_json(dataset::GeneratorConfig{})}};
}

}  // namespace

Command register_generate(CLI::App& app) {
  auto args = std::make_shared<GenerateArgs>();
  auto* sub = app.add_subcommand("generate", "Write a labeled synthetic event-frame dataset");
  add_config_flags(*sub, args->cfg);
  sub->add_option("--out", args->out, "Output directory")->required();
  sub->add_option("--count", args->count, "Number of samples");
  sub->add_option("--seed", args->seed, "Dataset seed");
  sub->add_option("--backgrounds", args->backgrounds, "'procedural' or a directory of PNG images");
  sub->add_option("--width", args->width, "Frame width");
  sub->add_option("--height", args->height, "Frame height");

  return {sub, [args](Streams io) {
            json flags = json::object();
            if (args->count) flags["count"] = *args->count;
            if (args->seed) flags["seed"] = *args->seed;
            if (args->backgrounds) flags["generator"]["backgrounds"] = *args->backgrounds;
            if (args->width) flags["generator"]["width"] = *args->width;
            if (args->height) flags["generator"]["height"] = *args->height;
            const json resolved = resolve_config(generate_defaults(), args->cfg.config, flags, args->cfg.sets);
            const auto [count, seed, gen] = parse_config([&] {
              StrictReader r(resolved, "generate");
              const auto c = r.get<std::uint64_t>("count");
              const auto s = r.get<std::uint64_t>("seed");
              auto g = dataset::generator_config_from_json(r.at("generator"));
              r.finish();
              return std::tuple{c, s, g};
            });
            const std::filesystem::path out = args->out;
            echo_config(out, resolved);
            dataset::generate_dataset(count, seed, out, gen, args->cfg.threads);
            const auto manifest_path = out / "manifest.json";
            io.out << "manifest: " << manifest_path.string() << "\n";
            io.out << "sha256: " << sha256_file(manifest_path) << "\n";
            return static_cast<int>(kOk);
          }};
}

}  // namespace propforge::cli
