#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "propforge/commands.hpp"
#include "propforge/common/io.hpp"
#include "propforge/config.hpp"
#include "temp_dir.hpp"

using namespace propforge;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "propforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const std::filesystem::path& p) {
  const auto bytes = read_file(p);
  return json::parse(bytes.begin(), bytes.end());
}

std::filesystem::path source_dir() {
  const char* s = std::getenv("PROPFORGE_SOURCE_DIR");
  REQUIRE(s != nullptr);
  return s;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"generate"}).code == 2);  // --out is required
  CHECK(run({"analyze", "--dr", "1.5"}).code == 2);
  CHECK(run({"verify", "/nonexistent/propforge"}).code == 1);
}

TEST_CASE("config layering") {
  json base{{"a", 1}, {"b", {{"c", 2}, {"d", {1, 2}}}}};
  cli::merge_config(base, json{{"b", {{"c", 5}}}});
  CHECK(base["b"]["c"] == 5);
  CHECK(base["b"]["d"] == json({1, 2}));
  CHECK_THROWS_AS(cli::merge_config(base, json{{"z", 1}}), cli::UsageError);
  cli::apply_set(base, "b.d.1=7");
  CHECK(base["b"]["d"][1] == 7);
  cli::apply_set(base, "a=hello");
  CHECK(base["a"] == "hello");
  CHECK_THROWS_AS(cli::apply_set(base, "b.q=1"), cli::UsageError);
  CHECK_THROWS_AS(cli::apply_set(base, "novalue"), cli::UsageError);
}

TEST_CASE("analyze prints the drone rates and area ratios") {
  const auto r = run({"analyze", "--dr", "0.851"});
  CHECK(r.code == 0);
  CHECK(r.out.find("eta = 2  97.78%") != std::string::npos);
  CHECK(r.out.find("eta = 3  99.67%") != std::string::npos);
  CHECK(r.out.find("eta = 4  99.95%") != std::string::npos);
  CHECK(r.out.find("107.9") != std::string::npos);
  CHECK(run({"analyze", "--drone", "S=350,N=4,r=119.4"}).code == 2);
}

TEST_CASE("generate is reproducible and verifiable") {
  TempDir d("cli_gen");
  const std::vector<std::string> common{"--count", "4", "--seed", "7", "--width", "128", "--height", "96"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.begin(), {"generate", "--out", (d / "a").string()});
  args_b.insert(args_b.begin(), {"generate", "--out", (d / "b").string(), "--threads", "1"});
  const auto a = run(args_a);
  const auto b = run(args_b);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(read_file(d / "a/manifest.json") == read_file(d / "b/manifest.json"));
  const auto sha_line = a.out.substr(a.out.find("sha256: "));
  CHECK(b.out.find(sha_line) != std::string::npos);

  const auto v = run({"verify", (d / "a").string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("ok: 12 files checked") != std::string::npos);

  // the echoed config reproduces the run
  const auto c = run({"generate", "--config", (d / "a/resolved_config.json").string(), "--out", (d / "c").string()});
  REQUIRE(c.code == 0);
  CHECK(read_file(d / "a/manifest.json") == read_file(d / "c/manifest.json"));

  {
    std::ofstream f(d / "a/samples/000001.frame.png", std::ios::app | std::ios::binary);
    f << 'x';
  }
  CHECK(run({"verify", (d / "a").string()}).code == 1);
}

TEST_CASE("generate edge cases") {
  TempDir d("cli_gen0");
  CHECK(run({"generate", "--out", (d / "z").string(), "--count", "0"}).code == 0);
  CHECK(run({"verify", (d / "z").string()}).out.find("ok: 0 files checked") != std::string::npos);
  CHECK(run({"generate", "--out", (d / "y").string(), "--set", "generator.bogus=1"}).code == 2);
  CHECK(run({"generate", "--out", (d / "y").string(), "--width", "4"}).code == 2);
  write_file_atomic(d / "bad.json", std::string("{\"count\": 1, \"extra\": 2}"));
  CHECK(run({"generate", "--out", (d / "y").string(), "--config", (d / "bad.json").string()}).code == 2);
  write_file_atomic(d / "broken.json", std::string("{"));
  CHECK(run({"generate", "--out", (d / "y").string(), "--config", (d / "broken.json").string()}).code == 2);
}

TEST_CASE("sweep writes csv and json") {
  TempDir d("cli_sweep");
  const auto r = run({"sweep", "--out", d.path().string(), "--samples", "2", "--set", "sweep.r_px=[30]", "--set",
                      "sweep.n_blades=[3]", "--set", "sweep.rpm=[10000]", "--set", "sweep.p_noise=[0]", "--set",
                      "sweep.p_miss=[0]", "--set", "sweep.roll_deg=[0]", "--set", "sweep.pitch_deg=[0]"});
  REQUIRE(r.code == 0);
  const auto csv = read_file(d / "sweep.csv");
  const std::string text(csv.begin(), csv.end());
  CHECK(text.rfind("param,value,dr,n_samples\n", 0) == 0);
  CHECK(text.find("r_px,30,1.000000,") != std::string::npos);
  CHECK(read_json(d / "sweep.json").is_object());
  CHECK(run({"sweep", "--out", d.path().string(), "--detector", "magic"}).code == 2);
}

TEST_CASE("simulate is deterministic and the shipped reference config matches the defaults") {
  TempDir d("cli_sim");
  const auto ref_path = source_dir() / "config/sim_reference.json";
  const json ref = read_json(ref_path);
  const auto a = run({"simulate", "--config", ref_path.string(), "--episodes", "2", "--out", (d / "a").string()});
  const auto b = run({"simulate", "--episodes", "2", "--out", (d / "b").string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  json echoed = read_json(d / "a/resolved_config.json");
  CHECK(echoed == read_json(d / "b/resolved_config.json"));
  echoed["episodes"] = ref["episodes"];
  CHECK(echoed == ref);
  CHECK(std::filesystem::exists(d / "a/episodes/episode_001.json"));
  CHECK(std::filesystem::exists(d / "a/centroid_error/episode_000.csv"));
  const json summary = read_json(d / "a/summary.json");
  CHECK(summary["episodes"] == 2);
  CHECK(run({"simulate", "--mode", "hover", "--episodes", "1"}).code == 2);
  CHECK(run({"simulate", "--set", "scenario.vehicle.lag=-1", "--episodes", "1"}).code == 2);
}
