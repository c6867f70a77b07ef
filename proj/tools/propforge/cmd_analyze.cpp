#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>

#include "propforge/commands.hpp"
#include "propforge/common/io.hpp"
#include "propforge/common/json_fields.hpp"
#include "propforge/config.hpp"
#include "propforge/eval/area.hpp"
#include "propforge/eval/detection.hpp"

namespace propforge::cli {

using nlohmann::json;

namespace {

struct AnalyzeArgs {
  ConfigFlags cfg;
  std::string out;
  std::optional<double> dr;
  std::vector<std::string> drones;
};

json drone_json(const eval::DroneGeometry& g, std::optional<double> published) {
  return {{"name", g.name},
          {"S", g.S},
          {"N", g.n_prop},
          {"r", g.r},
          {"rm", g.r_m},
          {"published", published ? json(*published) : json(nullptr)}};
}

json analyze_defaults() {
  json drones = json::array();
  for (const auto& d : eval::reference_drones()) drones.push_back(drone_json(d.geometry, d.published_ratio));
  return {{"dr", 0.851}, {"etas", {1, 2, 3, 4}}, {"drones", drones}};
}

}  // namespace

Command register_analyze(CLI::App& app) {
  auto args = std::make_shared<AnalyzeArgs>();
  auto* sub = app.add_subcommand("analyze", "Propeller/fiducial area ratios and drone-level detection rates");
  add_config_flags(*sub, args->cfg);
  sub->add_option("--out", args->out, "Optional directory for CSV tables");
  sub->add_option("--dr", args->dr, "Single-propeller detection rate");
  sub->add_option("--drone", args->drones, "Extra drone, e.g. S=350,N=4,r=119.4,rm=12[,name=X]");

  return {sub, [args](Streams io) {
            json flags = json::object();
            if (args->dr) flags["dr"] = *args->dr;
            json resolved = resolve_config(analyze_defaults(), args->cfg.config, flags, args->cfg.sets);
            for (const auto& text : args->drones) {
              const auto g = parse_config([&] { return eval::parse_drone(text); });
              resolved["drones"].push_back(drone_json(g, std::nullopt));
            }

            struct Row {
              eval::DroneGeometry g;
              std::optional<double> published;
            };
            double dr = 0.0;
            std::vector<int> etas;
            std::vector<Row> rows;
            parse_config([&] {
              StrictReader r(resolved, "analyze");
              dr = r.get<double>("dr");
              etas = r.get<std::vector<int>>("etas");
              for (const auto& d : r.at("drones")) {
                StrictReader dj(d, "analyze.drones[]");
                Row row;
                row.g.name = dj.get<std::string>("name");
                row.g.S = dj.get<double>("S");
                row.g.n_prop = dj.get<int>("N");
                row.g.r = dj.get<double>("r");
                row.g.r_m = dj.get<double>("rm");
                const json& pub = dj.at("published");
                if (!pub.is_null()) row.published = pub.get<double>();
                dj.finish();
                row.g.validate();
                rows.push_back(row);
              }
              r.finish();
              for (int eta : etas) eval::drone_dr(dr, eta);
              return 0;
            });

            std::ostringstream area_csv;
            area_csv << "name,S_mm,N_prop,r_mm,rm_mm,a_ratio_published,a_ratio_computed,rel_diff\n";
            io.out << "Propeller/fiducial visible area ratio\n";
            io.out << "  name              S(mm)  N   r(mm)  rm(mm)  published  computed  diff\n";
            for (const auto& row : rows) {
              const double a = eval::area_ratio(row.g);
              char line[160];
              if (row.published) {
                const double diff = (a - *row.published) / *row.published;
                std::snprintf(line, sizeof line, "  %-16s %6.1f %2d %7.1f %7.1f %10.1f %9.1f %+5.1f%%\n",
                              row.g.name.c_str(), row.g.S, row.g.n_prop, row.g.r, row.g.r_m, *row.published, a,
                              100.0 * diff);
                area_csv << row.g.name << ',' << row.g.S << ',' << row.g.n_prop << ',' << row.g.r << ',' << row.g.r_m
                         << ',' << *row.published << ',' << a << ',' << diff << '\n';
              } else {
                std::snprintf(line, sizeof line, "  %-16s %6.1f %2d %7.1f %7.1f %10s %9.1f\n", row.g.name.c_str(),
                              row.g.S, row.g.n_prop, row.g.r, row.g.r_m, "-", a);
                area_csv << row.g.name << ',' << row.g.S << ',' << row.g.n_prop << ',' << row.g.r << ',' << row.g.r_m
                         << ",," << a << ",\n";
              }
              io.out << line;
            }

            std::ostringstream dr_csv;
            dr_csv << "eta,dr,drone_dr\n";
            char head[96];
            std::snprintf(head, sizeof head, "\nDrone detection rate, single-propeller DR = %.4g\n", dr);
            io.out << head;
            for (int eta : etas) {
              const double d = eval::drone_dr(dr, eta);
              char line[64];
              std::snprintf(line, sizeof line, "  eta = %d  %.2f%%\n", eta, 100.0 * d);
              io.out << line;
              dr_csv << eta << ',' << dr << ',' << d << '\n';
            }

            if (!args->out.empty()) {
              const std::filesystem::path out = args->out;
              echo_config(out, resolved);
              write_file_atomic(out / "area_ratio.csv", area_csv.str());
              write_file_atomic(out / "drone_dr.csv", dr_csv.str());
            }
            return static_cast<int>(kOk);
          }};
}

}  // namespace propforge::cli
