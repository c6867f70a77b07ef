#include <memory>

#include "propforge/commands.hpp"
#include "propforge/config.hpp"
#include "propforge/dataset/dataset.hpp"

namespace propforge::cli {

Command register_verify(CLI::App& app) {
  auto dir = std::make_shared<std::string>();
  auto* sub = app.add_subcommand("verify", "Recompute and check every digest in a dataset manifest");
  sub->add_option("dataset", *dir, "Dataset directory")->required();
  return {sub, [dir](Streams io) {
            const auto report = dataset::verify_dataset(*dir);
            for (const auto& p : report.problems) io.err << "mismatch: " << p << "\n";
            io.out << (report.ok ? "ok" : "FAILED") << ": " << report.files_checked << " files checked\n";
            return static_cast<int>(report.ok ? kOk : kRuntimeError);
          }};
}

}  // namespace propforge::cli
