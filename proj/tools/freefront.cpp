// Command-line front end: one subcommand per run mode, plus plot regeneration.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "freefront/config.hpp"
#include "freefront/errors.hpp"
#include "freefront/plots.hpp"
#include "freefront/runner.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::size_t workers = 0;
  bool workers_set = false;
  bool seedless = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory (overrides outputs.dir)");
  cmd->add_option_function<std::size_t>(
      "--workers",
      [&f](const std::size_t& n) {
        f.workers = n;
        f.workers_set = true;
      },
      "sweep worker threads (0 = hardware concurrency)");
  cmd->add_flag("--seedless", f.seedless, "reject any default that depends on the host");
  cmd->add_flag("--quiet", f.quiet, "no progress output");
}

int fail(freefront::ErrorKind kind, const std::string& message) {
  std::cerr << freefront::error_json(kind, message);
  return freefront::exit_code_for(kind);
}

int run_mode(freefront::RunMode mode, const Flags& f) {
  freefront::RunConfig cfg;
  try {
    if (!f.config.empty()) {
      cfg = freefront::load_config(f.config);
    } else {
      cfg.validate();
    }
  } catch (const freefront::Error& e) {
    return fail(e.kind(), e.what());
  }
  if (!f.config.empty() && cfg.mode != mode) {
    if (!f.quiet) {
      std::cerr << "note: config mode '" << freefront::to_string(cfg.mode) << "' overridden by '"
                << freefront::to_string(mode) << "'\n";
    }
  }
  cfg.mode = mode;

  freefront::RunOptions opts;
  if (!f.out.empty()) opts.out = fs::path(f.out);
  if (f.workers_set) opts.workers = f.workers;
  opts.seedless = f.seedless;
  if (!f.quiet) opts.log = &std::cout;

  const freefront::RunStatus st = freefront::run(cfg, opts);
  if (st.exit_code != 0) {
    std::cerr << st.error;
  } else if (!f.quiet) {
    std::cout << "artifacts in " << st.out_dir.string() << '\n';
  }
  return st.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freefront: predator-prey model with two free boundaries"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    freefront::RunMode mode;
  };
  const Entry entries[] = {
      {"simulate", "single run: fronts, snapshots, verdict, limit and barrier checks",
       freefront::RunMode::Simulate},
      {"bisect", "bracket the spreading threshold in mu", freefront::RunMode::Bisect},
      {"sweep", "parameter sweep producing a phase diagram", freefront::RunMode::Sweep},
      {"steady", "steady logistic boundary value problem", freefront::RunMode::Steady},
      {"limits", "long-time limit iteration table and closed-form targets",
       freefront::RunMode::Limits},
  };
  Flags flags;
  std::optional<freefront::RunMode> chosen;
  for (const auto& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, flags);
    cmd->callback([&chosen, mode = e.mode] { chosen = mode; });
  }
  std::string plot_dir;
  CLI::App* plots = app.add_subcommand("plots", "re-render SVGs from an artifact directory");
  plots->add_option("dir", plot_dir, "artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (plots->parsed()) {
    try {
      for (const auto& p : freefront::emit_plots(plot_dir)) std::cout << p.string() << '\n';
      return 0;
    } catch (const freefront::Error& e) {
      return fail(e.kind(), e.what());
    }
  }
  return run_mode(*chosen, flags);
}
