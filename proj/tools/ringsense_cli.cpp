// Command-line front end: each subcommand maps onto one solver operation
// plus CSV/JSON export. Exit codes: 0 success, 1 solver failure, 2 usage or
// config errors.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>

#include "ringsense/runner.hpp"

namespace {

struct CliState {
  std::string config_path;
  std::string preset;
  std::string out_dir = "runs";
  bool force = false;
  int jobs = 0;
};

ringsense::RunConfig resolve_config(const CliState& st) {
  if (!st.config_path.empty()) return ringsense::load_config(st.config_path);
  if (st.preset.empty() || st.preset == "paper-defaults")
    return ringsense::paper_defaults();
  throw std::runtime_error("unknown preset '" + st.preset + "'");
}

int execute(ringsense::Command cmd, const CliState& st) {
  ringsense::RunConfig cfg;
  try {
    cfg = resolve_config(st);
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}, {"kind", "config"}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  try {
    ringsense::RunOptions opt;
    opt.out_dir = st.out_dir;
    opt.force = st.force;
    opt.jobs = st.jobs;
    const ringsense::RunResult res = ringsense::run(cmd, cfg, opt);
    std::cout << "wrote " << res.dir.string() << " (" << res.computed
              << " computed, " << res.reused << " reused";
    if (res.failed > 0) std::cout << ", " << res.failed << " failed";
    std::cout << ")\n";
    return res.failed > 0 ? 1 : 0;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}, {"kind", "solver"}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ring-condensate rotation-sensing noise simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name
  CliState st;
  app.add_option("--config", st.config_path, "config file (key/value tables)");
  app.add_option("--preset", st.preset, "named preset: paper-defaults");
  app.add_option("--out", st.out_dir, "output directory");
  app.add_flag("--force", st.force, "recompute existing points");
  app.add_option("--jobs", st.jobs, "worker threads (0 = all cores)");

  using ringsense::Command;
  struct Sub {
    const char* name;
    const char* desc;
    Command cmd;
  };
  const Sub subs[] = {
      {"spectrum", "homodyne noise spectral density (monochromatic drive)",
       Command::Spectrum},
      {"bae-spectrum", "zeroth-component spectrum (bichromatic drive)",
       Command::BaeSpectrum},
      {"sensitivity", "zeta(omega) and its optimum", Command::Sensitivity},
      {"budget", "noise budget vs input power with SQL references",
       Command::Budget},
      {"bistability", "steady-state branch counts along a sweep",
       Command::Bistability},
      {"steady-state", "steady-state report for the configured scheme",
       Command::SteadyStateInfo},
      {"angle-scan", "S^phi over the detection-angle x frequency grid",
       Command::AngleScan},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.desc);
  auto* validate = app.add_subcommand("validate", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (validate->parsed()) {
    ringsense::RunConfig cfg;
    try {
      cfg = resolve_config(st);
    } catch (const std::exception& e) {
      nlohmann::json err{{"error", e.what()}, {"kind", "config"}};
      std::cerr << err.dump() << "\n";
      return 2;
    }
    return ringsense::run_validation(cfg, std::cout) == 0 ? 0 : 1;
  }
  for (const auto& s : subs)
    if (app.get_subcommand(s.name)->parsed()) return execute(s.cmd, st);
  return 2;
}
