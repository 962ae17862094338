#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "commands.hpp"
#include "rnlw/errors.hpp"

int main(int argc, char** argv) {
  using namespace rnlw;
  CLI::App app{"rnlw: randomized radial energy-critical wave experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RNLW_VERSION);

  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool refined = false;

  const char* names[][2] = {
      {"randomize", "sample randomized data and write per-shell norms"},
      {"evolve", "integrate the forced quintic wave equation"},
      {"decompose", "in/out profile decomposition of the initial data"},
      {"functionals", "energy, Morawetz, flux and forcing norms of a trajectory"},
      {"mc", "Monte Carlo Strichartz regressions and the delta sweep"},
      {"verify", "run the acceptance criteria; exit 0 iff all pass"},
  };
  for (auto& n : names) {
    auto* sub = app.add_subcommand(n[0], n[1]);
    sub->add_option("-c,--config", config, "YAML configuration file")->required();
    sub->add_option("-s,--set", overrides, "override a config key, dotted.key=value (repeatable)");
    sub->add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
    sub->add_flag("--refined", refined, "add the refined-resolution oracle comparisons");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (!out_dir.empty()) overrides.push_back("output_dir=\"" + out_dir + "\"");
  if (refined) overrides.push_back("verify.refined=true");

  try {
    const auto cfg = cli::load_config(config, overrides);
    return cli::run_command(cmd, cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "rnlw %s: %s\n", cmd.c_str(), e.what());
    return cli::kExitConfig;
  } catch (const SolverParamError& e) {
    std::fprintf(stderr, "rnlw %s: %s\n", cmd.c_str(), e.what());
    return cli::kExitConfig;
  } catch (const InsufficientTrials& e) {
    std::fprintf(stderr, "rnlw %s: %s\n", cmd.c_str(), e.what());
    return cli::kExitConfig;
  } catch (const InadmissibleTriple& e) {
    std::fprintf(stderr, "rnlw %s: %s\n", cmd.c_str(), e.what());
    return cli::kExitConfig;
  } catch (const GridError& e) {
    std::fprintf(stderr, "rnlw %s: %s\n", cmd.c_str(), e.what());
    return cli::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rnlw %s: %s\n", cmd.c_str(), e.what());
    return cli::kExitFail;
  }
}
