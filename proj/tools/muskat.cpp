#include <iostream>

#include <CLI11.hpp>

#include "muskat/cli/app.hpp"
#include "muskat/cli/config.hpp"

int main(int argc, char** argv) {
  using namespace muskat::cli;
  CLI::App app{"Pseudo-spectral simulation and verification for the elastic Muskat hierarchy"};
  app.require_subcommand(1);

  std::string schema = "Config keys:\n";
  for (const auto& [key, help] : config_schema()) schema += "  " + key + ": " + help + "\n";
  app.footer(schema);

  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory or a parameter sweep");
  simulate->add_option("--config", sim.config, "config file")->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "output directory (overrides output_dir)");
  simulate->add_option("--sweep", sim.sweeps, "KEY=V1,V2,... (repeat for a second key)");
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "overrides rng_seed");

  VerifyOptions ver;
  std::uint64_t ver_seed = 0;
  auto* verify = app.add_subcommand("verify", "run a verification and write verify_<kind>.json");
  verify->add_option("kind", ver.kind, "dtn | flux | bounds | decay")
      ->required()
      ->check(CLI::IsMember({"dtn", "flux", "bounds", "decay"}));
  verify->add_option("--config", ver.config, "config file")->check(CLI::ExistingFile);
  verify->add_option("--out", ver.out, "output directory");
  verify->add_option("--trajectory", ver.trajectory, "decay: re-check an existing trajectory directory")
      ->check(CLI::ExistingDirectory);
  auto* ver_seed_opt = verify->add_option("--seed", ver_seed, "overrides rng_seed");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "write SVG charts for a trajectory directory");
  plot_cmd->add_option("dir", plot.dir, "trajectory directory")->required();
  plot_cmd->add_flag("--log", plot.log_scale, "logarithmic y axis for norms and energy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*simulate) {
    if (*sim_seed_opt) sim.seed = sim_seed;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  if (*verify) {
    if (*ver_seed_opt) ver.seed = ver_seed;
    return cmd_verify(ver, std::cout, std::cerr);
  }
  return cmd_plot(plot, std::cout, std::cerr);
}
