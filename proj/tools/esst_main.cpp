// Command-line front end: simulate, design, verify.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "esst/commands.hpp"

int main(int argc, char** argv) {
  using namespace esst;

  CLI::App app{"Enantio-specific state transfer simulator and protocol designer"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const std::map<std::string, ModelKind> models{
      {"effective", ModelKind::Effective}, {"full", ModelKind::Full}, {"lab", ModelKind::Lab}};
  const std::map<std::string, EnantiomerSelection> enantiomers{
      {"L", EnantiomerSelection::L}, {"R", EnantiomerSelection::R}, {"both", EnantiomerSelection::Both}};

  SimulateOptions sim;
  ModelKind model = ModelKind::Effective;
  EnantiomerSelection enantiomer = EnantiomerSelection::Both;
  auto* simulate = app.add_subcommand("simulate", "Propagate both enantiomers and write traces");
  simulate->add_option("--config", sim.config, "Run configuration file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "Output directory")->required();
  auto* model_opt = simulate->add_option("--model", model, "Override the configured model")
                        ->transform(CLI::CheckedTransformer(models, CLI::ignore_case));
  auto* enantiomer_opt = simulate->add_option("--enantiomer", enantiomer, "Override the enantiomer selection")
                             ->transform(CLI::CheckedTransformer(enantiomers));

  DesignOptions des;
  std::string config_path;
  double omega_eff = 0.0;
  auto* design = app.add_subcommand("design", "Solve a transfer protocol and print a JSON report");
  design->add_option("mode", des.mode,
                     "way_one, way_one_keep_L, way_one_keep_R, way_two or way_two_mirrored")
      ->required();
  design->add_option("integers", des.integers, "N (way one) or N_L N_R (way two)");
  design->add_option("--keep", des.keep, "Enantiomer kept in |1> for way_one (L or R)");
  auto* design_config = design->add_option("--config", config_path, "Run configuration file")
                            ->check(CLI::ExistingFile);
  auto* omega_opt = design->add_option("--omega-eff", omega_eff, "Omega_eff in 2pi x MHz");
  design_config->excludes(omega_opt);

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Run the invariant checks on a configuration");
  verify->add_option("--config", ver.config, "Run configuration file")->required()->check(CLI::ExistingFile);
  verify->add_option("--out", ver.out, "Directory for verify.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (simulate->parsed()) {
    if (*model_opt) sim.model = model;
    if (*enantiomer_opt) sim.enantiomer = enantiomer;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  if (design->parsed()) {
    if (*design_config) des.config = config_path;
    if (*omega_opt) des.omega_eff_mhz = omega_eff;
    return cmd_design(des, std::cout, std::cerr);
  }
  return cmd_verify(ver, std::cout, std::cerr);
}
