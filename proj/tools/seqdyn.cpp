#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "seqdyn/cli/presets.hpp"
#include "seqdyn/cli/runner.hpp"
#include "seqdyn/cli/validate.hpp"

namespace {

using namespace seqdyn;
using namespace seqdyn::cli;

struct Source {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const Source& src) {
  if (src.config_path.empty() == src.preset.empty()) {
    throw ParseError("config", 0, "give exactly one of --config or --preset");
  }
  ExperimentConfig cfg;
  if (!src.preset.empty()) {
    const auto p = find_preset(src.preset);
    if (!p) throw ParseError("preset", 0, "unknown preset '" + src.preset + "'");
    cfg = parse_config(p->config);
  } else {
    cfg = load_config(src.config_path);
  }
  if (src.seed) cfg.seed = src.seed;
  return cfg;
}

int exit_code_of(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return kExitBudget;
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  return kExitInternal;
}

int list_presets() {
  for (const auto& p : presets()) {
    std::cout << p.name << "\n  " << p.description << "\n  probes: " << p.anchor << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence entropy and weak-limit experiments on exact rational dynamics", "seqdyn"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Source src;
  std::string out_dir;
  std::size_t jobs = 1;
  std::string format;
  bool atoms = false;

  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--config", src.config_path, "experiment config file");
    sub->add_option("--preset", src.preset, "built-in preset name (see list-presets)");
    sub->add_option("--seed", src.seed, "Monte Carlo seed, overrides the config");
  };

  auto* run = app.add_subcommand("run", "run an experiment and write its result tables");
  add_source(run);
  run->add_option("--out-dir", out_dir, "output directory, overrides the config");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(std::size_t{1}, std::size_t{256}));
  run->add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_flag("--atoms", atoms, "include join atoms in the JSON detail");

  auto* validate = app.add_subcommand("validate", "check a config and predict its budgets without computing");
  add_source(validate);

  app.add_subcommand("list-presets", "print the built-in experiment catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (app.got_subcommand("list-presets")) return list_presets();

    const ExperimentConfig cfg = load(src);
    if (app.got_subcommand("validate")) {
      const ValidationReport rep = validate_experiment(cfg);
      for (const auto& line : rep.lines) (rep.ok() ? std::cout : std::cerr) << line << "\n";
      return rep.exit_code;
    }

    const OutputFormat fmt = format.empty() ? cfg.format : *lookup(format_names(), format);
    const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
    const ResultEnvelope env = run_experiment(cfg, RunOptions{jobs, atoms});
    for (const auto& w : env.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& path : write_outputs(env, cfg, dir, fmt)) std::cout << path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_of(e);
  }
}
