// Command-line front end: one subcommand per experiment. Settings come from
// the defaults, then --config, then individual flags.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "brittle/app.hpp"

namespace {

struct Flag {
  const char* name;  // CLI flag
  const char* key;   // config key
  const char* help;
};

const Flag kFlags[] = {
    {"--k", "k", "periods per side (odd)"},
    {"--n", "n_per_period", "pixels per period"},
    {"--rho", "rho", "butterfly width"},
    {"--delta", "delta", "height of the free band"},
    {"--t", "t", "load for localize and oracle"},
    {"--t-grid", "t_grid", "comma-separated loads for sweep"},
    {"--loads", "loads", "comma-separated load program for evolve"},
    {"--tol", "tol", "relative CG tolerance"},
    {"-o,--output", "output", "output directory"},
    {"--seed", "seed", "seed for sampled checks"},
    {"--kernel", "kernel", "auto, scalar or avx2"},
    {"--dump-lattice", "dump_lattice", "write the element catalog as gzip CSV"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brittle composite fracture experiments"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* sub;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Command> commands;
  const std::pair<const char*, const char*> names[] = {
      {"cell", "perforation cut estimate of the cell formula"},
      {"sweep", "upper bound of the surface density over a load grid"},
      {"evolve", "irreversible evolution over a load program"},
      {"localize", "crack localization at a small load"},
      {"oracle", "exhaustive search on a tiny lattice"},
      {"render", "SVG of the cell geometry and the lattice"},
  };
  for (const auto& [name, help] : names) {
    Command& cmd = commands[name];
    cmd.sub = app.add_subcommand(name, help);
    cmd.sub->add_option("--config", cmd.config_path, "key = value file")->check(CLI::ExistingFile);
    for (const Flag& f : kFlags) {
      cmd.options[f.key] = cmd.sub->add_option(f.name, cmd.values[f.key], f.help);
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, cmd] : commands) {
    if (!cmd.sub->parsed()) continue;
    brittle::RunConfig config;
    try {
      if (!cmd.config_path.empty()) brittle::apply_config_file(config, cmd.config_path);
      config.experiment = name;
      for (const Flag& f : kFlags) {
        if (cmd.options[f.key]->count() > 0) brittle::set_field(config, f.key, cmd.values[f.key]);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return brittle::kExitConfig;
    }
    return brittle::run_experiment(config, std::cerr);
  }
  return brittle::kExitConfig;
}
