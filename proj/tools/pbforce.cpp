#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "pbf/runner.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, int threads,
        const std::string& out_dir) {
  pbf::RunConfig cfg;
  try {
    cfg = pbf::parse_config(config_path);
  } catch (const pbf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (threads > 0) cfg.threads = threads;
  if (threads == 0 && cfg.threads == 0) {
    if (const char* env = std::getenv("PBFORCE_THREADS")) cfg.threads = std::atoi(env);
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  try {
    if (command == "solve") return pbf::cmd_solve(cfg, std::cout);
    if (command == "energy") return pbf::cmd_energy(cfg, std::cout);
    if (command == "force") return pbf::cmd_force(cfg, std::cout);
    if (command == "validate") return pbf::cmd_validate(cfg, std::cout);
  } catch (const pbf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pbf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "unknown command: " << command << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dielectric-boundary Poisson-Boltzmann solver and boundary-force validator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;

  for (const char* name : {"solve", "energy", "force", "validate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "run configuration file")->required();
    sub->add_option("--threads", threads, "worker thread count (default: hardware)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
  }

  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), config_path, threads, out_dir);
}
