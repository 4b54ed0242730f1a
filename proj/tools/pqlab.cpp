#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pqlab/app.hpp"
#include "pqlab/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"pqlab: numerical experiments for the critical (p,q)-Laplacian problem"};
  cli.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::int64_t seed = 0;
  int jobs = 0;
  for (const char* name : {"classify", "bubble-rates", "level-sweep", "eigen", "sobolev",
                           "pohozaev", "nonexist-scan"}) {
    CLI::App* sub = cli.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (key = value lines)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const CLI::App* sub = cli.get_subcommands().front();
  try {
    const pqlab::app::Command command = pqlab::app::parse_command(sub->get_name());
    pqlab::app::Overrides overrides;
    if (sub->count("--out")) overrides.output_dir = out_dir;
    if (sub->count("--seed")) overrides.seed = static_cast<std::uint64_t>(seed);
    if (sub->count("--jobs")) overrides.jobs = jobs;
    const auto config =
        pqlab::app::resolve_config(command, pqlab::app::load_config(config_path), overrides);
    for (const std::string& file : pqlab::app::run(config)) {
      std::cout << (std::filesystem::path(config.output_dir) / file).string() << '\n';
    }
    return 0;
  } catch (const pqlab::Error& e) {
    std::cerr << "pqlab: " << pqlab::to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == pqlab::ErrorKind::ConfigError ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "pqlab: " << e.what() << '\n';
    return kExitNumerical;
  }
}
