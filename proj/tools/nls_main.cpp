#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nls_cli/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nls: principal eigenvalues of nonlocal cooperative operators"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  for (const auto& name : nls::cli::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory for CSV files and verdict.json")->required();
  }
  app.add_subcommand("list-presets", "print kernel, field and experiment catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nls::cli::kExitError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "list-presets") {
    nls::cli::list_presets(std::cout);
    return 0;
  }
  return nls::cli::run_experiment(chosen->get_name(), config, out_dir, std::cout, std::cerr);
}
