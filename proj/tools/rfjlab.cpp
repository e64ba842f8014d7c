// rfjlab: run, validate and inspect random Fourier–Jacobi experiments.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rfj/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random Fourier-Jacobi series experiments"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its artifacts");
  run->add_option("config", run_path, "Config file (JSON)")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print the resolved form");
  validate->add_option("config", validate_path, "Config file (JSON)")->required();

  auto* catalog = app.add_subcommand("catalog", "List test function ids");
  auto* version = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rfj::exit_ok : rfj::exit_usage;
  }

  if (*run) return rfj::run_config_file(run_path, std::cerr);
  if (*validate) {
    const rfj::ValidationResult v = rfj::validate_file(validate_path);
    if (!v.ok()) {
      for (const std::string& e : v.errors) std::cerr << "error: " << e << '\n';
      return rfj::exit_config;
    }
    std::cout << rfj::to_json(v.config).dump(2) << '\n';
    return rfj::exit_ok;
  }
  if (*catalog) {
    std::cout << rfj::catalog_listing();
    return rfj::exit_ok;
  }
  if (*version) {
    std::cout << "rfjlab " << rfj::kVersion << '\n';
    return rfj::exit_ok;
  }
  return rfj::exit_usage;
}
