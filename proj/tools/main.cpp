#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"adclin: memoryless ADC linearizer design and evaluation"};
  app.require_subcommand(1);

  adclin::cli::CliInvocation inv;
  std::string config;
  std::string output_dir;
  if (const char* env = std::getenv("ADCLIN_OUTPUT_DIR")) output_dir = env;
  if (output_dir.empty()) output_dir = ".";
  int threads = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config, "Experiment config JSON (default: built-in defaults)");
    sub->add_option("-o,--output-dir", output_dir, "Output directory (env ADCLIN_OUTPUT_DIR)");
    sub->add_option("-s,--set", inv.overrides, "Config override dotted.key=value (repeatable)");
    sub->add_option("-t,--threads", threads, "Worker threads (0 = all cores); outputs are identical at any value");
    sub->add_flag("!--no-timestamp", inv.include_timestamp, "Omit timestamp fields from metadata.json");
  };

  auto* design = app.add_subcommand("design", "Design a linearizer from the training set");
  add_common(design);
  design->add_option("--linearizer", inv.linearizer, "proposed or hammerstein")
      ->check(CLI::IsMember({"proposed", "hammerstein"}));
  int branches = -1;
  design->add_option("-n,--branches", branches, "N (proposed) or K (hammerstein); default design.n_branches");

  auto* eval = app.add_subcommand("eval", "Evaluate saved params over the ensemble");
  add_common(eval);
  std::string params;
  eval->add_option("-p,--params", params, "params.json written by `design`")->required();

  auto* sweep_b = app.add_subcommand("sweep-branches", "SNDR versus number of nonlinear branches");
  add_common(sweep_b);
  auto* sweep_m = app.add_subcommand("sweep-mults", "SNDR versus multiplications per sample");
  add_common(sweep_m);

  auto* spectrum = app.add_subcommand("spectrum", "Spectra before and after linearization");
  add_common(spectrum);
  spectrum->add_option("-n,--branches", branches, "N (default design.n_branches)");

  auto* gen = app.add_subcommand("gen", "Write a reference/distorted signal pair as CSV");
  add_common(gen);
  gen->add_option("-i,--index", inv.signal_index, "-1 = training signal, otherwise ensemble index");

  CLI11_PARSE(app, argc, argv);

  inv.subcommand = app.get_subcommands().front()->get_name();
  inv.config_path = config;
  inv.output_dir = output_dir;
  inv.params_path = params;
  if (threads >= 0) inv.threads = threads;
  if (branches >= 0) inv.branches = branches;
  return adclin::cli::run_cli(inv, std::cout, std::cerr);
}
