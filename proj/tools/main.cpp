// SPDX-License-Identifier: Apache-2.0
//
// beamsched command line: Monte Carlo sweeps over transmit power and ADC
// resolution, the verification suite, and the quantizer distortion table.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamsched/acceptance.hpp"
#include "beamsched/harness.hpp"
#include "beamsched/quantize.hpp"

namespace {

int run_sweep_command(const std::string& preset, const std::string& config_path,
                      const CLI::App* cmd, const std::vector<double>& rho_db,
                      const std::vector<int>& bits, int trials, std::uint64_t seed,
                      const std::vector<std::string>& algorithms, double epsilon, int n_ol,
                      const std::vector<std::string>& n_ol_overrides, int antennas, int users,
                      int scheduled, int paths, int stored_beams, double spacing, int threads,
                      const std::string& out, bool quiet) {
  using beamsched::SweepSpec;

  // Precedence: preset, then config file, then explicit flags.
  SweepSpec spec = beamsched::figure_preset(preset);
  if (!config_path.empty()) beamsched::apply_config_file(spec, config_path);

  auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };
  if (given("--rho-db")) spec.rho_grid_db = rho_db;
  if (given("--bits")) spec.bits_grid = bits;
  if (given("--trials")) spec.trials = trials;
  if (given("--seed")) spec.master_seed = seed;
  if (given("--algorithms")) spec.algorithms = algorithms;
  if (given("--epsilon")) spec.base_config.ortho_threshold = epsilon;
  if (given("--n-ol")) spec.base_config.beam_overlap_limit = n_ol;
  if (given("--antennas")) spec.base_config.num_antennas = antennas;
  if (given("--users")) spec.base_config.num_users = users;
  if (given("--scheduled")) spec.base_config.num_scheduled = scheduled;
  if (given("--paths")) spec.base_config.num_paths = paths;
  if (given("--stored-beams")) spec.base_config.num_stored_beams = stored_beams;
  if (given("--spacing")) spec.base_config.antenna_spacing_ratio = spacing;
  if (given("--threads")) spec.num_threads = threads;
  if (given("--n-ol-override")) {
    spec.n_ol_overrides.clear();
    for (const auto& item : n_ol_overrides) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw CLI::ValidationError("--n-ol-override", "expected bits:n_ol, got '" + item + "'");
      spec.n_ol_overrides[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
    }
  }

  const beamsched::SweepResult result = beamsched::run_sweep(spec);
  beamsched::emit_csv(result, out);
  if (!quiet) {
    beamsched::print_summary(result, std::cout);
    std::cout << result.rows.size() << " rows written to " << out << "\n";
  }
  return 0;
}

int run_verify_command(bool full_scale, int criterion) {
  beamsched::AcceptanceOptions opts;
  opts.full_scale = full_scale;
  opts.only = criterion;
  const auto results = beamsched::run_acceptance(opts);
  const int failures = beamsched::report_acceptance(results, std::cout);
  std::cout << (results.size() - failures) << "/" << results.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

int run_quantizer_table(int max_bits) {
  std::printf("bits  beta            alpha           source\n");
  for (int b = 1; b <= max_bits; ++b) {
    const double beta = beamsched::beta_for_bits(b);
    std::printf("%4d  %.12f  %.12f  %s\n", b, beta, 1.0 - beta,
                b <= 5 ? "lloyd-max" : "high-rate formula");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink multi-user MIMO scheduling simulator for receivers with low-resolution ADCs"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write CSV");
  std::string preset = "desk";
  std::string config_path;
  std::vector<double> rho_db;
  std::vector<int> bits;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> algorithms;
  double epsilon = 0.0;
  int n_ol = 0;
  std::vector<std::string> n_ol_overrides;
  int antennas = 0, users = 0, scheduled = 0, paths = 0, stored_beams = 0;
  double spacing = 0.0;
  int threads = 0;
  std::string out = "sweep.csv";
  bool quiet = false;

  sweep->add_option("--preset", preset, "Starting preset: fig2, fig3, fig4, desk")
      ->default_val("desk");
  sweep->add_option("--config", config_path, "Key = value config file applied over the preset");
  sweep->add_option("--rho-db", rho_db, "Transmit power grid in dB");
  sweep->add_option("--bits", bits, "ADC resolution grid (bits per component)");
  sweep->add_option("--trials", trials, "Monte Carlo trials");
  sweep->add_option("--seed", seed, "Master seed");
  sweep->add_option("--algorithms", algorithms,
                    "Scheduler ids: css greedy sus beam-select random exhaustive");
  sweep->add_option("--epsilon", epsilon, "Semi-orthogonality threshold");
  sweep->add_option("--n-ol", n_ol, "Beam overlap limit");
  sweep->add_option("--n-ol-override", n_ol_overrides, "Per-bits overlap limit, bits:n_ol");
  sweep->add_option("--antennas", antennas, "Receive antennas");
  sweep->add_option("--users", users, "Candidate users");
  sweep->add_option("--scheduled", scheduled, "Users to schedule");
  sweep->add_option("--paths", paths, "Propagation paths per user");
  sweep->add_option("--stored-beams", stored_beams, "Dominant beams stored per user");
  sweep->add_option("--spacing", spacing, "Antenna spacing over wavelength");
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware)");
  sweep->add_option("--out", out, "Output CSV path")->capture_default_str();
  sweep->add_flag("--quiet", quiet, "Suppress the summary table");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  bool full_scale = false;
  int criterion = 0;
  verify->add_flag("--full-scale", full_scale, "Include the long full-scale gain check");
  verify->add_option("--criterion", criterion, "Run a single criterion (1-10)");

  // quantizer-table
  auto* table = app.add_subcommand("quantizer-table", "Print the regenerated distortion table");
  int max_bits = 12;
  table->add_option("--max-bits", max_bits, "Largest bit width to print")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed())
      return run_sweep_command(preset, config_path, sweep, rho_db, bits, trials, seed,
                               algorithms, epsilon, n_ol, n_ol_overrides, antennas, users,
                               scheduled, paths, stored_beams, spacing, threads, out, quiet);
    if (verify->parsed()) return run_verify_command(full_scale, criterion);
    if (table->parsed()) return run_quantizer_table(max_bits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
