// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "beamsched/config.hpp"
#include "beamsched/schedulers.hpp"

namespace beamsched {

// Monte Carlo experiment description. For every trial one channel
// realization is drawn from a seed derived from (master_seed, trial) and
// shared by every algorithm and grid point, so comparisons are paired.
struct SweepSpec {
  SystemConfig base_config;
  std::vector<double> rho_grid_db;     // transmit power grid, dB
  std::vector<int> bits_grid;          // ADC resolution grid
  int trials = 1;
  std::map<int, int> n_ol_overrides;   // bits -> beam_overlap_limit
  std::vector<std::string> algorithms; // scheduler ids
  std::uint64_t master_seed = 1;
  int num_threads = 0;                 // 0 = hardware concurrency
};

struct SweepRow {
  std::string algorithm;
  double rho_db = 0.0;
  int bits = 0;
  int trial = 0;
  double sum_rate = 0.0;
  int num_selected = 0;
  std::vector<int> candidate_sizes;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

bool is_known_algorithm(std::string_view id);
const std::vector<std::string>& known_algorithms();

// The beamspace channel matrix every algorithm sees in the given trial.
Eigen::MatrixXcd trial_channels(const SweepSpec& spec, int trial);

// Runs every (trial, bits, rho, algorithm) combination. Trials execute
// concurrently; rows come back sorted by (algorithm, bits, rho, trial), so
// the result is bit-identical for a given master_seed regardless of the
// thread count.
SweepResult run_sweep(const SweepSpec& spec);

// CSV with header algorithm,rho_db,bits,trial,sum_rate,num_selected,
// candidate_sizes. Doubles carry full round-trip precision;
// candidate_sizes is a quoted semicolon-joined list; LF line endings.
void emit_csv(const SweepResult& result, const std::string& path);

// Mean sum rate with standard error per (algorithm, bits, rho) cell.
void print_summary(const SweepResult& result, std::ostream& os);

// Bundled experiment presets:
//   fig2: sum rate vs transmit power at 2-bit ADCs, full scale
//   fig3: sum rate vs ADC bits at 5 dB, overlap limit widening with bits
//   fig4: candidate-set sizes per stage at 6 dB, 2-bit ADCs
//   desk: reduced-scale variant of fig2 for quick runs
SweepSpec figure_preset(const std::string& name);

// Applies "key = value" lines (# comments allowed) onto spec. Unknown keys
// fail. CLI flags are meant to override anything set here.
void apply_config_file(SweepSpec& spec, const std::string& path);

}  // namespace beamsched
