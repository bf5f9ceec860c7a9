// SPDX-License-Identifier: Apache-2.0
#include "beamsched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "beamsched/channel.hpp"
#include "beamsched/quantize.hpp"

namespace beamsched {

namespace {

// Stream tag separating the random scheduler's draws from the channel draws
// of the same trial.
constexpr std::uint64_t kRandomSchedulerStream = 0x52414E44;  // "RAND"

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_sizes(const std::vector<int>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(sizes[i]);
  }
  return out;
}

void validate_spec(const SweepSpec& spec) {
  spec.base_config.validate();
  if (spec.rho_grid_db.empty()) throw std::invalid_argument("run_sweep: empty rho grid");
  if (spec.bits_grid.empty()) throw std::invalid_argument("run_sweep: empty bits grid");
  if (spec.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (spec.algorithms.empty()) throw std::invalid_argument("run_sweep: no algorithms");
  for (const auto& alg : spec.algorithms)
    if (!is_known_algorithm(alg))
      throw std::invalid_argument("run_sweep: unknown algorithm '" + alg + "'");
  for (int b : spec.bits_grid)
    if (b < 1) throw std::invalid_argument("run_sweep: bits must be >= 1");
}

ScheduleTrace run_algorithm(const std::string& id, const Eigen::MatrixXcd& channels,
                            const SystemConfig& cfg, const AqnmParams& params,
                            std::uint64_t trial_seed) {
  if (id == "css") return schedule_css(channels, cfg, params);
  if (id == "greedy") return schedule_greedy(channels, cfg, params);
  if (id == "sus") return schedule_sus(channels, cfg, params);
  if (id == "beam-select") return schedule_beam_select(channels, cfg, params);
  if (id == "exhaustive") return schedule_exhaustive(channels, cfg, params);
  if (id == "random") {
    // Re-seeded per grid point: the drawn subset is identical across the
    // grid, keeping the random baseline paired like the other algorithms.
    Rng rng(derive_seed(trial_seed, kRandomSchedulerStream));
    return schedule_random(channels, cfg, params, rng);
  }
  throw std::invalid_argument("unknown algorithm '" + id + "'");
}

std::string trim(std::string s) {
  auto is_space = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> ids = {"css",         "greedy", "sus",
                                               "beam-select", "random", "exhaustive"};
  return ids;
}

bool is_known_algorithm(std::string_view id) {
  const auto& ids = known_algorithms();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Eigen::MatrixXcd trial_channels(const SweepSpec& spec, int trial) {
  const SystemConfig& cfg = spec.base_config;
  Rng rng(derive_seed(spec.master_seed, static_cast<std::uint64_t>(trial)));
  Eigen::MatrixXcd antenna_domain(cfg.num_antennas, cfg.num_users);
  for (int k = 0; k < cfg.num_users; ++k)
    antenna_domain.col(k) =
        draw_user_channel(rng, cfg.num_antennas, cfg.num_paths, cfg.antenna_spacing_ratio)
            .antenna_vector;
  return to_beamspace(antenna_domain, dft_codebook(cfg.num_antennas));
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate_spec(spec);

  std::vector<AqnmParams> params_grid;
  params_grid.reserve(spec.bits_grid.size());
  for (int b : spec.bits_grid) params_grid.push_back(AqnmParams::from_bits(b));

  std::vector<std::vector<SweepRow>> rows_by_trial(spec.trials);

  auto run_trial = [&](int trial) {
    const std::uint64_t trial_seed =
        derive_seed(spec.master_seed, static_cast<std::uint64_t>(trial));
    const Eigen::MatrixXcd channels = trial_channels(spec, trial);
    auto& rows = rows_by_trial[trial];
    for (std::size_t bi = 0; bi < spec.bits_grid.size(); ++bi) {
      const int bits = spec.bits_grid[bi];
      SystemConfig cfg = spec.base_config;
      const auto it = spec.n_ol_overrides.find(bits);
      if (it != spec.n_ol_overrides.end()) cfg.beam_overlap_limit = it->second;
      for (double rho_db : spec.rho_grid_db) {
        cfg.transmit_power = db_to_linear(rho_db);
        for (const auto& alg : spec.algorithms) {
          ScheduleTrace trace = run_algorithm(alg, channels, cfg, params_grid[bi], trial_seed);
          rows.push_back(SweepRow{alg, rho_db, bits, trial, trace.rates.sum,
                                  static_cast<int>(trace.selected.size()),
                                  std::move(trace.candidate_sizes)});
        }
      }
    }
  };

  unsigned workers = spec.num_threads > 0 ? static_cast<unsigned>(spec.num_threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.trials));

  if (workers <= 1) {
    for (int t = 0; t < spec.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::once_flag failed_once;
    std::exception_ptr failure;
    auto worker = [&] {
      try {
        for (int t = next.fetch_add(1); t < spec.trials; t = next.fetch_add(1)) run_trial(t);
      } catch (...) {
        std::call_once(failed_once, [&] { failure = std::current_exception(); });
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepResult result;
  for (auto& rows : rows_by_trial)
    result.rows.insert(result.rows.end(), std::make_move_iterator(rows.begin()),
                       std::make_move_iterator(rows.end()));
  std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.algorithm, a.bits, a.rho_db, a.trial) <
           std::tie(b.algorithm, b.bits, b.rho_db, b.trial);
  });
  return result;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  ofs << "algorithm,rho_db,bits,trial,sum_rate,num_selected,candidate_sizes\n";
  for (const auto& row : result.rows) {
    ofs << row.algorithm << ',' << format_double(row.rho_db) << ',' << row.bits << ','
        << row.trial << ',' << format_double(row.sum_rate) << ',' << row.num_selected << ",\""
        << join_sizes(row.candidate_sizes) << "\"\n";
  }
  if (!ofs) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

void print_summary(const SweepResult& result, std::ostream& os) {
  std::map<std::tuple<std::string, int, double>, std::vector<double>> cells;
  for (const auto& row : result.rows)
    cells[{row.algorithm, row.bits, row.rho_db}].push_back(row.sum_rate);

  os << "algorithm     bits  rho_db   mean_sum_rate  std_err      trials\n";
  for (const auto& [key, values] : cells) {
    const auto& [alg, bits, rho_db] = key;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stderr_ = values.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    char line[160];
    std::snprintf(line, sizeof(line), "%-13s %4d  %6.1f   %13.6f  %11.6f  %6zu\n", alg.c_str(),
                  bits, rho_db, mean, stderr_, values.size());
    os << line;
  }
}

SweepSpec figure_preset(const std::string& name) {
  SweepSpec spec;
  SystemConfig& cfg = spec.base_config;
  spec.algorithms = {"greedy", "css", "beam-select", "sus", "random"};
  spec.master_seed = 1;

  if (name == "fig2") {
    cfg = SystemConfig{};  // 128 antennas, 200 users, 10 scheduled, L=4, Nb=8
    cfg.beam_overlap_limit = 3;
    spec.bits_grid = {2};
    for (int db = -10; db <= 20; db += 2) spec.rho_grid_db.push_back(db);
    spec.trials = 500;
  } else if (name == "fig3") {
    cfg = SystemConfig{};
    spec.rho_grid_db = {5.0};
    spec.bits_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    spec.n_ol_overrides = {{1, 2}, {2, 2}, {3, 2}, {4, 3}, {5, 3},
                           {6, 4}, {7, 4}, {8, 5}, {9, 5}};
    spec.trials = 500;
  } else if (name == "fig4") {
    cfg = SystemConfig{};
    cfg.beam_overlap_limit = 3;
    spec.rho_grid_db = {6.0};
    spec.bits_grid = {2};
    spec.trials = 100;
    spec.algorithms = {"greedy", "css", "beam-select", "sus"};
  } else if (name == "desk") {
    cfg.num_antennas = 64;
    cfg.num_users = 100;
    cfg.num_scheduled = 8;
    cfg.beam_overlap_limit = 3;
    spec.bits_grid = {2};
    for (int db = -10; db <= 20; db += 5) spec.rho_grid_db.push_back(db);
    spec.trials = 200;
  } else {
    throw std::invalid_argument("figure_preset: unknown preset '" + name +
                                "' (valid: fig2, fig3, fig4, desk)");
  }
  return spec;
}

void apply_config_file(SweepSpec& spec, const std::string& path) {
  std::ifstream ifs(path);
  if (!ifs) throw std::runtime_error("config: cannot open '" + path + "'");

  std::string line;
  int lineno = 0;
  while (std::getline(ifs, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    try {
      if (key == "antennas") spec.base_config.num_antennas = std::stoi(value);
      else if (key == "users") spec.base_config.num_users = std::stoi(value);
      else if (key == "scheduled") spec.base_config.num_scheduled = std::stoi(value);
      else if (key == "paths") spec.base_config.num_paths = std::stoi(value);
      else if (key == "stored_beams") spec.base_config.num_stored_beams = std::stoi(value);
      else if (key == "epsilon") spec.base_config.ortho_threshold = std::stod(value);
      else if (key == "n_ol") spec.base_config.beam_overlap_limit = std::stoi(value);
      else if (key == "spacing") spec.base_config.antenna_spacing_ratio = std::stod(value);
      else if (key == "trials") spec.trials = std::stoi(value);
      else if (key == "seed") spec.master_seed = std::stoull(value);
      else if (key == "threads") spec.num_threads = std::stoi(value);
      else if (key == "rho_db") {
        spec.rho_grid_db.clear();
        for (const auto& item : split_list(value)) spec.rho_grid_db.push_back(std::stod(item));
      } else if (key == "bits") {
        spec.bits_grid.clear();
        for (const auto& item : split_list(value)) spec.bits_grid.push_back(std::stoi(item));
      } else if (key == "algorithms") {
        spec.algorithms = split_list(value);
      } else if (key == "n_ol_overrides") {
        spec.n_ol_overrides.clear();
        for (const auto& item : split_list(value)) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw std::invalid_argument("expected bits:n_ol");
          spec.n_ol_overrides[std::stoi(item.substr(0, colon))] =
              std::stoi(item.substr(colon + 1));
        }
      } else {
        throw std::runtime_error(
            "config: unknown key '" + key +
            "' (valid: antennas, users, scheduled, paths, stored_beams, epsilon, n_ol, "
            "spacing, trials, seed, threads, rho_db, bits, algorithms, n_ol_overrides)");
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception&) {
      throw std::runtime_error("config: bad value for '" + key + "' on line " +
                               std::to_string(lineno));
    }
  }
}

}  // namespace beamsched
