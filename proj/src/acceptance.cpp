// SPDX-License-Identifier: Apache-2.0
#include "beamsched/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "beamsched/channel.hpp"
#include "beamsched/harness.hpp"
#include "beamsched/quantize.hpp"
#include "beamsched/rates.hpp"
#include "beamsched/schedulers.hpp"

namespace beamsched {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      detail << "FAILED " << msg << "; ";
    }
  }
  void note(const std::string& msg) { detail << msg << "; "; }
};

std::vector<int> random_support(Rng& rng, int num_beams, int size) {
  std::vector<int> pool(num_beams);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<int> pick(i, num_beams - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(size);
  return pool;
}

Eigen::MatrixXcd random_beamspace(Rng& rng, int num_antennas, int num_users, int num_paths) {
  Eigen::MatrixXcd antenna_domain(num_antennas, num_users);
  for (int k = 0; k < num_users; ++k)
    antenna_domain.col(k) = draw_user_channel(rng, num_antennas, num_paths).antenna_vector;
  return to_beamspace(antenna_domain, dft_codebook(num_antennas));
}

// Per-trial sum rates of one (algorithm, bits, rho) cell, indexed by trial.
std::vector<double> cell_rates(const SweepResult& result, const std::string& alg, int bits,
                               double rho_db) {
  std::map<int, double> by_trial;
  for (const auto& row : result.rows)
    if (row.algorithm == alg && row.bits == bits && row.rho_db == rho_db)
      by_trial[row.trial] = row.sum_rate;
  std::vector<double> out;
  out.reserve(by_trial.size());
  for (const auto& [trial, rate] : by_trial) out.push_back(rate);
  return out;
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

// Standard error of the mean of paired differences a - b.
double paired_stderr(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(n - 1) / static_cast<double>(n));
}

void criterion_closed_form(Check& c) {
  Rng rng(101);
  const int num_beams = 32;
  std::uniform_real_distribution<double> log_gamma(-1.0, 2.0);
  std::uniform_real_distribution<double> log_rho(-2.0, 2.0);
  std::uniform_int_distribution<int> paths(1, 8);
  std::uniform_int_distribution<int> bits(1, 9);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double gamma = std::pow(10.0, log_gamma(rng));
    const double rho = std::pow(10.0, log_rho(rng));
    const int L = paths(rng);
    const AqnmParams params = AqnmParams::from_bits(bits(rng));

    VirtualChannelSpec spec;
    spec.support = random_support(rng, num_beams, L);
    spec.norm_sq = gamma;
    spec.spread = PowerSpread::equal;
    spec.num_beams = num_beams;
    const Eigen::MatrixXcd h = make_virtual_channel(spec, rng);

    const double measured = user_rate(h, 0, rho, params);
    const double expected = closed_form_single_user_rate(gamma, L, rho, params.alpha);
    worst = std::max(worst, std::abs(measured - expected) / std::abs(expected));
  }
  c.detail << "max rel err " << worst;
  c.require(worst <= 1e-9, "closed-form mismatch above 1e-9");
}

void criterion_power_limit(Check& c) {
  Rng rng(102);
  const int L = 4;
  const double gamma = 1e6;
  for (int b : {1, 2, 3}) {
    const AqnmParams params = AqnmParams::from_bits(b);
    VirtualChannelSpec spec;
    spec.support = {0, 1, 2, 3};
    spec.norm_sq = gamma;
    spec.spread = PowerSpread::equal;
    spec.num_beams = 16;
    const Eigen::MatrixXcd h = make_virtual_channel(spec, rng);
    const double measured = user_rate(h, 0, 1.0, params);
    const double limit = rate_limit_infinite_power(L, params.alpha);
    const double rel = std::abs(measured - limit) / limit;
    c.detail << "b=" << b << " rel gap " << rel << "  ";
    c.require(rel <= 0.01, "rate at norm 1e6 off the limit by more than 1%");
  }
}

void criterion_equal_spread_argmax(Check& c) {
  const int L = 4;
  const int num_beams = 16;
  const int steps = 20;
  const std::vector<int> support = {0, 2, 5, 11};

  const struct { double gamma, rho; int bits; } cases[] = {
      {4.0, db_to_linear(5.0), 2}, {1.0, db_to_linear(0.0), 1}, {10.0, db_to_linear(10.0), 3}};

  for (const auto& cs : cases) {
    const AqnmParams params = AqnmParams::from_bits(cs.bits);
    auto rate_of = [&](const std::array<int, 4>& alloc) {
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(num_beams, 1);
      for (int l = 0; l < L; ++l)
        h(support[l], 0) = std::sqrt(cs.gamma * alloc[l] / steps);
      return user_rate(h, 0, cs.rho, params);
    };

    const double equal_rate = rate_of({5, 5, 5, 5});
    double best = -1.0;
    // All compositions of `steps` units over the four support entries.
    for (int a = 0; a <= steps; ++a)
      for (int b = 0; b <= steps - a; ++b)
        for (int d = 0; d <= steps - a - b; ++d)
          best = std::max(best, rate_of({a, b, d, steps - a - b - d}));

    c.detail << "gamma=" << cs.gamma << " b=" << cs.bits << " excess " << best - equal_rate
             << "  ";
    c.require(best <= equal_rate + 1e-9, "a non-equal allocation beats equal spread");
  }
}

void criterion_disjoint_equality(Check& c) {
  Rng rng(104);
  const int num_beams = 16;
  const int L = 4;
  const int num_scheduled = 3;

  double worst = 0.0;
  for (double gamma : {0.5, 2.0, 10.0}) {
    for (double rho : {1.0, 10.0}) {
      for (int b : {1, 2, 3}) {
        const AqnmParams params = AqnmParams::from_bits(b);
        Eigen::MatrixXcd channels(num_beams, num_scheduled);
        for (int k = 0; k < num_scheduled; ++k) {
          VirtualChannelSpec spec;
          spec.support = {4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3};
          spec.norm_sq = gamma;
          spec.spread = PowerSpread::equal;
          spec.num_beams = num_beams;
          channels.col(k) = make_virtual_channel(spec, rng);
        }
        const double bound = closed_form_single_user_rate(gamma, L, rho, params.alpha);
        for (int k = 0; k < num_scheduled; ++k)
          worst = std::max(worst, std::abs(user_rate(channels, k, rho, params) - bound));
      }
    }
  }
  c.detail << "max abs gap " << worst;
  c.require(worst <= 1e-9, "per-user rate does not meet the disjoint-support bound");
}

void criterion_sinr_identity(Check& c) {
  Rng rng(105);
  std::uniform_real_distribution<double> log_rho(-1.0, 1.5);
  std::uniform_int_distribution<int> bits(1, 5);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::MatrixXcd h = random_beamspace(rng, 32, 1, 4);
    const double rho = std::pow(10.0, log_rho(rng));
    const AqnmParams params = AqnmParams::from_bits(bits(rng));

    const Eigen::MatrixXcd w = zf_combiner(h);
    const Eigen::VectorXd noise_diag = quantization_covariance(h, rho, params);
    const double a2 = params.alpha * params.alpha;
    const double exact =
        a2 * rho / (w.col(0).cwiseAbs2().dot(noise_diag) + a2 * w.col(0).squaredNorm());
    const double approx = approx_sinr(h, 0, rho, params);
    worst = std::max(worst, std::abs(approx - exact) / exact);
  }
  c.detail << "max rel err " << worst;
  c.require(worst <= 1e-10, "approximate SINR deviates from the exact single-user SINR");
}

void criterion_near_optimality(Check& c) {
  SystemConfig cfg;
  cfg.num_antennas = 16;
  cfg.num_users = 8;
  cfg.num_scheduled = 3;
  cfg.num_paths = 4;
  cfg.num_stored_beams = 8;
  cfg.ortho_threshold = 0.75;
  cfg.beam_overlap_limit = 6;
  cfg.transmit_power = db_to_linear(5.0);
  const AqnmParams params = AqnmParams::from_bits(2);

  Rng rng(106);
  double greedy_ratio = 0.0;
  double css_ratio = 0.0;
  const int instances = 200;
  for (int i = 0; i < instances; ++i) {
    const Eigen::MatrixXcd channels =
        random_beamspace(rng, cfg.num_antennas, cfg.num_users, cfg.num_paths);
    const double best = schedule_exhaustive(channels, cfg, params).rates.sum;
    greedy_ratio += schedule_greedy(channels, cfg, params).rates.sum / best;
    css_ratio += schedule_css(channels, cfg, params).rates.sum / best;
  }
  greedy_ratio /= instances;
  css_ratio /= instances;
  c.detail << "greedy/opt " << greedy_ratio << ", css/opt " << css_ratio;
  c.require(greedy_ratio >= 0.95, "greedy below 95% of the exhaustive optimum");
  c.require(css_ratio >= 0.90, "css below 90% of the exhaustive optimum");
}

SweepSpec desk_spec() {
  SweepSpec spec;
  spec.base_config.num_antennas = 64;
  spec.base_config.num_users = 100;
  spec.base_config.num_scheduled = 8;
  spec.base_config.num_paths = 4;
  spec.base_config.num_stored_beams = 8;
  spec.base_config.ortho_threshold = 0.5;
  spec.base_config.beam_overlap_limit = 3;
  spec.trials = 200;
  return spec;
}

void criterion_power_trend(Check& c, bool full_scale) {
  SweepSpec spec = desk_spec();
  spec.rho_grid_db = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  spec.bits_grid = {2};
  spec.algorithms = {"greedy", "css", "sus", "random"};
  spec.master_seed = 107;
  const SweepResult result = run_sweep(spec);

  for (double rho_db : spec.rho_grid_db) {
    const auto greedy = cell_rates(result, "greedy", 2, rho_db);
    const auto css = cell_rates(result, "css", 2, rho_db);
    const auto sus = cell_rates(result, "sus", 2, rho_db);
    const auto random = cell_rates(result, "random", 2, rho_db);
    const double mg = mean_of(greedy);
    const double mc = mean_of(css);
    const double ms = mean_of(sus);
    const double mr = mean_of(random);

    std::ostringstream point;
    point << "rho=" << rho_db << " [g " << mg << ", c " << mc << ", s " << ms << ", r " << mr
          << "]";
    c.require(mg >= mc - paired_stderr(greedy, css), point.str() + ": greedy < css beyond 1 SE");
    c.require(mc >= ms - paired_stderr(css, sus), point.str() + ": css < sus beyond 1 SE");
    c.require(ms >= mr - paired_stderr(sus, random), point.str() + ": sus < random beyond 1 SE");
    c.require(mc >= 0.95 * mg, point.str() + ": css below 95% of greedy");
    if (rho_db == 20.0) {
      c.detail << "css/random at 20 dB = " << mc / mr << "; ";
      c.require(mc >= 1.12 * mr, "css gain over random at 20 dB below 12%");
    }
  }

  if (full_scale) {
    SweepSpec full;
    full.rho_grid_db = {20.0};
    full.bits_grid = {2};
    full.trials = 200;
    full.algorithms = {"css", "random"};
    full.master_seed = 1007;
    const SweepResult fr = run_sweep(full);
    const double mc = mean_of(cell_rates(fr, "css", 2, 20.0));
    const double mr = mean_of(cell_rates(fr, "random", 2, 20.0));
    const double gain = mc / mr - 1.0;
    c.detail << "full-scale css/random gain " << gain << "; ";
    c.require(gain >= 0.16 && gain <= 0.28, "full-scale gain outside 22% +/- 6pp");
  } else {
    c.detail << "full-scale gain check skipped (enable with --full-scale); ";
  }
}

void criterion_bits_trend(Check& c) {
  SweepSpec spec = desk_spec();
  spec.rho_grid_db = {5.0};
  spec.bits_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  spec.n_ol_overrides = {{1, 2}, {2, 2}, {3, 2}, {4, 3}, {5, 3}, {6, 4}, {7, 4}, {8, 5}, {9, 5}};
  spec.algorithms = {"css", "sus"};
  spec.master_seed = 108;
  const SweepResult result = run_sweep(spec);

  auto gap_at = [&](int bits) {
    return mean_of(cell_rates(result, "css", bits, 5.0)) -
           mean_of(cell_rates(result, "sus", bits, 5.0));
  };
  const double gap2 = gap_at(2);
  const double gap8 = gap_at(8);
  const double css8 = mean_of(cell_rates(result, "css", 8, 5.0));
  c.detail << "gap b=2 " << gap2 << ", gap b=8 " << gap8 << ", css b=8 " << css8;
  c.require(std::abs(gap8) < 0.02 * css8, "css-sus gap at b=8 not below 2% of css");
  c.require(gap2 > std::abs(gap8), "low-resolution gap not larger than high-resolution gap");
}

void criterion_candidate_shrinkage(Check& c) {
  SweepSpec spec;  // paper-scale defaults
  spec.rho_grid_db = {6.0};
  spec.bits_grid = {2};
  spec.trials = 100;
  spec.algorithms = {"greedy", "css", "sus"};
  spec.master_seed = 109;
  const SweepResult result = run_sweep(spec);
  const int num_users = spec.base_config.num_users;
  const int num_scheduled = spec.base_config.num_scheduled;

  // Mean candidate-set size per stage over the trials that reached it.
  auto stage_means = [&](const std::string& alg) {
    std::vector<double> sums(num_scheduled, 0.0);
    std::vector<int> counts(num_scheduled, 0);
    for (const auto& row : result.rows) {
      if (row.algorithm != alg) continue;
      for (std::size_t i = 0; i < row.candidate_sizes.size(); ++i) {
        sums[i] += row.candidate_sizes[i];
        counts[i] += 1;
      }
    }
    std::vector<double> means(num_scheduled, 0.0);
    for (int i = 0; i < num_scheduled; ++i)
      means[i] = counts[i] ? sums[i] / counts[i] : 0.0;
    return means;
  };

  const auto css = stage_means("css");
  const auto sus = stage_means("sus");
  const auto greedy = stage_means("greedy");

  c.detail << "css stage sizes [";
  for (int i = 0; i < num_scheduled; ++i) c.detail << (i ? " " : "") << css[i];
  c.detail << "], sus [";
  for (int i = 0; i < num_scheduled; ++i) c.detail << (i ? " " : "") << sus[i];
  c.detail << "]";

  for (int i = 0; i < num_scheduled; ++i) {
    const double unfiltered = static_cast<double>(num_users - i);
    c.require(std::abs(greedy[i] - unfiltered) < 1e-12, "greedy pool is not N_u - i + 1");
    c.require(css[i] <= sus[i] + 1e-9,
              "css stage " + std::to_string(i + 1) + " larger than sus");
    if (i > 0) {  // every algorithm starts from the full pool at stage 1
      c.require(css[i] < unfiltered, "css stage " + std::to_string(i + 1) + " not below greedy");
      c.require(sus[i] < unfiltered, "sus stage " + std::to_string(i + 1) + " not below greedy");
    }
  }
}

void criterion_quantizer_validation(Check& c) {
  Rng rng(110);

  // Simulated scalar quantizer distortion against the regenerated table.
  const int num_samples = 100000;
  for (int b : {1, 2, 3}) {
    Eigen::VectorXcd y(num_samples);
    for (int i = 0; i < num_samples; ++i) y(i) = draw_cn(rng);
    const QuantizedRxSample sample = simulate_quantizer(y, b, 0.5);
    const double distortion =
        (sample.analog - sample.quantized).squaredNorm() / sample.analog.squaredNorm();
    const double beta = beta_for_bits(b);
    const double rel = std::abs(distortion - beta) / beta;
    c.detail << "b=" << b << " distortion rel err " << rel << "  ";
    c.require(rel <= 0.02, "empirical distortion off beta by more than 2%");
  }

  // Quantization-noise covariance diagonal against alpha*beta*(rho|h|^2+1).
  const int num_antennas = 8;
  const int num_scheduled = 4;
  const Eigen::MatrixXcd channels = random_beamspace(rng, num_antennas, num_scheduled, 4);
  const Eigen::VectorXd row_power = channels.rowwise().squaredNorm();
  const int samples = 100000;
  for (int b : {2, 3}) {
    const AqnmParams params = AqnmParams::from_bits(b);
    for (double rho : {1.0, 10.0}) {
      const Eigen::VectorXd expected = quantization_covariance(channels, rho, params);
      Eigen::MatrixXcd symbols(num_scheduled, samples);
      Eigen::MatrixXcd rx(num_antennas, samples);
      for (int j = 0; j < samples; ++j) {
        for (int k = 0; k < num_scheduled; ++k) symbols(k, j) = draw_cn(rng);
        for (int i = 0; i < num_antennas; ++i) rx(i, j) = draw_cn(rng);
      }
      rx += std::sqrt(rho) * channels * symbols;

      double worst = 0.0;
      for (int i = 0; i < num_antennas; ++i) {
        const double comp_var = (rho * row_power(i) + 1.0) / 2.0;
        const QuantizedRxSample s = simulate_quantizer(rx.row(i).transpose(), b, comp_var);
        const double empirical =
            (s.quantized - params.alpha * s.analog).squaredNorm() / samples;
        worst = std::max(worst, std::abs(empirical - expected(i)) / expected(i));
      }
      c.detail << "b=" << b << " rho=" << rho << " max diag rel err " << worst << "  ";
      c.require(worst <= 0.10, "quantization-noise diagonal off by more than 10%");
    }
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  struct Entry {
    int id;
    const char* name;
    double max_seconds;
    std::function<void(Check&)> body;
  };
  const std::vector<Entry> entries = {
      {1, "closed-form single-user agreement", 1.0, criterion_closed_form},
      {2, "infinite-power rate limit", 1.0, criterion_power_limit},
      {3, "equal-spread allocation optimality", 10.0, criterion_equal_spread_argmax},
      {4, "disjoint-support per-user equality", 0.0, criterion_disjoint_equality},
      {5, "single-user SINR identity", 0.0, criterion_sinr_identity},
      {6, "near-optimality vs exhaustive", 60.0, criterion_near_optimality},
      {7, "sum-rate trend vs transmit power", opts.full_scale ? 0.0 : 300.0,
       [&opts](Check& c) { criterion_power_trend(c, opts.full_scale); }},
      {8, "sum-rate trend vs ADC bits", 300.0, criterion_bits_trend},
      {9, "candidate-set shrinkage per stage", 300.0, criterion_candidate_shrinkage},
      {10, "quantizer model validation", 0.0, criterion_quantizer_validation},
  };

  std::vector<CriterionResult> results;
  for (const auto& entry : entries) {
    if (opts.only != 0 && entry.id != opts.only) continue;
    CriterionResult r;
    r.id = entry.id;
    r.name = entry.name;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      entry.body(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << "exception: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.max_seconds > 0.0 && r.seconds > entry.max_seconds) {
      check.ok = false;
      check.detail << "FAILED runtime " << r.seconds << " s exceeds " << entry.max_seconds
                   << " s; ";
    }
    r.passed = check.ok;
    r.detail = check.detail.str();
    results.push_back(std::move(r));
  }
  return results;
}

int report_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
  int failures = 0;
  for (const auto& r : results) {
    char head[64];
    std::snprintf(head, sizeof(head), "[%2d] %s  ", r.id, r.passed ? "PASS" : "FAIL");
    os << head << r.name << "  (" << r.seconds << " s)";
    if (!r.detail.empty()) os << "  -- " << r.detail;
    os << '\n';
    if (!r.passed) ++failures;
  }
  return failures;
}

}  // namespace beamsched
