// SPDX-License-Identifier: Apache-2.0
#include "beamsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "beamsched/channel.hpp"

namespace beamsched {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_instance(const Eigen::MatrixXcd& channels, const SystemConfig& cfg) {
  cfg.validate();
  if (channels.cols() == 0) throw std::invalid_argument("scheduler: no user channels");
  if (channels.cols() != cfg.num_users)
    throw std::invalid_argument("scheduler: channel columns do not match num_users");
  if (channels.rows() != cfg.num_antennas)
    throw std::invalid_argument("scheduler: channel rows do not match num_antennas");
}

RateReport rates_of_selection(const Eigen::MatrixXcd& channels,
                              const std::vector<int>& selected,
                              const SystemConfig& cfg, const AqnmParams& params) {
  Eigen::MatrixXcd picked(channels.rows(), static_cast<Eigen::Index>(selected.size()));
  for (std::size_t i = 0; i < selected.size(); ++i) picked.col(i) = channels.col(selected[i]);
  return sum_rate(picked, cfg.transmit_power, params);
}

std::vector<std::vector<int>> dominant_sets(const Eigen::MatrixXcd& channels,
                                            int num_stored) {
  std::vector<std::vector<int>> sets(channels.cols());
  for (Eigen::Index k = 0; k < channels.cols(); ++k)
    sets[k] = dominant_beams(channels.col(k), num_stored);
  return sets;
}

// Both sets sorted ascending.
int overlap_count(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else { ++count; ++ia; ++ib; }
  }
  return count;
}

double cosine_against(const Eigen::VectorXcd& direction, double direction_norm,
                      const Eigen::VectorXcd& channel) {
  const double channel_norm = channel.norm();
  if (direction_norm == 0.0 || channel_norm == 0.0) return 0.0;
  return std::abs(direction.dot(channel)) / (direction_norm * channel_norm);
}

}  // namespace

ScheduleTrace schedule_css(const Eigen::MatrixXcd& channels, const SystemConfig& cfg,
                           const AqnmParams& params, StageScores* scores) {
  check_instance(channels, cfg);
  const int num_users = cfg.num_users;
  const double rho = cfg.transmit_power;
  const double one_minus_alpha = 1.0 - params.alpha;

  const auto beams = dominant_sets(channels, cfg.num_stored_beams);
  const Eigen::MatrixXd abs_sq = channels.cwiseAbs2();
  const Eigen::VectorXd norms_sq = abs_sq.colwise().sum();
  const Eigen::VectorXd quartic = abs_sq.cwiseAbs2().colwise().sum();  // sum |h_i|^4

  std::vector<int> candidates(num_users);
  std::iota(candidates.begin(), candidates.end(), 0);
  Eigen::VectorXd selected_row_power = Eigen::VectorXd::Zero(cfg.num_antennas);
  std::vector<Eigen::VectorXcd> residual_basis;

  ScheduleTrace trace;
  trace.algorithm = "css";
  while (true) {
    trace.candidate_sizes.push_back(static_cast<int>(candidates.size()));
    if (scores) scores->per_stage.emplace_back();

    // Approximate SINR of candidate k on [H(selected), h_k], with the
    // (1-alpha) factor folded into the diagonal so alpha = 1 stays finite.
    int best = -1;
    double best_score = kNegInf;
    for (int k : candidates) {
      double score = 0.0;
      if (norms_sq(k) > 0.0) {
        const double denom = one_minus_alpha * rho *
                                 (abs_sq.col(k).dot(selected_row_power) + quartic(k)) +
                             norms_sq(k);
        score = params.alpha * rho * norms_sq(k) * norms_sq(k) / denom;
      }
      if (scores) scores->per_stage.back().emplace_back(k, score);
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }

    trace.selected.push_back(best);
    candidates.erase(std::find(candidates.begin(), candidates.end(), best));

    // Gram-Schmidt residual of the pick against previously selected users.
    Eigen::VectorXcd residual = channels.col(best);
    for (const auto& f : residual_basis)
      residual -= (f.dot(residual) / f.squaredNorm()) * f;
    const double residual_norm = residual.norm();

    if (static_cast<int>(trace.selected.size()) >= cfg.num_scheduled) break;

    // Semi-orthogonality and beam-overlap filters against the new pick.
    std::vector<int> survivors;
    survivors.reserve(candidates.size());
    for (int k : candidates) {
      if (cosine_against(residual, residual_norm, channels.col(k)) >= cfg.ortho_threshold)
        continue;
      if (overlap_count(beams[best], beams[k]) > cfg.beam_overlap_limit) continue;
      survivors.push_back(k);
    }
    candidates = std::move(survivors);
    if (candidates.empty()) break;

    // A zero residual spans nothing and would poison later projections.
    if (residual_norm > 0.0) residual_basis.push_back(std::move(residual));
    selected_row_power += abs_sq.col(best);
  }

  trace.rates = rates_of_selection(channels, trace.selected, cfg, params);
  return trace;
}

ScheduleTrace schedule_greedy(const Eigen::MatrixXcd& channels, const SystemConfig& cfg,
                              const AqnmParams& params, StageScores* scores) {
  check_instance(channels, cfg);
  const double rho = cfg.transmit_power;

  std::vector<int> candidates(cfg.num_users);
  std::iota(candidates.begin(), candidates.end(), 0);

  ScheduleTrace trace;
  trace.algorithm = "greedy";
  Eigen::MatrixXcd stacked(channels.rows(), cfg.num_scheduled);
  RateReport final_report;
  for (int stage = 0; stage < cfg.num_scheduled; ++stage) {
    trace.candidate_sizes.push_back(static_cast<int>(candidates.size()));
    if (scores) scores->per_stage.emplace_back();

    const auto width = static_cast<Eigen::Index>(stage + 1);
    int best = -1;
    double best_sum = kNegInf;
    RateReport best_report;
    RateReport report;
    for (int k : candidates) {
      stacked.col(stage) = channels.col(k);
      // Rank-collapsed candidate sets are infeasible, not fatal.
      const bool ok = try_sum_rate(stacked.leftCols(width), rho, params, report);
      const double value = ok ? report.sum : kNegInf;
      if (scores) scores->per_stage.back().emplace_back(k, value);
      if (ok && value > best_sum) {
        best_sum = value;
        best = k;
        best_report = report;
      }
    }
    if (best < 0) break;  // every remaining candidate collapses the rank

    stacked.col(stage) = channels.col(best);
    trace.selected.push_back(best);
    candidates.erase(std::find(candidates.begin(), candidates.end(), best));
    final_report = std::move(best_report);
  }

  trace.rates = std::move(final_report);
  return trace;
}

ScheduleTrace schedule_sus(const Eigen::MatrixXcd& channels, const SystemConfig& cfg,
                           const AqnmParams& report_params) {
  check_instance(channels, cfg);

  std::vector<int> candidates(cfg.num_users);
  std::iota(candidates.begin(), candidates.end(), 0);
  Eigen::MatrixXcd residuals = channels;

  ScheduleTrace trace;
  trace.algorithm = "sus";
  while (true) {
    trace.candidate_sizes.push_back(static_cast<int>(candidates.size()));

    int best = -1;
    double best_norm = -1.0;
    for (int k : candidates) {
      const double n = residuals.col(k).squaredNorm();
      if (n > best_norm) {
        best_norm = n;
        best = k;
      }
    }

    trace.selected.push_back(best);
    candidates.erase(std::find(candidates.begin(), candidates.end(), best));
    if (static_cast<int>(trace.selected.size()) >= cfg.num_scheduled) break;

    const Eigen::VectorXcd direction = residuals.col(best);
    const double direction_norm_sq = direction.squaredNorm();
    const double direction_norm = std::sqrt(direction_norm_sq);

    std::vector<int> survivors;
    survivors.reserve(candidates.size());
    for (int k : candidates) {
      if (cosine_against(direction, direction_norm, channels.col(k)) >= cfg.ortho_threshold)
        continue;
      survivors.push_back(k);
    }
    candidates = std::move(survivors);
    if (candidates.empty()) break;

    if (direction_norm_sq > 0.0)
      for (int k : candidates)
        residuals.col(k) -= (direction.dot(residuals.col(k)) / direction_norm_sq) * direction;
  }

  trace.rates = rates_of_selection(channels, trace.selected, cfg, report_params);
  return trace;
}

ScheduleTrace schedule_beam_select(const Eigen::MatrixXcd& channels,
                                   const SystemConfig& cfg,
                                   const AqnmParams& report_params) {
  check_instance(channels, cfg);

  const auto beams = dominant_sets(channels, cfg.num_stored_beams);
  const Eigen::VectorXd peak = channels.cwiseAbs().colwise().maxCoeff();

  std::vector<int> candidates(cfg.num_users);
  std::iota(candidates.begin(), candidates.end(), 0);

  ScheduleTrace trace;
  trace.algorithm = "beam-select";
  while (true) {
    trace.candidate_sizes.push_back(static_cast<int>(candidates.size()));

    int best = -1;
    double best_peak = -1.0;
    for (int k : candidates) {
      if (peak(k) > best_peak) {
        best_peak = peak(k);
        best = k;
      }
    }

    trace.selected.push_back(best);
    candidates.erase(std::find(candidates.begin(), candidates.end(), best));
    if (static_cast<int>(trace.selected.size()) >= cfg.num_scheduled) break;

    std::vector<int> survivors;
    survivors.reserve(candidates.size());
    for (int k : candidates)
      if (overlap_count(beams[best], beams[k]) <= cfg.beam_overlap_limit)
        survivors.push_back(k);
    candidates = std::move(survivors);
    if (candidates.empty()) break;
  }

  trace.rates = rates_of_selection(channels, trace.selected, cfg, report_params);
  return trace;
}

ScheduleTrace schedule_random(const Eigen::MatrixXcd& channels, const SystemConfig& cfg,
                              const AqnmParams& report_params, Rng& rng) {
  check_instance(channels, cfg);

  // Partial Fisher-Yates: the first num_scheduled slots are a uniform draw
  // of distinct users.
  std::vector<int> pool(cfg.num_users);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < cfg.num_scheduled; ++i) {
    std::uniform_int_distribution<int> pick(i, cfg.num_users - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }

  ScheduleTrace trace;
  trace.algorithm = "random";
  trace.selected.assign(pool.begin(), pool.begin() + cfg.num_scheduled);
  trace.rates = rates_of_selection(channels, trace.selected, cfg, report_params);
  return trace;
}

ScheduleTrace schedule_exhaustive(const Eigen::MatrixXcd& channels,
                                  const SystemConfig& cfg, const AqnmParams& params) {
  check_instance(channels, cfg);
  const int n = cfg.num_users;
  const int r = cfg.num_scheduled;

  double subset_count = 1.0;
  for (int i = 0; i < r; ++i) subset_count *= static_cast<double>(n - i) / (i + 1);
  if (subset_count > 1e6)
    throw std::invalid_argument("schedule_exhaustive: more than 1e6 subsets, refusing");

  std::vector<int> combo(r);
  std::iota(combo.begin(), combo.end(), 0);

  ScheduleTrace trace;
  trace.algorithm = "exhaustive";
  double best_sum = kNegInf;
  Eigen::MatrixXcd picked(channels.rows(), r);
  RateReport report;
  while (true) {
    for (int i = 0; i < r; ++i) picked.col(i) = channels.col(combo[i]);
    if (try_sum_rate(picked, cfg.transmit_power, params, report) && report.sum > best_sum) {
      best_sum = report.sum;
      trace.selected = combo;
      trace.rates = report;
    }

    // Next combination in lexicographic order.
    int i = r - 1;
    while (i >= 0 && combo[i] == n - r + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < r; ++j) combo[j] = combo[j - 1] + 1;
  }
  if (trace.selected.empty())
    throw SingularMatrixError("schedule_exhaustive: every subset is rank deficient");
  return trace;
}

}  // namespace beamsched
