// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "beamsched/config.hpp"
#include "beamsched/rates.hpp"
#include "beamsched/rng.hpp"

namespace beamsched {

// Outcome of one scheduler run. selected holds user indices in selection
// order; candidate_sizes holds the candidate-set size at the start of each
// selection stage (empty for algorithms without a per-stage candidate set).
// rates covers exactly the returned selection; a scheduler may legitimately
// return fewer than num_scheduled users when its filters empty the pool.
struct ScheduleTrace {
  std::vector<int> selected;
  std::vector<int> candidate_sizes;
  RateReport rates;
  std::string algorithm;
};

// Optional per-stage (candidate, score) log for diagnostics and tests.
struct StageScores {
  std::vector<std::vector<std::pair<int, double>>> per_stage;
};

// Channel structure-based scheduling: per stage, pick the approximate-SINR
// argmax over the candidate set evaluated on [H(selected), h_k], then drop
// candidates failing the cosine semi-orthogonality test against the
// Gram-Schmidt residual or sharing more than beam_overlap_limit dominant
// beams with the newly selected user.
ScheduleTrace schedule_css(const Eigen::MatrixXcd& all_beam_channels,
                           const SystemConfig& cfg, const AqnmParams& params,
                           StageScores* scores = nullptr);

// Reference scheduler: per stage, pick the candidate maximizing the exact
// AQNM-ZF sum rate of selected + candidate. Rank-collapsed candidates are
// skipped, never fatal.
ScheduleTrace schedule_greedy(const Eigen::MatrixXcd& all_beam_channels,
                              const SystemConfig& cfg, const AqnmParams& params,
                              StageScores* scores = nullptr);

// Classical semi-orthogonal user selection: per stage, pick the candidate
// whose component orthogonal to the span of previous picks has maximum norm,
// then apply the cosine filter. Selection ignores quantization;
// report_params only price the returned set.
ScheduleTrace schedule_sus(const Eigen::MatrixXcd& all_beam_channels,
                           const SystemConfig& cfg, const AqnmParams& report_params);

// Beam-selection baseline (documented variant): per stage, pick the
// candidate with the largest single-beam magnitude, then drop candidates
// whose dominant-beam sets overlap the pick's in more than
// beam_overlap_limit indices. Selection ignores quantization.
ScheduleTrace schedule_beam_select(const Eigen::MatrixXcd& all_beam_channels,
                                   const SystemConfig& cfg,
                                   const AqnmParams& report_params);

// Uniform random selection of num_scheduled distinct users.
ScheduleTrace schedule_random(const Eigen::MatrixXcd& all_beam_channels,
                              const SystemConfig& cfg,
                              const AqnmParams& report_params, Rng& rng);

// Exact argmax of the sum rate by enumerating all subsets of size
// num_scheduled. Refuses instances with more than 1e6 subsets.
ScheduleTrace schedule_exhaustive(const Eigen::MatrixXcd& all_beam_channels,
                                  const SystemConfig& cfg,
                                  const AqnmParams& params);

}  // namespace beamsched
