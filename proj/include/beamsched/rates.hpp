// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "beamsched/quantize.hpp"

namespace beamsched {

// Raised when a beamspace matrix is rank deficient (condition number above
// 1e10). Schedulers are responsible for never producing colinear selections.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RateReport {
  Eigen::VectorXd per_user;  // bits/s/Hz, one entry per column
  double sum = 0.0;
};

// Zero-forcing combiner W = H (H^H H)^{-1}; satisfies W^H H = I. The Gram
// matrix is inverted through its eigendecomposition (N_s <= 10, benign).
Eigen::MatrixXcd zf_combiner(Eigen::Ref<const Eigen::MatrixXcd> beam_channels);

// Achievable rate of one user under the AQNM with a ZF combiner:
//   log2(1 + alpha^2 rho / (w_k^H R_qq w_k + alpha^2 ||w_k||^2)).
double user_rate(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, int user, double rho,
                 const AqnmParams& params);

RateReport sum_rate(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, double rho,
                    const AqnmParams& params);

// Non-throwing variant used by schedulers to treat rank-collapsed candidate
// sets as infeasible instead of failing.
bool try_sum_rate(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, double rho,
                  const AqnmParams& params, RateReport& out);

// Quantization-aware selection metric
//   alpha rho ||h_k||^4 / ((1-alpha) h_k^H diag(rho H H^H + I/(1-alpha)) h_k),
// evaluated without any matrix inversion. Returns +inf when alpha == 1
// (no quantization noise, the metric degenerates).
double approx_sinr(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, int user, double rho,
                   const AqnmParams& params);

// Best single-user rate at channel power norm_sq spread evenly over
// num_paths beams: log2(1 + alpha rho / ((1-alpha) rho / L + 1 / gamma)).
// Also the per-user bound for disjoint-support multi-user selections.
double closed_form_single_user_rate(double norm_sq, int num_paths, double rho,
                                    double alpha);

// Limit of the above as norm_sq grows without bound:
// log2(1 + alpha L / (1 - alpha)); +inf when alpha == 1.
double rate_limit_infinite_power(int num_paths, double alpha);

}  // namespace beamsched
