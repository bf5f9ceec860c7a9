// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace beamsched {

// Additive quantization noise model parameters for a b-bit scalar MMSE
// quantizer: beta is the normalized mean-squared distortion, alpha = 1 - beta
// the quantization gain.
struct AqnmParams {
  int bits = 0;  // per real/imaginary component; 0 marks "not from a bit count"
  double beta = 0.0;
  double alpha = 1.0;

  static AqnmParams from_bits(int bits);
  static AqnmParams from_beta(double beta);
  static AqnmParams infinite_resolution() { return from_beta(0.0); }
};

// Optimal (Lloyd-Max) scalar quantizer for a unit-variance Gaussian source.
struct LloydMaxCodebook {
  Eigen::VectorXd levels;      // 2^bits reproduction points, ascending
  Eigen::VectorXd thresholds;  // 2^bits - 1 decision boundaries
  double distortion = 0.0;     // E[(x - Q(x))^2] for x ~ N(0,1)
};

// Cached per bit width; designed once by fixed-point iteration (centroid /
// midpoint conditions) to 1e-12 on the distortion. Supports 1..12 bits.
const LloydMaxCodebook& lloyd_max_codebook(int bits);

// Normalized distortion beta: Lloyd-Max value for bits <= 5, the high-rate
// approximation (pi*sqrt(3)/2) * 2^(-2b) above that.
double beta_for_bits(int bits);

// Diagonal of R_qq = alpha*beta*diag(rho * H_b * H_b^H + I).
Eigen::VectorXd quantization_covariance(Eigen::Ref<const Eigen::MatrixXcd> beam_channels,
                                        double rho, const AqnmParams& params);

struct QuantizedRxSample {
  Eigen::VectorXcd analog;
  Eigen::VectorXcd quantized;
};

// Element-wise quantization of each real/imaginary component through the
// Lloyd-Max codebook scaled to the component standard deviation
// sqrt(input_variance). Validation surface for the AQNM; the rate path
// always uses the analytic alpha/beta.
QuantizedRxSample simulate_quantizer(const Eigen::VectorXcd& input, int bits,
                                     double input_variance);

}  // namespace beamsched
