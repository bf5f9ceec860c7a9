// SPDX-License-Identifier: Apache-2.0
#include "beamsched/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace beamsched {

namespace {

constexpr int kMaxCodebookBits = 12;

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E[(x - y)^2] over x ~ N(0,1) restricted to (a, b), using
// int x^2 phi = Phi(b) - Phi(a) + a phi(a) - b phi(b) and
// int x phi = phi(a) - phi(b). Infinite bounds contribute zero tail terms.
double segment_distortion(double a, double b, double y) {
  const double pa = std::isinf(a) ? 0.0 : norm_pdf(a);
  const double pb = std::isinf(b) ? 0.0 : norm_pdf(b);
  const double ca = std::isinf(a) ? 0.0 : norm_cdf(a);
  const double cb = std::isinf(b) ? 1.0 : norm_cdf(b);
  const double apa = std::isinf(a) ? 0.0 : a * pa;
  const double bpb = std::isinf(b) ? 0.0 : b * pb;
  const double mass = cb - ca;
  const double ex = pa - pb;                 // int x phi
  const double ex2 = mass + apa - bpb;       // int x^2 phi
  return ex2 - 2.0 * y * ex + y * y * mass;
}

LloydMaxCodebook design_lloyd_max(int bits) {
  const int n = 1 << bits;
  Eigen::VectorXd levels(n);
  for (int i = 0; i < n; ++i) levels(i) = -4.0 + 8.0 * (i + 0.5) / n;

  Eigen::VectorXd thresholds(n - 1);
  double prev_distortion = -1.0;
  LloydMaxCodebook cb;
  for (int iter = 0; iter < 1000000; ++iter) {
    for (int i = 0; i + 1 < n; ++i) thresholds(i) = 0.5 * (levels(i) + levels(i + 1));

    // Centroid condition: level i = E[x | x in region i].
    double distortion = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = (i == 0) ? -std::numeric_limits<double>::infinity() : thresholds(i - 1);
      const double b = (i == n - 1) ? std::numeric_limits<double>::infinity() : thresholds(i);
      const double pa = std::isinf(a) ? 0.0 : norm_pdf(a);
      const double pb = std::isinf(b) ? 0.0 : norm_pdf(b);
      const double mass = (std::isinf(b) ? 1.0 : norm_cdf(b)) - (std::isinf(a) ? 0.0 : norm_cdf(a));
      levels(i) = (pa - pb) / mass;
      distortion += segment_distortion(a, b, levels(i));
    }
    if (prev_distortion >= 0.0 && std::abs(distortion - prev_distortion) < 1e-12) {
      cb.distortion = distortion;
      break;
    }
    prev_distortion = distortion;
  }
  for (int i = 0; i + 1 < n; ++i) thresholds(i) = 0.5 * (levels(i) + levels(i + 1));
  cb.levels = levels;
  cb.thresholds = thresholds;
  return cb;
}

}  // namespace

const LloydMaxCodebook& lloyd_max_codebook(int bits) {
  if (bits < 1 || bits > kMaxCodebookBits)
    throw std::domain_error("lloyd_max_codebook: bits must be in [1, 12]");
  static std::mutex mu;
  static std::map<int, LloydMaxCodebook> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(bits);
  if (it == cache.end()) it = cache.emplace(bits, design_lloyd_max(bits)).first;
  return it->second;
}

double beta_for_bits(int bits) {
  if (bits < 1) throw std::domain_error("beta_for_bits: bits must be >= 1");
  if (bits <= 5) return lloyd_max_codebook(bits).distortion;
  return std::numbers::pi * std::sqrt(3.0) / 2.0 * std::exp2(-2.0 * bits);
}

AqnmParams AqnmParams::from_bits(int bits) {
  const double beta = beta_for_bits(bits);
  return AqnmParams{bits, beta, 1.0 - beta};
}

AqnmParams AqnmParams::from_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::domain_error("AqnmParams::from_beta: beta must be in [0, 1)");
  return AqnmParams{0, beta, 1.0 - beta};
}

Eigen::VectorXd quantization_covariance(Eigen::Ref<const Eigen::MatrixXcd> beam_channels,
                                        double rho, const AqnmParams& params) {
  if (!(rho >= 0.0)) throw std::invalid_argument("quantization_covariance: rho must be >= 0");
  const Eigen::VectorXd row_power = beam_channels.rowwise().squaredNorm();
  return params.alpha * params.beta * (rho * row_power.array() + 1.0).matrix();
}

QuantizedRxSample simulate_quantizer(const Eigen::VectorXcd& input, int bits,
                                     double input_variance) {
  if (!(input_variance > 0.0))
    throw std::invalid_argument("simulate_quantizer: input_variance must be > 0");
  const LloydMaxCodebook& cb = lloyd_max_codebook(bits);
  const double sigma = std::sqrt(input_variance);
  const double* tbegin = cb.thresholds.data();
  const double* tend = tbegin + cb.thresholds.size();

  auto quantize_component = [&](double x) {
    const auto idx = std::upper_bound(tbegin, tend, x / sigma) - tbegin;
    return sigma * cb.levels(static_cast<int>(idx));
  };

  QuantizedRxSample sample;
  sample.analog = input;
  sample.quantized.resize(input.size());
  for (Eigen::Index i = 0; i < input.size(); ++i)
    sample.quantized(i) = {quantize_component(input(i).real()),
                           quantize_component(input(i).imag())};
  return sample;
}

}  // namespace beamsched
