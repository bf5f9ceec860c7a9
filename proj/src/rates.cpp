// SPDX-License-Identifier: Apache-2.0
#include "beamsched/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace beamsched {

namespace {

// cond(H)^2 = lambda_max / lambda_min of the Gram matrix; reject above 1e10.
constexpr double kGramConditionLimit = 1e20;

bool try_zf(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, Eigen::MatrixXcd& combiner) {
  const Eigen::Index cols = beam_channels.cols();
  if (beam_channels.rows() < cols) return false;  // rank < cols

  const Eigen::MatrixXcd gram = beam_channels.adjoint() * beam_channels;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success) return false;
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double lmin = ev(0);
  const double lmax = ev(cols - 1);
  if (!(lmin > 0.0) || lmax > kGramConditionLimit * lmin) return false;

  const Eigen::MatrixXcd gram_inv =
      es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  combiner = beam_channels * gram_inv;
  return true;
}

bool try_rates(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, double rho,
               const AqnmParams& params, RateReport& out) {
  Eigen::MatrixXcd combiner;
  if (!try_zf(beam_channels, combiner)) return false;

  const Eigen::VectorXd noise_diag = quantization_covariance(beam_channels, rho, params);
  const double a2 = params.alpha * params.alpha;
  const Eigen::Index n = beam_channels.cols();
  out.per_user.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double quant_term = combiner.col(k).cwiseAbs2().dot(noise_diag);
    const double denom = quant_term + a2 * combiner.col(k).squaredNorm();
    out.per_user(k) = std::log2(1.0 + a2 * rho / denom);
  }
  out.sum = out.per_user.sum();
  return true;
}

}  // namespace

Eigen::MatrixXcd zf_combiner(Eigen::Ref<const Eigen::MatrixXcd> beam_channels) {
  if (beam_channels.cols() < 1)
    throw std::invalid_argument("zf_combiner: need at least one column");
  Eigen::MatrixXcd combiner;
  if (!try_zf(beam_channels, combiner))
    throw SingularMatrixError("zf_combiner: beam channel matrix is rank deficient");
  return combiner;
}

double user_rate(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, int user, double rho,
                 const AqnmParams& params) {
  if (user < 0 || user >= beam_channels.cols())
    throw std::invalid_argument("user_rate: user index out of range");
  RateReport report;
  if (!try_rates(beam_channels, rho, params, report))
    throw SingularMatrixError("user_rate: beam channel matrix is rank deficient");
  return report.per_user(user);
}

RateReport sum_rate(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, double rho,
                    const AqnmParams& params) {
  if (beam_channels.cols() < 1)
    throw std::invalid_argument("sum_rate: need at least one column");
  RateReport report;
  if (!try_rates(beam_channels, rho, params, report))
    throw SingularMatrixError("sum_rate: beam channel matrix is rank deficient");
  return report;
}

bool try_sum_rate(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, double rho,
                  const AqnmParams& params, RateReport& out) {
  if (beam_channels.cols() < 1) return false;
  return try_rates(beam_channels, rho, params, out);
}

double approx_sinr(Eigen::Ref<const Eigen::MatrixXcd> beam_channels, int user, double rho,
                   const AqnmParams& params) {
  if (user < 0 || user >= beam_channels.cols())
    throw std::invalid_argument("approx_sinr: user index out of range");
  const auto h = beam_channels.col(user);
  const double norm_sq = h.squaredNorm();
  if (norm_sq == 0.0) throw std::invalid_argument("approx_sinr: user column is zero");
  if (params.alpha >= 1.0) return std::numeric_limits<double>::infinity();

  // (1-alpha) diag(rho H H^H + I/(1-alpha)) folded into one diagonal so the
  // expression stays finite for alpha near 1.
  const Eigen::VectorXd row_power = beam_channels.rowwise().squaredNorm();
  const Eigen::VectorXd folded =
      ((1.0 - params.alpha) * rho * row_power.array() + 1.0).matrix();
  const double denom = h.cwiseAbs2().dot(folded);
  return params.alpha * rho * norm_sq * norm_sq / denom;
}

double closed_form_single_user_rate(double norm_sq, int num_paths, double rho,
                                    double alpha) {
  if (!(norm_sq > 0.0))
    throw std::invalid_argument("closed_form_single_user_rate: norm_sq must be > 0");
  if (num_paths < 1)
    throw std::invalid_argument("closed_form_single_user_rate: num_paths must be >= 1");
  return std::log2(1.0 + alpha * rho / ((1.0 - alpha) * rho / num_paths + 1.0 / norm_sq));
}

double rate_limit_infinite_power(int num_paths, double alpha) {
  if (num_paths < 1)
    throw std::invalid_argument("rate_limit_infinite_power: num_paths must be >= 1");
  if (alpha >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log2(1.0 + alpha * num_paths / (1.0 - alpha));
}

}  // namespace beamsched
