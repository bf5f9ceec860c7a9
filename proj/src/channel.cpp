// SPDX-License-Identifier: Apache-2.0
#include "beamsched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace beamsched {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::VectorXcd steering_vector(double theta, int num_antennas, double d_over_lambda) {
  if (num_antennas < 1) throw std::invalid_argument("steering_vector: num_antennas must be >= 1");
  if (!(theta >= -kPi / 2 && theta <= kPi / 2))
    throw std::domain_error("steering_vector: theta outside [-pi/2, pi/2]");

  const double spatial = d_over_lambda * std::sin(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  Eigen::VectorXcd v(num_antennas);
  for (int m = 0; m < num_antennas; ++m) v(m) = std::polar(scale, -2.0 * kPi * m * spatial);
  return v;
}

Eigen::MatrixXcd dft_codebook(int num_antennas) {
  if (num_antennas < 1) throw std::invalid_argument("dft_codebook: num_antennas must be >= 1");
  const double n = static_cast<double>(num_antennas);
  const double scale = 1.0 / std::sqrt(n);
  Eigen::MatrixXcd codebook(num_antennas, num_antennas);
  for (int i = 0; i < num_antennas; ++i)
    for (int m = 0; m < num_antennas; ++m)
      codebook(m, i) = std::polar(scale, -2.0 * kPi * m * i / n);
  return codebook;
}

UserChannel draw_user_channel(Rng& rng, int num_antennas, int num_paths,
                              double d_over_lambda) {
  if (num_paths < 1) throw std::invalid_argument("draw_user_channel: num_paths must be >= 1");
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);

  UserChannel ch;
  ch.path_gains.resize(num_paths);
  ch.path_angles.resize(num_paths);
  ch.antenna_vector = Eigen::VectorXcd::Zero(num_antennas);
  const double scale = std::sqrt(static_cast<double>(num_antennas) / num_paths);
  for (int l = 0; l < num_paths; ++l) {
    ch.path_gains(l) = draw_cn(rng);
    ch.path_angles(l) = angle(rng);
    ch.antenna_vector += scale * ch.path_gains(l) *
                         steering_vector(ch.path_angles(l), num_antennas, d_over_lambda);
  }
  return ch;
}

UserChannel draw_user_channel_on_grid(Rng& rng, int num_antennas, int num_paths) {
  if (num_paths < 1 || num_paths > num_antennas)
    throw std::invalid_argument("draw_user_channel_on_grid: need 1 <= num_paths <= num_antennas");

  // Distinct grid indices via a partial Fisher-Yates shuffle.
  std::vector<int> grid(num_antennas);
  std::iota(grid.begin(), grid.end(), 0);
  for (int i = 0; i < num_paths; ++i) {
    std::uniform_int_distribution<int> pick(i, num_antennas - 1);
    std::swap(grid[i], grid[pick(rng)]);
  }

  UserChannel ch;
  ch.path_gains.resize(num_paths);
  ch.path_angles.resize(num_paths);
  ch.antenna_vector = Eigen::VectorXcd::Zero(num_antennas);
  const double scale = std::sqrt(static_cast<double>(num_antennas) / num_paths);
  for (int l = 0; l < num_paths; ++l) {
    // Spatial angle g/N, wrapped into [-1/2, 1/2] so that asin(2x) is defined.
    double x = static_cast<double>(grid[l]) / num_antennas;
    if (x > 0.5) x -= 1.0;
    ch.path_gains(l) = draw_cn(rng);
    ch.path_angles(l) = std::asin(2.0 * x);
    ch.antenna_vector +=
        scale * ch.path_gains(l) * steering_vector(ch.path_angles(l), num_antennas, 0.5);
  }
  return ch;
}

Eigen::MatrixXcd to_beamspace(const Eigen::MatrixXcd& channel,
                              const Eigen::MatrixXcd& codebook) {
  if (codebook.rows() != codebook.cols())
    throw std::invalid_argument("to_beamspace: codebook must be square");
  if (codebook.rows() != channel.rows())
    throw std::invalid_argument("to_beamspace: codebook/channel row mismatch");
  return codebook.adjoint() * channel;
}

Eigen::VectorXcd make_virtual_channel(const VirtualChannelSpec& spec, Rng& rng) {
  const int num_paths = static_cast<int>(spec.support.size());
  if (spec.num_beams < 1) throw std::invalid_argument("make_virtual_channel: num_beams must be >= 1");
  if (num_paths < 1) throw std::invalid_argument("make_virtual_channel: empty support");
  if (!(spec.norm_sq > 0.0)) throw std::invalid_argument("make_virtual_channel: norm_sq must be > 0");
  if (spec.spread == PowerSpread::single_beam && num_paths != 1)
    throw std::invalid_argument("make_virtual_channel: single_beam requires a one-entry support");

  std::vector<int> sorted = spec.support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("make_virtual_channel: support indices must be distinct");
  if (sorted.front() < 0 || sorted.back() >= spec.num_beams)
    throw std::invalid_argument("make_virtual_channel: support index out of range");

  Eigen::VectorXd powers(num_paths);
  switch (spec.spread) {
    case PowerSpread::equal:
      powers.setConstant(spec.norm_sq / num_paths);
      break;
    case PowerSpread::single_beam:
      powers(0) = spec.norm_sq;
      break;
    case PowerSpread::random_dirichlet: {
      std::exponential_distribution<double> exp1(1.0);
      for (int l = 0; l < num_paths; ++l) powers(l) = exp1(rng);
      powers *= spec.norm_sq / powers.sum();
      break;
    }
  }

  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.num_beams);
  for (int l = 0; l < num_paths; ++l)
    v(spec.support[l]) = std::polar(std::sqrt(powers(l)), phase(rng));
  return v;
}

std::vector<int> dominant_beams(const Eigen::VectorXcd& beam_channel, int num_stored) {
  const int n = static_cast<int>(beam_channel.size());
  if (num_stored < 1 || num_stored > n)
    throw std::invalid_argument("dominant_beams: need 1 <= num_stored <= vector length");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd mag = beam_channel.cwiseAbs();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (mag(a) != mag(b)) return mag(a) > mag(b);
    return a < b;
  });
  order.resize(num_stored);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace beamsched
