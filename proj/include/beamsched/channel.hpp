// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "beamsched/rng.hpp"

namespace beamsched {

// Geometric channel of one single-antenna user: num_paths complex path
// gains and angles of arrival, plus the assembled antenna-domain vector
//   h = sqrt(N_r / L) * sum_l gain_l * a(angle_l).
struct UserChannel {
  Eigen::VectorXcd path_gains;      // CN(0,1) per path
  Eigen::VectorXd path_angles;      // radians in [-pi/2, pi/2]
  Eigen::VectorXcd antenna_vector;  // length num_antennas
};

enum class PowerSpread {
  equal,             // every support entry carries norm_sq / L
  single_beam,       // all power on one beam (support size must be 1)
  random_dirichlet,  // power split ~ Dirichlet(1,...,1), scaled to norm_sq
};

// Synthetic on-grid beamspace channel: exactly |support| nonzero entries
// with squared norm norm_sq. Phases are drawn uniformly.
struct VirtualChannelSpec {
  std::vector<int> support;  // distinct beam indices, 0-based
  double norm_sq = 1.0;
  PowerSpread spread = PowerSpread::equal;
  int num_beams = 0;  // length of the produced vector
};

// Unit-norm ULA array response at azimuth angle theta. Entry m is
// (1/sqrt(N)) * exp(-j*2*pi*m*(d/lambda)*sin(theta)).
Eigen::VectorXcd steering_vector(double theta, int num_antennas, double d_over_lambda = 0.5);

// Array responses at the uniformly spaced spatial angles i / N, i = 0..N-1;
// this is the unitary DFT matrix used as the fixed analog combiner.
Eigen::MatrixXcd dft_codebook(int num_antennas);

// Random geometric channel: IID CN(0,1) path gains, IID uniform angles on
// [-pi/2, pi/2]. E||h||^2 = num_antennas.
UserChannel draw_user_channel(Rng& rng, int num_antennas, int num_paths,
                              double d_over_lambda = 0.5);

// Variant whose angles sit exactly on the DFT grid (distinct grid points),
// so the beamspace image has one nonzero per path. Assumes d/lambda = 1/2.
UserChannel draw_user_channel_on_grid(Rng& rng, int num_antennas, int num_paths);

// Beamspace projection codebook^H * channel. Column norms are preserved.
Eigen::MatrixXcd to_beamspace(const Eigen::MatrixXcd& channel,
                              const Eigen::MatrixXcd& codebook);

Eigen::VectorXcd make_virtual_channel(const VirtualChannelSpec& spec, Rng& rng);

// Indices of the num_stored largest-magnitude entries, ascending. Ties go
// to the lowest index so results are reproducible.
std::vector<int> dominant_beams(const Eigen::VectorXcd& beam_channel, int num_stored);

}  // namespace beamsched
