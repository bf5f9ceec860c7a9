// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "beamsched/channel.hpp"

namespace testutil {

inline Eigen::MatrixXcd random_beamspace(beamsched::Rng& rng, int num_antennas,
                                         int num_users, int num_paths) {
  Eigen::MatrixXcd antenna_domain(num_antennas, num_users);
  for (int k = 0; k < num_users; ++k)
    antenna_domain.col(k) =
        beamsched::draw_user_channel(rng, num_antennas, num_paths).antenna_vector;
  return beamsched::to_beamspace(antenna_domain, beamsched::dft_codebook(num_antennas));
}

}  // namespace testutil
