// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace beamsched {

// Scenario scalars for one scheduling instance. The receiver has one RF
// chain (and ADC pair) per antenna, noise variance is normalized to one,
// and transmit_power is the linear SNR against that unit noise floor.
struct SystemConfig {
  int num_antennas = 128;     // receive array size N_r (= number of RF chains)
  int num_users = 200;        // candidate users N_u
  int num_scheduled = 10;     // users to select N_s
  int num_paths = 4;          // propagation paths per user L
  int num_stored_beams = 8;   // dominant beam indices kept per user N_b
  double transmit_power = 1.0;       // rho, linear
  double ortho_threshold = 0.5;      // epsilon for the cosine filters
  int beam_overlap_limit = 3;        // N_OL, max shared dominant beams
  double antenna_spacing_ratio = 0.5;  // element spacing d / wavelength

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
    if (num_antennas < 1) fail("num_antennas must be >= 1");
    if (num_users < 1) fail("num_users must be >= 1");
    if (num_scheduled < 1) fail("num_scheduled must be >= 1");
    if (num_paths < 1) fail("num_paths must be >= 1");
    if (num_scheduled > num_users) fail("num_scheduled must not exceed num_users");
    if (num_scheduled > num_antennas) fail("num_scheduled must not exceed num_antennas");
    if (num_stored_beams < num_paths) fail("num_stored_beams must be >= num_paths");
    if (num_stored_beams > num_antennas) fail("num_stored_beams must not exceed num_antennas");
    if (!(transmit_power >= 0.0)) fail("transmit_power must be >= 0");
    if (!(ortho_threshold >= 0.0 && ortho_threshold <= 1.0)) fail("ortho_threshold must be in [0, 1]");
    if (beam_overlap_limit < 0) fail("beam_overlap_limit must be >= 0");
    if (!(antenna_spacing_ratio > 0.0)) fail("antenna_spacing_ratio must be > 0");
  }
};

}  // namespace beamsched
