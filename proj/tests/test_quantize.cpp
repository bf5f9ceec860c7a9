// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "beamsched/quantize.hpp"
#include "beamsched/rng.hpp"
#include "test_util.hpp"

using namespace beamsched;

TEST_CASE("beta above five bits follows the high-rate formula") {
  const double expected = std::numbers::pi * std::sqrt(3.0) / 2.0 * std::exp2(-12.0);
  CHECK(beta_for_bits(6) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(beta_for_bits(20) < 1e-11);
}

TEST_CASE("beta for low bit widths matches the Lloyd-Max fixed point") {
  // One bit is analytic: distortion 1 - 2/pi, levels at +/- sqrt(2/pi).
  CHECK(beta_for_bits(1) == doctest::Approx(1.0 - 2.0 / std::numbers::pi).epsilon(1e-9));
  const LloydMaxCodebook& one_bit = lloyd_max_codebook(1);
  CHECK(one_bit.levels(0) == doctest::Approx(-std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));
  CHECK(one_bit.levels(1) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));

  // Frozen values from an independent fixed-point run of the same design.
  CHECK(beta_for_bits(2) == doctest::Approx(0.117481847829314).epsilon(1e-9));
  CHECK(beta_for_bits(3) == doctest::Approx(0.034547760788436).epsilon(1e-9));
  CHECK(beta_for_bits(4) == doctest::Approx(0.009501008007917).epsilon(1e-8));
  CHECK(beta_for_bits(5) == doctest::Approx(0.002504668354559).epsilon(1e-7));

  CHECK_THROWS_AS((void)beta_for_bits(0), std::domain_error);
  CHECK_THROWS_AS((void)beta_for_bits(-3), std::domain_error);
}

TEST_CASE("beta decreases with resolution and is smooth at the table boundary") {
  for (int b = 1; b < 12; ++b) CHECK(beta_for_bits(b + 1) < beta_for_bits(b));
  const double ratio = beta_for_bits(5) / beta_for_bits(6);
  CHECK(ratio > 1.0);
  CHECK(ratio < 6.0);
}

TEST_CASE("aqnm params keep alpha + beta = 1 exactly") {
  for (int b = 1; b <= 12; ++b) {
    const AqnmParams p = AqnmParams::from_bits(b);
    CHECK(p.alpha + p.beta == 1.0);
    CHECK(p.bits == b);
  }
  CHECK(AqnmParams::infinite_resolution().alpha == 1.0);
  CHECK_THROWS_AS((void)AqnmParams::from_beta(1.0), std::domain_error);
  CHECK_THROWS_AS((void)AqnmParams::from_beta(-0.1), std::domain_error);
}

TEST_CASE("quantization covariance diagonal") {
  SUBCASE("zero channel leaves only the identity term") {
    const AqnmParams p = AqnmParams::from_bits(2);
    const Eigen::VectorXd d =
        quantization_covariance(Eigen::MatrixXcd::Zero(4, 2), 3.0, p);
    for (int i = 0; i < 4; ++i)
      CHECK(d(i) == doctest::Approx(p.alpha * p.beta).epsilon(1e-14));
  }

  SUBCASE("vanishes at infinite resolution") {
    const Eigen::VectorXd d = quantization_covariance(
        Eigen::MatrixXcd::Random(4, 2), 3.0, AqnmParams::infinite_resolution());
    CHECK(d.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("hand-evaluated two-antenna case") {
    const AqnmParams p = AqnmParams::from_beta(0.2);  // alpha*beta = 0.16
    Eigen::MatrixXcd h(2, 1);
    h << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 2.0);
    const Eigen::VectorXd d = quantization_covariance(h, 1.0, p);
    CHECK(d(0) == doctest::Approx(0.16 * 2.0).epsilon(1e-14));
    CHECK(d(1) == doctest::Approx(0.16 * 5.0).epsilon(1e-14));
  }

  SUBCASE("negative power is rejected") {
    CHECK_THROWS_AS((void)quantization_covariance(Eigen::MatrixXcd::Zero(2, 1), -1.0,
                                                  AqnmParams::from_bits(2)),
                    std::invalid_argument);
  }
}

TEST_CASE("simulated quantizer maps components through the scaled codebook") {
  SUBCASE("zero input lands on the innermost level") {
    const Eigen::VectorXcd y = Eigen::VectorXcd::Zero(3);
    for (int b : {1, 2, 3}) {
      const LloydMaxCodebook& cb = lloyd_max_codebook(b);
      const double inner = cb.levels(cb.levels.size() / 2);  // smallest positive level
      const QuantizedRxSample s = simulate_quantizer(y, b, 2.0);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(std::abs(s.quantized(i).real()) - std::sqrt(2.0) * inner) < 1e-12);
        CHECK(std::abs(std::abs(s.quantized(i).imag()) - std::sqrt(2.0) * inner) < 1e-12);
      }
    }
  }

  SUBCASE("one bit keeps only the component signs") {
    Rng rng(11);
    Eigen::VectorXcd y(64);
    for (int i = 0; i < 64; ++i) y(i) = draw_cn(rng);
    const double sigma = 1.7;
    const double level = sigma * std::sqrt(2.0 / std::numbers::pi);
    const QuantizedRxSample s = simulate_quantizer(y, 1, sigma * sigma);
    for (int i = 0; i < 64; ++i) {
      CHECK(s.quantized(i).real() ==
            doctest::Approx(std::copysign(level, y(i).real())).epsilon(1e-9));
      CHECK(s.quantized(i).imag() ==
            doctest::Approx(std::copysign(level, y(i).imag())).epsilon(1e-9));
    }
  }

  SUBCASE("empirical distortion reproduces beta") {
    Rng rng(12);
    const int samples = 100000;
    Eigen::VectorXcd y(samples);
    for (int i = 0; i < samples; ++i) y(i) = draw_cn(rng);
    for (int b : {1, 2, 3}) {
      const QuantizedRxSample s = simulate_quantizer(y, b, 0.5);
      const double distortion =
          (s.analog - s.quantized).squaredNorm() / s.analog.squaredNorm();
      CHECK(distortion == doctest::Approx(beta_for_bits(b)).epsilon(0.02));
    }
  }

  SUBCASE("bad variance is rejected") {
    CHECK_THROWS_AS((void)simulate_quantizer(Eigen::VectorXcd::Zero(1), 2, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("quantization noise is uncorrelated with diagonal matching the model") {
  Rng rng(13);
  const int num_antennas = 8;
  const int num_scheduled = 4;
  const Eigen::MatrixXcd channels =
      testutil::random_beamspace(rng, num_antennas, num_scheduled, 4);
  const Eigen::VectorXd row_power = channels.rowwise().squaredNorm();
  const int samples = 100000;

  for (int b : {2, 3}) {
    const AqnmParams params = AqnmParams::from_bits(b);
    const double rho = 10.0;
    const Eigen::VectorXd expected = quantization_covariance(channels, rho, params);

    Eigen::MatrixXcd rx(num_antennas, samples);
    Eigen::MatrixXcd symbols(num_scheduled, samples);
    for (int j = 0; j < samples; ++j) {
      for (int k = 0; k < num_scheduled; ++k) symbols(k, j) = draw_cn(rng);
      for (int i = 0; i < num_antennas; ++i) rx(i, j) = draw_cn(rng);
    }
    rx += std::sqrt(rho) * channels * symbols;

    Eigen::MatrixXcd noise(num_antennas, samples);
    for (int i = 0; i < num_antennas; ++i) {
      const double comp_var = (rho * row_power(i) + 1.0) / 2.0;
      const QuantizedRxSample s = simulate_quantizer(rx.row(i).transpose(), b, comp_var);
      noise.row(i) = (s.quantized - params.alpha * s.analog).transpose();
    }
    const Eigen::MatrixXcd cov = noise * noise.adjoint() / static_cast<double>(samples);

    for (int i = 0; i < num_antennas; ++i) {
      CHECK(std::abs(cov(i, i).real() - expected(i)) / expected(i) < 0.10);
      // Diagonal dominance: off-diagonal row mass stays below the diagonal.
      double off = 0.0;
      for (int j = 0; j < num_antennas; ++j)
        if (j != i) off += std::abs(cov(i, j));
      CHECK(off < cov(i, i).real());
    }
  }
}
