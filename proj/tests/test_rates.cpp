// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "beamsched/channel.hpp"
#include "beamsched/rates.hpp"
#include "test_util.hpp"

using namespace beamsched;

TEST_CASE("zero-forcing combiner") {
  SUBCASE("orthonormal columns invert to themselves") {
    const Eigen::MatrixXcd h = dft_codebook(8).leftCols(3);
    const Eigen::MatrixXcd w = zf_combiner(h);
    CHECK((w - h).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("single column reduces to h / ||h||^2") {
    Rng rng(21);
    Eigen::MatrixXcd h(5, 1);
    for (int i = 0; i < 5; ++i) h(i, 0) = draw_cn(rng);
    const Eigen::MatrixXcd w = zf_combiner(h);
    CHECK((w - h / h.squaredNorm()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("pseudo-inverse property holds on random instances") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXcd h = testutil::random_beamspace(rng, 8, 3, 2);
      const Eigen::MatrixXcd gram = zf_combiner(h).adjoint() * h;
      CHECK((gram - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  SUBCASE("rank deficiency fails loudly") {
    Rng rng(23);
    Eigen::MatrixXcd h(6, 2);
    for (int i = 0; i < 6; ++i) h(i, 0) = draw_cn(rng);
    h.col(1) = h.col(0);
    CHECK_THROWS_AS((void)zf_combiner(h), SingularMatrixError);
    CHECK_THROWS_AS((void)zf_combiner(Eigen::MatrixXcd::Zero(4, 6)), SingularMatrixError);
    CHECK_THROWS_AS((void)zf_combiner(Eigen::MatrixXcd(4, 0)), std::invalid_argument);
  }
}

TEST_CASE("user rate") {
  SUBCASE("infinite resolution reduces to the classical ZF rate") {
    Rng rng(24);
    const AqnmParams p = AqnmParams::infinite_resolution();
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXcd h = testutil::random_beamspace(rng, 16, 4, 4);
      const Eigen::MatrixXcd w = zf_combiner(h);
      const double rho = 3.7;
      for (int k = 0; k < 4; ++k) {
        const double classical = std::log2(1.0 + rho / w.col(k).squaredNorm());
        CHECK(std::abs(user_rate(h, k, rho, p) - classical) < 1e-12);
      }
    }
  }

  SUBCASE("equal-spread single user matches the closed form") {
    Rng rng(25);
    VirtualChannelSpec spec;
    spec.support = {2, 6, 9, 14};
    spec.norm_sq = 7.0;
    spec.spread = PowerSpread::equal;
    spec.num_beams = 16;
    const Eigen::MatrixXcd h = make_virtual_channel(spec, rng);
    for (int b : {1, 3, 6}) {
      const AqnmParams p = AqnmParams::from_bits(b);
      CHECK(std::abs(user_rate(h, 0, 2.5, p) -
                     closed_form_single_user_rate(7.0, 4, 2.5, p.alpha)) < 1e-10);
    }
  }

  SUBCASE("rank deficiency propagates") {
    Rng rng(31);
    Eigen::MatrixXcd h(6, 2);
    h.col(0) = testutil::random_beamspace(rng, 6, 1, 2);
    h.col(1) = h.col(0);
    CHECK_THROWS_AS((void)user_rate(h, 0, 1.0, AqnmParams::from_bits(2)),
                    SingularMatrixError);
    CHECK_THROWS_AS((void)sum_rate(h, 1.0, AqnmParams::from_bits(2)), SingularMatrixError);
    RateReport report;
    CHECK_FALSE(try_sum_rate(h, 1.0, AqnmParams::from_bits(2), report));
  }

  SUBCASE("hand-evaluated two-beam channel") {
    // |h_i|^2 = {2, 2}, rho = 1, two-bit quantization.
    const AqnmParams p = AqnmParams::from_bits(2);
    Eigen::MatrixXcd h(2, 1);
    h << std::sqrt(2.0), std::sqrt(2.0) * std::polar(1.0, 0.9);
    const double oracle =
        std::log2(1.0 + p.alpha * 16.0 / ((1.0 - p.alpha) * 8.0 + 4.0));
    CHECK(user_rate(h, 0, 1.0, p) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(oracle == doctest::Approx(1.9480185745337522).epsilon(1e-9));
  }
}

TEST_CASE("sum rate") {
  Rng rng(26);
  const AqnmParams p = AqnmParams::from_bits(2);

  SUBCASE("single user equals the user rate") {
    const Eigen::MatrixXcd h = testutil::random_beamspace(rng, 8, 1, 2);
    const RateReport r = sum_rate(h, 1.5, p);
    CHECK(r.per_user.size() == 1);
    CHECK(r.sum == doctest::Approx(user_rate(h, 0, 1.5, p)).epsilon(1e-14));
  }

  SUBCASE("disjoint equal-norm users each achieve their single-user rate") {
    VirtualChannelSpec spec;
    spec.norm_sq = 5.0;
    spec.spread = PowerSpread::equal;
    spec.num_beams = 16;
    Eigen::MatrixXcd h(16, 2);
    spec.support = {0, 1, 2, 3};
    h.col(0) = make_virtual_channel(spec, rng);
    spec.support = {8, 9, 10, 11};
    h.col(1) = make_virtual_channel(spec, rng);

    const RateReport joint = sum_rate(h, 2.0, p);
    const double solo0 = user_rate(h.leftCols(1), 0, 2.0, p);
    const double solo1 = user_rate(h.rightCols(1), 0, 2.0, p);
    CHECK(joint.per_user(0) == doctest::Approx(solo0).epsilon(1e-9));
    CHECK(joint.per_user(1) == doctest::Approx(solo1).epsilon(1e-9));
    CHECK(joint.sum == doctest::Approx(solo0 + solo1).epsilon(1e-9));
  }

  SUBCASE("matches an independent per-user recomputation") {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXcd h = testutil::random_beamspace(rng, 12, 4, 3);
      const double rho = 4.0;
      const RateReport r = sum_rate(h, rho, p);

      // Duplicate implementation: LU inverse of the Gram matrix and explicit
      // loops over the quantization covariance.
      const Eigen::MatrixXcd w = h * (h.adjoint() * h).inverse();
      double total = 0.0;
      for (int k = 0; k < 4; ++k) {
        double quant = 0.0;
        for (int i = 0; i < 12; ++i)
          quant += p.alpha * p.beta * (rho * h.row(i).squaredNorm() + 1.0) *
                   std::norm(w(i, k));
        const double denom = quant + p.alpha * p.alpha * w.col(k).squaredNorm();
        const double rate = std::log2(1.0 + p.alpha * p.alpha * rho / denom);
        total += rate;
        CHECK(r.per_user(k) == doctest::Approx(rate).epsilon(1e-9));
      }
      CHECK(r.sum == doctest::Approx(total).epsilon(1e-9));
      CHECK(std::abs(r.sum - r.per_user.sum()) < 1e-12);
    }
  }
}

TEST_CASE("approximate SINR") {
  SUBCASE("equals the exact SINR for a single user") {
    Rng rng(27);
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::MatrixXcd h = testutil::random_beamspace(rng, 16, 1, 4);
      const AqnmParams p = AqnmParams::from_bits(1 + trial % 5);
      const double rho = 0.5 + 0.01 * trial;
      const Eigen::MatrixXcd w = zf_combiner(h);
      const Eigen::VectorXd d = quantization_covariance(h, rho, p);
      const double a2 = p.alpha * p.alpha;
      const double exact =
          a2 * rho / (w.col(0).cwiseAbs2().dot(d) + a2 * w.col(0).squaredNorm());
      const double approx = approx_sinr(h, 0, rho, p);
      CHECK(std::abs(approx - exact) / exact < 1e-10);
    }
  }

  SUBCASE("single-beam hand value") {
    const double gamma = 3.0;
    const double rho = 2.0;
    const AqnmParams p = AqnmParams::from_bits(2);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(8, 1);
    h(0, 0) = std::sqrt(gamma);
    const double expected =
        p.alpha * rho * gamma / ((1.0 - p.alpha) * rho * gamma + 1.0);
    CHECK(approx_sinr(h, 0, rho, p) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("grows when the user column is scaled up") {
    Rng rng(28);
    Eigen::MatrixXcd h = testutil::random_beamspace(rng, 16, 3, 4);
    const AqnmParams p = AqnmParams::from_bits(3);
    double prev = approx_sinr(h, 1, 2.0, p);
    for (double c : {1.1, 2.0, 5.0}) {
      Eigen::MatrixXcd scaled = h;
      scaled.col(1) *= c;
      const double cur = approx_sinr(scaled, 1, 2.0, p);
      CHECK(cur > prev);
      prev = cur;
    }
  }

  SUBCASE("edge cases") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 2);
    h(0, 0) = 1.0;
    CHECK(approx_sinr(h, 0, 1.0, AqnmParams::infinite_resolution()) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS((void)approx_sinr(h, 1, 1.0, AqnmParams::from_bits(2)),
                    std::invalid_argument);
  }
}

TEST_CASE("closed-form rate and its infinite-power limit") {
  SUBCASE("no quantization recovers log2(1 + rho gamma)") {
    CHECK(closed_form_single_user_rate(4.0, 3, 2.0, 1.0) ==
          doctest::Approx(std::log2(1.0 + 8.0)).epsilon(1e-14));
  }

  SUBCASE("large norm approaches the limit") {
    const AqnmParams p = AqnmParams::from_bits(2);
    const double limit = rate_limit_infinite_power(4, p.alpha);
    CHECK(std::abs(closed_form_single_user_rate(1e9, 4, 1.0, p.alpha) - limit) / limit <
          1e-3);
  }

  SUBCASE("frozen scalar oracles") {
    const AqnmParams one_bit = AqnmParams::from_bits(1);
    CHECK(closed_form_single_user_rate(10.0, 4, 1.0, one_bit.alpha) ==
          doctest::Approx(2.116296172948681).epsilon(1e-9));
    CHECK(rate_limit_infinite_power(4, one_bit.alpha) ==
          doctest::Approx(3.0013975784669062).epsilon(1e-9));
  }

  SUBCASE("monotone in the number of paths") {
    const double alpha = AqnmParams::from_bits(2).alpha;
    for (int paths = 1; paths < 10; ++paths) {
      CHECK(closed_form_single_user_rate(5.0, paths + 1, 2.0, alpha) >
            closed_form_single_user_rate(5.0, paths, 2.0, alpha));
      CHECK(rate_limit_infinite_power(2 * paths, alpha) >
            rate_limit_infinite_power(paths, alpha));
    }
  }

  SUBCASE("limit diverges as alpha approaches one") {
    CHECK(rate_limit_infinite_power(4, 1.0 - 1e-9) > 30.0);
    CHECK(rate_limit_infinite_power(4, 1.0) == std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("equal power spread maximizes the single-user rate") {
  Rng rng(29);
  const double gamma = 4.0;
  const double rho = 3.0;
  const AqnmParams p = AqnmParams::from_bits(2);

  VirtualChannelSpec spec;
  spec.support = {1, 5, 9, 13};
  spec.norm_sq = gamma;
  spec.num_beams = 16;

  spec.spread = PowerSpread::equal;
  const double equal_rate = user_rate(make_virtual_channel(spec, rng), 0, rho, p);

  SUBCASE("random allocations never do better") {
    spec.spread = PowerSpread::random_dirichlet;
    for (int i = 0; i < 10000; ++i) {
      const double rate = user_rate(make_virtual_channel(spec, rng), 0, rho, p);
      CHECK(rate <= equal_rate + 1e-9);
    }
  }

  SUBCASE("phases do not change the rate") {
    spec.spread = PowerSpread::equal;
    for (int i = 0; i < 20; ++i) {
      const double rate = user_rate(make_virtual_channel(spec, rng), 0, rho, p);
      CHECK(std::abs(rate - equal_rate) < 1e-12);
    }
  }
}

TEST_CASE("support overlap between users never helps") {
  Rng rng(30);
  const int num_beams = 16;
  const int num_paths = 4;
  const AqnmParams p = AqnmParams::from_bits(2);
  const double rho = 3.0;
  const double gamma = 4.0;

  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Two users on disjoint supports, equal spread (the optimum), then user 2
    // with one beam moved onto user 1's support, norms preserved.
    std::vector<int> pool(num_beams);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < 2 * num_paths; ++i) {
      std::uniform_int_distribution<int> pick(i, num_beams - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    VirtualChannelSpec spec;
    spec.norm_sq = gamma;
    spec.spread = PowerSpread::equal;
    spec.num_beams = num_beams;

    Eigen::MatrixXcd base(num_beams, 2);
    spec.support.assign(pool.begin(), pool.begin() + num_paths);
    base.col(0) = make_virtual_channel(spec, rng);
    spec.support.assign(pool.begin() + num_paths, pool.begin() + 2 * num_paths);
    base.col(1) = make_virtual_channel(spec, rng);

    Eigen::MatrixXcd perturbed = base;
    spec.support[0] = pool[0];  // collide with user 1
    perturbed.col(1) = make_virtual_channel(spec, rng);

    const double base_sum = sum_rate(base, rho, p).sum;
    const double pert_sum = sum_rate(perturbed, rho, p).sum;
    if (pert_sum > base_sum * 1.001) ++violations;
  }
  CHECK(violations == 0);
}
