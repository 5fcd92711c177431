#include <doctest.h>

#include <cmath>
#include <random>

#include "gaitcert/sbm.hpp"

using namespace gaitcert;

TEST_CASE("step map matches frozen hand-computed values") {
  SbmParams sp;  // l = 1
  // p2 = 0.5: alpha = asin(0.25), impact factor cos(2 alpha) = 0.875,
  // climb cost K = 2g(1 - cos(alpha)).
  CHECK(sbm_step_map_y1(1.2, {1.0, 0.5}, sp) ==
        doctest::Approx(0.9779993).epsilon(1e-6));
  // Zero-length steps are lossless.
  CHECK(sbm_step_map_y1(0.7, {1.0, 0.0}, sp) == doctest::Approx(0.7));
  // Touchdown angle depends only on the step length.
  CHECK(sbm_touchdown_angle({0.4, 0.3}, sp) ==
        doctest::Approx(M_PI - std::asin(0.15)));
  // A negative rate never recovers: the map is the identity there.
  CHECK(sbm_step_map_y1(-0.4, {1.0, 0.5}, sp) == doctest::Approx(-0.4));
}

TEST_CASE("closed form agrees with the simulation oracle") {
  SbmParams sp;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uy(0.02, 2.5);
  std::uniform_real_distribution<double> up1(0.25, 2.0);
  std::uniform_real_distribution<double> up2(0.15, 0.7);
  int deficits = 0, reachables = 0;
  for (int k = 0; k < 1000; ++k) {
    const double y1 = uy(rng);
    const GaitParams P{up1(rng), up2(rng)};
    const auto sim = sbm_simulate_step(y1, P, sp);
    const double closed = sbm_step_map_y1(y1, P, sp);
    CHECK(sbm_branch(y1, P, sp) == sim.branch);
    CHECK(closed == doctest::Approx(sim.y1_next).epsilon(5e-6).scale(1.0));
    if (sim.branch == SbmBranch::reachable) {
      ++reachables;
      // Extremes of the stance angle are the post-impact and touchdown
      // angles.
      const auto [lo, hi] = sbm_range_y3_y4(y1, P, sp);
      REQUIRE(lo.finite());
      REQUIRE(hi.finite());
      CHECK(lo.value() == doctest::Approx(sim.theta_min).epsilon(1e-8));
      CHECK(hi.value() == doctest::Approx(sim.theta_max).epsilon(1e-8));
      // Swing angle at touchdown mirrors the touchdown angle.
      CHECK(sbm_touchdown_angle(P, sp) ==
            doctest::Approx(sim.phi_touchdown).epsilon(1e-8));
    } else {
      ++deficits;
      const auto [lo, hi] = sbm_range_y3_y4(y1, P, sp);
      CHECK(lo.is_neg_inf());
      CHECK(hi.is_pos_inf());
    }
  }
  // The sampled box must exercise both branches.
  CHECK(deficits > 50);
  CHECK(reachables > 50);
}

TEST_CASE("the step map never gains rate") {
  SbmParams sp;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> uy(0.0, 2.5);
  std::uniform_real_distribution<double> up1(0.25, 2.0);
  std::uniform_real_distribution<double> up2(0.15, 0.7);
  for (int k = 0; k < 2000; ++k) {
    const double y1 = uy(rng);
    const GaitParams P{up1(rng), up2(rng)};
    CHECK(sbm_step_map_y1(y1, P, sp) <= y1 + 1e-12);
  }
}

TEST_CASE("the step map is monotone in the incoming rate") {
  SbmParams sp;
  const GaitParams P{1.0, 0.45};
  double prev = -1e9;
  for (int i = 0; i <= 200; ++i) {
    const double y1 = 2.5 * i / 200.0;
    const double y = sbm_step_map_y1(y1, P, sp);
    CHECK(y >= prev - 1e-12);
    prev = y;
  }
}

TEST_CASE("touchdown angle stays at or below the vertical mirror") {
  SbmParams sp;
  for (int i = 0; i <= 50; ++i) {
    const double p2 = 0.15 + (0.7 - 0.15) * i / 50.0;
    CHECK(sbm_touchdown_angle({1.0, p2}, sp) <= M_PI);
  }
}
