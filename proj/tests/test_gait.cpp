#include <doctest.h>

#include <cmath>

#include "gaitcert/anchor_model.hpp"
#include "gaitcert/gait.hpp"
#include "gaitcert/gait_library.hpp"
#include "gaitcert/outputs.hpp"
#include "gaitcert/sim.hpp"

using namespace gaitcert;

TEST_CASE("bezier basics") {
  const Bezier lin = Bezier::linear(-1.0, 3.0);
  for (int i = 0; i <= 10; ++i) {
    const double s = i / 10.0;
    CHECK(lin.eval(s) == doctest::Approx(-1.0 + 4.0 * s).epsilon(1e-12));
    CHECK(lin.deriv(s) == doctest::Approx(4.0).epsilon(1e-12));
  }
  Bezier b;
  b.c = {0.0, 0.3, -0.2, 0.8, 0.1, 1.0};
  const double h = 1e-6;
  for (double s : {0.1, 0.37, 0.62, 0.9}) {
    const double d_fd = (b.eval(s + h) - b.eval(s - h)) / (2.0 * h);
    CHECK(b.deriv(s) == doctest::Approx(d_fd).epsilon(1e-6));
  }
  CHECK(b.eval(0.0) == doctest::Approx(0.0));
  CHECK(b.eval(1.0) == doctest::Approx(1.0));
}

TEST_CASE("reference gait geometry is exact at the endpoints") {
  ModelParams mp;
  GaitConfig gc;
  AnchorModel model(mp);
  for (double p2 : {0.15, 0.4, 0.7}) {
    for (double drive : {-0.1, 0.0, 0.18}) {
      const GaitParams P{1.0, p2};
      if (!gait_feasible(P, drive, mp, gc)) continue;
      const ReferenceGait g = build_gait(P, drive, 0.0, mp, gc);

      // Periodicity through the relabeling: the end pose maps onto the start
      // pose with swapped legs.
      const Vec4 r0 = g.joint_ref(0.0);
      const Vec4 r1 = g.joint_ref(1.0);
      CHECK(r1[2] == doctest::Approx(r0[0]).epsilon(1e-12));  // q4 -> q2
      CHECK(r1[0] == doctest::Approx(r0[2]).epsilon(1e-12));  // q2 -> q4
      CHECK(r1[3] == doctest::Approx(r0[1]).epsilon(1e-12));  // q5 -> q3
      CHECK(r1[1] == doctest::Approx(r0[3]).epsilon(1e-12));  // q3 -> q5

      // Exact tracking at the end of the phase puts the swing foot on the
      // ground exactly one step length ahead.
      Vec5 xi;
      xi << 0.0, r1[0], r1[1], r1[2], r1[3];
      const Vec2 foot = model.swing_foot_pos(xi);
      CHECK(foot[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(foot[0] == doctest::Approx(p2).epsilon(1e-12));
      CHECK(AnchorModel::theta(xi) ==
            doctest::Approx(M_PI + g.alpha1).epsilon(1e-12));
      CHECK(AnchorModel::phi(xi) ==
            doctest::Approx(M_PI - g.alpha0).epsilon(1e-12));

      // Knee references respect the joint stops.
      for (int i = 0; i <= 100; ++i) {
        const double s = i / 100.0;
        const Vec4 r = g.joint_ref(s);
        CHECK(r[1] <= mp.knee_max + 1e-12);
        CHECK(r[1] >= mp.knee_min);
        CHECK(r[3] <= mp.knee_max + 1e-12);
        CHECK(r[3] >= mp.knee_min);
      }
    }
  }
}

TEST_CASE("mid-stance state construction hits theta = pi with the given rate") {
  ModelParams mp;
  GaitConfig gc;
  const ReferenceGait g = build_gait({1.0, 0.4}, 0.1, 0.0, mp, gc);
  for (double w : {0.3, 1.0, 2.0}) {
    Vec5 xi, xd;
    g.mid_stance_state(w, xi, xd);
    CHECK(AnchorModel::theta(xi) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(AnchorModel::theta_dot(xd) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("pd controller drives a displaced joint back toward the reference") {
  ModelParams mp;
  GaitConfig gc;
  const ReferenceGait g = build_gait({1.0, 0.4}, 0.1, 0.0, mp, gc);
  Vec5 xi, xd;
  g.mid_stance_state(1.0, xi, xd);
  const PdResult nominal = pd_torque(xi, xd, g, mp, gc);
  Vec5 xi_disp = xi;
  xi_disp[2] += 0.05;  // stance knee pushed past its reference
  const PdResult disp = pd_torque(xi_disp, xd, g, mp, gc);
  CHECK(disp.torque[1] < nominal.torque[1]);
  // Saturation clamps to the actuator box.
  xi_disp[2] += 2.0;
  const PdResult sat = pd_torque(xi_disp, xd, g, mp, gc);
  CHECK(sat.torque[1] == doctest::Approx(-mp.torque_limit));
  CHECK(sat.saturated >= 1);
}

TEST_CASE("closed-loop walking settles near the commanded gait") {
  ModelParams mp;
  GaitConfig gc;
  SimConfig sc;
  AnchorModel model(mp);

  const GaitParams P{1.0, 0.4};
  const GaitNode node = calibrate_node(P, 0.05, -1.0, model, sc, gc);
  CHECK(std::abs(node.avg_speed - P.p1) <= gc.speed_rtol * P.p1);
  CHECK(std::abs(node.avg_step - P.p2) <= gc.speed_rtol * P.p2);
  CHECK(node.omega_ms > 0.0);

  // The calibrated cycle keeps completing steps and its outputs are safe.
  const ReferenceGait g = build_gait(P, node.drive, node.lean, mp, gc);
  Vec5 xi, xd;
  g.mid_stance_state(node.omega_ms, xi, xd);
  for (int k = 0; k < 5; ++k) {
    const SegmentResult seg = simulate_segment(xi, xd, g, model, sc, gc);
    REQUIRE(seg.termination == StepTermination::mid_stance);
    const StepOutputs o = extract_outputs(seg, mp);
    CHECK(safety_check(o.y1_next, o.y2, o.y3, o.y4));
    xi = seg.xi_end;
    xd = seg.xidot_end;
  }
}
