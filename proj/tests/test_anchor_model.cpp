#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "gaitcert/anchor_model.hpp"
#include "gaitcert/integrator.hpp"

using namespace gaitcert;

namespace {

// Independent kinematics oracle: walks the chain foot -> knee -> hip ->
// torso/swing explicitly, instead of the precomputed coefficient tables used
// by the implementation.
struct FkOracle {
  ModelParams p;

  static Vec2 dir(double a) { return {std::sin(a), std::cos(a)}; }

  struct Body {
    Vec2 com;
    double angle;
    double mass;
    double inertia;
  };

  std::array<Body, 5> bodies(const Vec5& xi) const {
    const double a_torso = xi[0];
    const double a_th_st = xi[0] + xi[1];
    const double a_sh_st = a_th_st + xi[2];
    const double a_th_sw = xi[0] + xi[3];
    const double a_sh_sw = a_th_sw + xi[4];

    const Vec2 foot = Vec2::Zero();
    const Vec2 knee_st = foot - p.l_shin * dir(a_sh_st);
    const Vec2 hip = knee_st - p.l_thigh * dir(a_th_st);
    const Vec2 knee_sw = hip + p.l_thigh * dir(a_th_sw);

    std::array<Body, 5> b;
    b[0] = {hip + p.c_torso * dir(a_torso), a_torso, p.m_torso, p.i_torso};
    b[1] = {hip + p.c_thigh * dir(a_th_st), a_th_st, p.m_thigh, p.i_thigh};
    b[2] = {knee_st + p.c_shin * dir(a_sh_st), a_sh_st, p.m_shin, p.i_shin};
    b[3] = {hip + p.c_thigh * dir(a_th_sw), a_th_sw, p.m_thigh, p.i_thigh};
    b[4] = {knee_sw + p.c_shin * dir(a_sh_sw), a_sh_sw, p.m_shin, p.i_shin};
    return b;
  }

  Vec2 hip(const Vec5& xi) const {
    const double a_th_st = xi[0] + xi[1];
    const double a_sh_st = a_th_st + xi[2];
    return -p.l_shin * dir(a_sh_st) - p.l_thigh * dir(a_th_st);
  }

  Vec2 swing_foot(const Vec5& xi) const {
    const double a_th_sw = xi[0] + xi[3];
    const double a_sh_sw = a_th_sw + xi[4];
    return hip(xi) + p.l_thigh * dir(a_th_sw) + p.l_shin * dir(a_sh_sw);
  }

  double potential(const Vec5& xi) const {
    double v = 0.0;
    for (const Body& b : bodies(xi)) v += b.mass * p.gravity * b.com[1];
    return v;
  }

  // Kinetic energy via central differencing of the chain positions.
  double kinetic(const Vec5& xi, const Vec5& xidot) const {
    const double h = 1e-6;
    const auto plus = bodies(xi + h * xidot);
    const auto minus = bodies(xi - h * xidot);
    double ke = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Vec2 v = (plus[i].com - minus[i].com) / (2.0 * h);
      const double w = (plus[i].angle - minus[i].angle) / (2.0 * h);
      ke += 0.5 * plus[i].mass * v.squaredNorm() +
            0.5 * plus[i].inertia * w * w;
    }
    return ke;
  }

  // Planar angular momentum about a world point, with velocities from
  // central differencing.  Link angles are clockwise-positive (measured from
  // the +y axis), so the counterclockwise body spin is the negated angle
  // rate.
  double ang_momentum(const Vec5& xi, const Vec5& xidot,
                      const Vec2& point) const {
    const double h = 1e-7;
    const auto now = bodies(xi);
    const auto plus = bodies(xi + h * xidot);
    const auto minus = bodies(xi - h * xidot);
    double L = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Vec2 v = (plus[i].com - minus[i].com) / (2.0 * h);
      const double w = (plus[i].angle - minus[i].angle) / (2.0 * h);
      const Vec2 r = now[i].com - point;
      L += now[i].mass * (r[0] * v[1] - r[1] * v[0]) - now[i].inertia * w;
    }
    return L;
  }
};

Vec5 random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec5 xi;
  xi << 0.3 * u(rng), M_PI + 0.45 * u(rng), -0.45 + 0.4 * u(rng),
      M_PI + 0.45 * u(rng), -0.45 + 0.4 * u(rng);
  return xi;
}

Vec5 random_rate(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec5 xd;
  for (int i = 0; i < 5; ++i) xd[i] = u(rng);
  return xd;
}

}  // namespace

TEST_CASE("kinematics agree with the explicit chain") {
  ModelParams p;
  AnchorModel m(p);
  FkOracle fk{p};
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const Vec5 xi = random_pose(rng);
    CHECK((m.hip_pos(xi) - fk.hip(xi)).norm() < 1e-12);
    CHECK((m.swing_foot_pos(xi) - fk.swing_foot(xi)).norm() < 1e-12);

    const Vec5 xd = random_rate(rng);
    const double h = 1e-6;
    const Vec2 v_fd =
        (fk.hip(xi + h * xd) - fk.hip(xi - h * xd)) / (2.0 * h);
    CHECK((m.hip_vel(xi, xd) - v_fd).norm() < 1e-7);
    const Vec2 vf_fd =
        (fk.swing_foot(xi + h * xd) - fk.swing_foot(xi - h * xd)) / (2.0 * h);
    CHECK((m.swing_foot_vel(xi, xd) - vf_fd).norm() < 1e-7);
  }
}

TEST_CASE("energies match the finite-difference oracle") {
  ModelParams p;
  AnchorModel m(p);
  FkOracle fk{p};
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    const Vec5 xi = random_pose(rng);
    const Vec5 xd = random_rate(rng);
    CHECK(m.potential_energy(xi) ==
          doctest::Approx(fk.potential(xi)).epsilon(1e-10));
    CHECK(m.kinetic_energy(xi, xd) ==
          doctest::Approx(fk.kinetic(xi, xd)).epsilon(1e-7));
  }
}

TEST_CASE("mass matrix is symmetric positive definite") {
  ModelParams p;
  AnchorModel m(p);
  std::mt19937_64 rng(13);
  for (int k = 0; k < 30; ++k) {
    const Vec5 xi = random_pose(rng);
    const Mat5 M = m.mass_matrix(xi);
    CHECK((M - M.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat5> es(M);
    CHECK(es.eigenvalues().minCoeff() > 1e-6);
  }
}

TEST_CASE("gravity vector matches the potential gradient") {
  ModelParams p;
  AnchorModel m(p);
  FkOracle fk{p};
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const Vec5 xi = random_pose(rng);
    Mat5 M, C;
    Vec5 G;
    m.dynamics_terms(xi, Vec5::Zero(), M, C, G);
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i) {
      Vec5 e = Vec5::Zero();
      e[i] = h;
      const double g_fd =
          (fk.potential(xi + e) - fk.potential(xi - e)) / (2.0 * h);
      CHECK(G[i] == doctest::Approx(g_fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("coriolis matrix satisfies the power-balance identity") {
  ModelParams p;
  AnchorModel m(p);
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) {
    const Vec5 xi = random_pose(rng);
    const Vec5 xd = random_rate(rng);
    Mat5 M, C;
    Vec5 G;
    m.dynamics_terms(xi, xd, M, C, G);
    const double h = 1e-6;
    const Mat5 Mdot =
        (m.mass_matrix(xi + h * xd) - m.mass_matrix(xi - h * xd)) / (2.0 * h);
    // xd' (Mdot - 2C) xd = 0 makes the unforced energy exactly conserved.
    CHECK(std::abs(xd.dot((Mdot - 2.0 * C) * xd)) < 1e-6);
  }
}

TEST_CASE("passive swing conserves total energy") {
  ModelParams p;
  AnchorModel m(p);
  std::mt19937_64 rng(23);
  const Vec5 xi0 = random_pose(rng);
  const Vec5 xd0 = 0.5 * random_rate(rng);

  auto deriv = [&](double, const Vec10& x) {
    Vec10 dx;
    dx.head<5>() = x.tail<5>();
    dx.tail<5>() = m.accel(x.head<5>(), x.tail<5>(), Vec4::Zero());
    return dx;
  };
  IntegratorOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;
  auto rk = make_rk45<Vec10>(deriv, opt);
  Vec10 x0;
  x0.head<5>() = xi0;
  x0.tail<5>() = xd0;
  const double e0 = m.kinetic_energy(xi0, xd0) + m.potential_energy(xi0);
  auto r = rk.integrate(0.0, x0, 0.8, {});
  REQUIRE(r.reason == StopReason::reached_t_end);
  const double e1 = m.kinetic_energy(r.x.head<5>(), r.x.tail<5>()) +
                    m.potential_energy(r.x.head<5>());
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-8));
}

TEST_CASE("impact dissipates energy and conserves momentum about contact") {
  ModelParams p;
  AnchorModel m(p);
  FkOracle fk{p};
  std::mt19937_64 rng(29);
  int checked = 0;
  for (int k = 0; k < 60 && checked < 20; ++k) {
    // Late-stance poses with the swing foot out front and moving down.
    Vec5 xi = random_pose(rng);
    xi[1] = M_PI + 0.25 + 0.1 * std::uniform_real_distribution<>(0, 1)(rng);
    xi[3] = M_PI - 0.25 - 0.1 * std::uniform_real_distribution<>(0, 1)(rng);
    Vec5 xd = random_rate(rng);
    if (AnchorModel::theta_dot(xd) <= 0.2) continue;
    const auto r = m.impact(xi, xd);
    if (r.liftoff) continue;
    ++checked;

    CHECK(r.ke_post <= r.ke_pre + 1e-10);
    CHECK(r.impulse[1] > 0.0);

    // Relabeling is a pure swap: applying it twice restores the labels.
    Vec5 xi2;
    xi2 << r.xi[0], r.xi[3], r.xi[4], r.xi[1], r.xi[2];
    CHECK((xi2 - xi).norm() < 1e-12);

    // Angular momentum about the impact point is unchanged by an impulsive
    // force acting there.
    const Vec2 contact = fk.swing_foot(xi);
    const double L_pre = fk.ang_momentum(xi, xd, contact);
    const double L_post = fk.ang_momentum(r.xi, r.xidot, Vec2::Zero());
    CHECK(L_post == doctest::Approx(L_pre).epsilon(1e-6));
  }
  CHECK(checked >= 20);
}
