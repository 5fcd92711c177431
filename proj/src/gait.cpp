#include "gaitcert/gait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaitcert {

namespace {
constexpr double kPi = std::numbers::pi;

double bernstein5(const std::array<double, 6>& c, double s) {
  static constexpr double binom[6] = {1, 5, 10, 10, 5, 1};
  const double u = 1.0 - s;
  double su = 1.0, acc = 0.0;
  double spow[6];
  for (int i = 0; i < 6; ++i) {
    spow[i] = su;
    su *= s;
  }
  double upow = 1.0;
  for (int i = 5; i >= 0; --i) {
    acc += binom[i] * c[i] * spow[i] * upow;
    upow *= u;
  }
  return acc;
}

// Late-stance knee-extension ramp: flat at zero early, rises to one by
// touchdown with zero endpoint slope.
const Bezier& push_ramp() {
  static const Bezier shape = [] {
    Bezier b;
    b.c = {0.0, 0.0, 0.0, 0.4, 1.0, 1.0};
    return b;
  }();
  return shape;
}

// Early-swing release of the leftover extension: one at the step start,
// tucked away quickly so the trailing leg clears the ground.
const Bezier& release_ramp() {
  static const Bezier shape = [] {
    Bezier b;
    b.c = {1.0, 0.5, 0.1, 0.0, 0.0, 0.0};
    return b;
  }();
  return shape;
}

// Swing-knee flexion bump for ground clearance: lifts fast right after
// liftoff, peaks before mid-swing, and fades out into the landing.
// Normalized to unit peak.
const Bezier& clearance_shape() {
  static const Bezier shape = [] {
    Bezier b;
    b.c = {0.0, 1.0, 1.8, 1.5, 0.8, 0.0};
    double peak = 0.0;
    for (int i = 0; i <= 1000; ++i)
      peak = std::max(peak, b.eval(i / 1000.0));
    for (double& v : b.c) v /= peak;
    return b;
  }();
  return shape;
}

// Swing-leg progress: rises to a slight overshoot and retracts into the
// landing.  The backward foot motion at touchdown cancels part of the hip's
// forward speed, which softens the impact.
const Bezier& swing_progress() {
  static const Bezier shape = [] {
    Bezier b;
    b.c = {0.0, 0.06, 0.55, 1.2, 1.2, 1.0};
    return b;
  }();
  return shape;
}
}  // namespace

double Bezier::eval(double s) const { return bernstein5(c, s); }

double Bezier::deriv(double s) const {
  std::array<double, 6> d{};
  for (int i = 0; i < 5; ++i) d[i] = 5.0 * (c[i + 1] - c[i]);
  static constexpr double binom4[5] = {1, 4, 6, 4, 1};
  const double u = 1.0 - s;
  double acc = 0.0;
  double spow = 1.0;
  for (int i = 0; i < 5; ++i) {
    double upow = 1.0;
    for (int j = 0; j < 4 - i; ++j) upow *= u;
    acc += binom4[i] * d[i] * spow * upow;
    spow *= s;
  }
  return acc;
}

Bezier Bezier::linear(double a, double b) {
  Bezier r;
  for (int i = 0; i < 6; ++i) r.c[i] = a + (b - a) * i / 5.0;
  return r;
}

Bezier Bezier::scaled(double k) const {
  Bezier r = *this;
  for (double& v : r.c) v *= k;
  return r;
}

Bezier Bezier::plus(const Bezier& o) const {
  Bezier r = *this;
  for (int i = 0; i < 6; ++i) r.c[i] += o.c[i];
  return r;
}

double ReferenceGait::theta_start() const { return kPi - alpha0; }
double ReferenceGait::theta_td() const { return kPi + alpha1; }

double ReferenceGait::phase(double theta, double overrun) const {
  const double s = (theta - theta_start()) / span();
  return std::clamp(s, 0.0, overrun);
}

Vec4 ReferenceGait::joint_ref(double s) const {
  return Vec4(joints[0].eval(s), joints[1].eval(s), joints[2].eval(s),
              joints[3].eval(s));
}

Vec4 ReferenceGait::joint_ref_deriv(double s) const {
  return Vec4(joints[0].deriv(s), joints[1].deriv(s), joints[2].deriv(s),
              joints[3].deriv(s));
}

void ReferenceGait::mid_stance_state(double omega, Vec5& xi,
                                     Vec5& xidot) const {
  const double s = s_mid();
  const Vec4 r = joint_ref(s);
  xi << lean, r[0], r[1], r[2], r[3];
  const double sdot = omega / span();
  const Vec4 rd = joint_ref_deriv(s) * sdot;
  // Torso rate closes the loop so theta-dot equals omega exactly.
  const double q1dot = omega - rd[0] - rd[1] / 2.0;
  xidot << q1dot, rd[0], rd[1], rd[2], rd[3];
}

double leg_length_at_knee(double knee, const ModelParams& model) {
  const double a = model.l_thigh, b = model.l_shin;
  return std::sqrt(a * a + b * b + 2.0 * a * b * std::cos(knee));
}

namespace {
// Touchdown geometry for a stance leg of length l_td and a landing leg of
// length l_land separated by step length p2 on flat ground.  Returns false
// when the triangle does not exist or the hip would not lie between the
// feet.
bool touchdown_angles(double p2, double l_td, double l_land, double* a1,
                      double* a0) {
  const double xh = (p2 * p2 - l_land * l_land + l_td * l_td) / (2.0 * p2);
  if (xh <= 0.05 * p2 || p2 - xh <= 0.05 * p2) return false;
  const double h2 = l_td * l_td - xh * xh;
  if (h2 <= 1e-8) return false;
  const double h = std::sqrt(h2);
  *a1 = std::atan2(xh, h);        // stance angle past vertical
  *a0 = std::atan2(p2 - xh, h);   // landing angle ahead of vertical
  return true;
}

// Knee angle (nonpositive) giving the requested leg length, clamped to the
// admissible joint range.
double knee_for_length(double l, const ModelParams& model) {
  const double a = model.l_thigh, b = model.l_shin;
  const double ck =
      std::clamp((l * l - a * a - b * b) / (2.0 * a * b), -1.0, 1.0);
  return std::clamp(-std::acos(ck), model.knee_min + 0.1, -0.02);
}

// Landing extension whose leg length puts the hip at the requested fraction
// of the step at touchdown.
bool land_for_fraction(double p2, double l_td, double frac,
                       const ModelParams& model, const GaitConfig& cfg,
                       double* e) {
  const double ll2 = p2 * p2 + l_td * l_td - 2.0 * p2 * frac * p2;
  if (ll2 <= 0.0) return false;
  const double k_land = knee_for_length(std::sqrt(ll2), model);
  *e = k_land - cfg.knee_stance;
  return true;
}
}  // namespace

bool auto_land(const GaitParams& P, double drive, const ModelParams& model,
               const GaitConfig& cfg, double* land) {
  const double lo = 0.30, hi = 0.85;
  const double l_td = leg_length_at_knee(cfg.knee_stance + drive, model);
  const double l_base = leg_length_at_knee(cfg.knee_stance, model);
  const double xh =
      (P.p2 * P.p2 + l_td * l_td - l_base * l_base) / (2.0 * P.p2);
  const double frac = xh / P.p2;
  if (frac >= lo && frac <= hi) {
    *land = 0.0;
    return true;
  }
  return land_for_fraction(P.p2, l_td, std::clamp(frac, lo, hi), model, cfg,
                           land);
}

bool min_land(const GaitParams& P, double drive, const ModelParams& model,
              const GaitConfig& cfg, double* land) {
  const double l_td = leg_length_at_knee(cfg.knee_stance + drive, model);
  return land_for_fraction(P.p2, l_td, 0.88, model, cfg, land);
}

bool gait_feasible(const GaitParams& P, double drive, double land,
                   const ModelParams& model, const GaitConfig& cfg) {
  const double knee_td = cfg.knee_stance + drive;
  if (knee_td > model.knee_max || knee_td < model.knee_min) return false;
  const double knee_land = cfg.knee_stance + land;
  if (knee_land > model.knee_max || knee_land < model.knee_min + 0.05)
    return false;
  double a1, a0;
  return touchdown_angles(P.p2, leg_length_at_knee(knee_td, model),
                          leg_length_at_knee(knee_land, model), &a1, &a0);
}

bool gait_feasible(const GaitParams& P, double drive, const ModelParams& model,
                   const GaitConfig& cfg) {
  double e;
  if (!auto_land(P, drive, model, cfg, &e)) return false;
  return gait_feasible(P, drive, e, model, cfg);
}

ReferenceGait build_gait(const GaitParams& P, double drive, double lean,
                         const ModelParams& model, const GaitConfig& cfg) {
  double e;
  if (!auto_land(P, drive, model, cfg, &e))
    throw std::invalid_argument("touchdown geometry infeasible");
  return build_gait(P, drive, e, lean, model, cfg);
}

ReferenceGait build_gait(const GaitParams& P, double drive, double land,
                         double lean, const ModelParams& model,
                         const GaitConfig& cfg) {
  ReferenceGait g;
  g.P = P;
  g.lean = lean;
  g.drive = drive;
  g.land = land;

  const double l_td = leg_length_at_knee(cfg.knee_stance + drive, model);
  const double l_land = leg_length_at_knee(cfg.knee_stance + g.land, model);
  if (!touchdown_angles(P.p2, l_td, l_land, &g.alpha1, &g.alpha0))
    throw std::invalid_argument("touchdown geometry infeasible");

  const double th0 = kPi - g.alpha0;
  const double th1 = kPi + g.alpha1;

  // Stance knee: absorbs the landing extension early, holds the base
  // flexion, then extends by `drive` through touchdown.
  const Bezier q3 = Bezier::linear(cfg.knee_stance, cfg.knee_stance)
                        .plus(release_ramp().scaled(g.land))
                        .plus(push_ramp().scaled(drive));
  // Swing knee: releases the inherited drive, dips for clearance, and lands
  // with the landing extension.
  const Bezier q5 =
      Bezier::linear(cfg.knee_stance, cfg.knee_stance)
          .plus(release_ramp().scaled(drive))
          .plus(push_ramp().scaled(g.land))
          // Short steps sweep a small arc and need little foot lift; a full
          // clearance bump there would exceed the actuator box at the
          // resulting high cadence.
          .plus(clearance_shape().scaled((cfg.knee_clearance - cfg.knee_stance) *
                                         std::min(1.0, P.p2 / 0.45)));
  // Stance hip follows the (linear-in-phase) stance leg angle.
  const Bezier q2 =
      Bezier::linear(th0 - lean, th1 - lean).plus(q3.scaled(-0.5));
  // Swing hip carries the leg from behind (the angle the stance leg ended
  // the previous step with) to the landing angle.
  const Bezier q4 = Bezier::linear(th1 - lean, th1 - lean)
                        .plus(swing_progress().scaled(-g.span()))
                        .plus(q5.scaled(-0.5));

  g.joints = {q2, q3, q4, q5};
  return g;
}

PdResult pd_torque(const Vec5& xi, const Vec5& xidot, const ReferenceGait& g,
                   const ModelParams& model, const GaitConfig& cfg) {
  const double theta = AnchorModel::theta(xi);
  const double theta_dot = AnchorModel::theta_dot(xidot);
  const double s = g.phase(theta, cfg.phase_overrun);
  const double span = g.span();
  const bool inside =
      theta > g.theta_start() && theta < g.theta_start() + span * cfg.phase_overrun;
  const double sdot = inside ? theta_dot / span : 0.0;

  const Vec4 ref = g.joint_ref(s);
  const Vec4 ref_dot = g.joint_ref_deriv(s) * sdot;

  PdResult out;
  for (int j = 0; j < 4; ++j) {
    const double q = xi[j + 1];
    const double qd = xidot[j + 1];
    double u = cfg.kp * (ref[j] - q) + cfg.kd * (ref_dot[j] - qd);
    if (u > model.torque_limit) {
      u = model.torque_limit;
      ++out.saturated;
    } else if (u < -model.torque_limit) {
      u = -model.torque_limit;
      ++out.saturated;
    }
    out.torque[j] = u;
  }
  return out;
}

}  // namespace gaitcert
