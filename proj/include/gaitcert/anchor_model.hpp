#pragma once

#include <array>

#include "gaitcert/config.hpp"
#include "gaitcert/types.hpp"

namespace gaitcert {

/// Planar five-link biped pinned at the stance foot.
///
/// Reduced coordinates xi = (q1..q5): torso angle, stance hip, stance knee,
/// swing hip, swing knee.  Link orientations are linear in xi; every point of
/// interest is a fixed linear combination of unit vectors u(alpha) =
/// (sin alpha, cos alpha), which makes the mass matrix and its configuration
/// gradient available in closed form.
class AnchorModel {
 public:
  explicit AnchorModel(const ModelParams& params);

  const ModelParams& params() const { return params_; }

  // ---- reduced (pinned stance foot) dynamics -----------------------------

  Mat5 mass_matrix(const Vec5& xi) const;
  /// M, Coriolis matrix C (Christoffel form) and gravity vector G.
  void dynamics_terms(const Vec5& xi, const Vec5& xidot, Mat5& M, Mat5& C,
                      Vec5& G) const;
  /// Joint accelerations under the given actuated torques (q2..q5).
  Vec5 accel(const Vec5& xi, const Vec5& xidot, const Vec4& torque) const;

  double kinetic_energy(const Vec5& xi, const Vec5& xidot) const;
  double potential_energy(const Vec5& xi) const;

  // ---- kinematics (stance foot at origin) --------------------------------

  Vec2 hip_pos(const Vec5& xi) const;
  Vec2 hip_vel(const Vec5& xi, const Vec5& xidot) const;
  Vec2 hip_acc(const Vec5& xi, const Vec5& xidot, const Vec5& xiddot) const;
  Vec2 swing_foot_pos(const Vec5& xi) const;
  Vec2 swing_foot_vel(const Vec5& xi, const Vec5& xidot) const;

  static double theta(const Vec5& xi) { return xi[0] + xi[1] + xi[2] / 2.0; }
  static double phi(const Vec5& xi) { return xi[0] + xi[3] + xi[4] / 2.0; }
  static double theta_dot(const Vec5& xidot) {
    return xidot[0] + xidot[1] + xidot[2] / 2.0;
  }
  static double phi_dot(const Vec5& xidot) {
    return xidot[0] + xidot[3] + xidot[4] / 2.0;
  }

  /// Hip-to-stance-foot Euclidean distance.
  double stance_leg_length(const Vec5& xi) const {
    return hip_pos(xi).norm();
  }

  /// Swing-foot height, its time derivative, and the stance leg angle.
  struct GuardInfo {
    double c_foot;
    double cdot_foot;
    double theta;
  };
  GuardInfo guard_distance(const Vec5& xi, const Vec5& xidot) const;

  // ---- impact ------------------------------------------------------------

  struct ImpactResult {
    Vec5 xi;        // relabeled configuration over the new stance foot
    Vec5 xidot;     // post-impact, relabeled velocities
    Vec2 impulse;   // ground impulse at the new stance foot
    double ke_pre;
    double ke_post;
    bool liftoff;   // non-compressive impulse; gait invalid
  };
  /// Plastic impact at the swing foot followed by stance/swing relabeling.
  ImpactResult impact(const Vec5& xi, const Vec5& xidot) const;

  // ---- RobotState conversion --------------------------------------------

  RobotState make_state(const Vec5& xi, const Vec5& xidot, StanceSide side,
                        double time) const;
  static Vec5 xi_of(const RobotState& s) { return s.q.tail<5>(); }
  static Vec5 xidot_of(const RobotState& s) { return s.qdot.tail<5>(); }

  /// [qdot; qddot] for the full 7-coordinate state under the pivot model.
  Vec14 continuous_dynamics(const RobotState& s, const Vec4& torque) const;

 private:
  // One rigid link: COM position = sum of coeff * u(angle slot), orientation
  // angle = a . xi.  Angle slots: 0 torso, 1 stance thigh, 2 stance shin,
  // 3 swing thigh, 4 swing shin.
  struct Link {
    double mass;
    double inertia;
    Vec5 a;                       // angle row
    int nterms;
    std::array<double, 4> coeff;  // position terms
    std::array<int, 4> slot;
  };

  void angles(const Vec5& xi, std::array<double, 5>& alpha) const;

  ModelParams params_;
  std::array<Link, 5> links_;       // reduced model (torso first)
  std::array<Vec5, 5> slot_rows_;   // angle row per slot
};

}  // namespace gaitcert
