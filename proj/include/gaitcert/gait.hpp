#pragma once

#include <array>

#include "gaitcert/anchor_model.hpp"
#include "gaitcert/config.hpp"
#include "gaitcert/types.hpp"

namespace gaitcert {

/// Quintic Bezier curve on s in [0, 1].
struct Bezier {
  std::array<double, 6> c{};

  double eval(double s) const;
  double deriv(double s) const;

  static Bezier linear(double a, double b);
  Bezier scaled(double k) const;
  Bezier plus(const Bezier& o) const;
};

/// Periodic joint-space reference for one step, tracked by the PD
/// controller.  Joint order: stance hip q2, stance knee q3, swing hip q4,
/// swing knee q5, each a Bezier over the theta-based phase.
struct ReferenceGait {
  GaitParams P;
  double alpha0 = 0.0;    // stance angle below vertical at the step start
  double alpha1 = 0.0;    // stance angle past vertical at touchdown
  double lean = 0.0;      // torso reference angle
  double drive = 0.0;     // stance-knee extension at touchdown, rad
  double land = 0.0;      // landing-knee extension at touchdown, rad
  double omega_ms = 0.0;  // limit-cycle mid-stance theta-dot (measured)
  double duration = 0.0;  // measured steady step duration, s
  std::array<Bezier, 4> joints;

  double theta_start() const;  // pi - alpha0
  double theta_td() const;     // pi + alpha1
  double span() const { return alpha0 + alpha1; }
  /// Phase value at which the stance leg is vertical.
  double s_mid() const { return alpha0 / span(); }

  /// theta-based phase, clipped to [0, overrun].
  double phase(double theta, double overrun) const;

  Vec4 joint_ref(double s) const;
  Vec4 joint_ref_deriv(double s) const;  // d(ref)/ds

  /// Configuration and velocity at mid-stance with the given stance rate.
  void mid_stance_state(double omega, Vec5& xi, Vec5& xidot) const;
};

/// Kinematic gait construction.  The swing leg is steered from behind to
/// ahead over the phase, while the stance knee extends by `drive` late in
/// stance and is still extended at touchdown.  Positive drive raises the hip
/// against load (push-off work), negative drive lowers it.  When the rear
/// and front leg lengths would place the hip too close to either foot at
/// touchdown -- which happens at short step lengths -- the landing knee is
/// given a compensating extension, chosen automatically so the hip lands at
/// a workable fraction of the step; the stance knee then absorbs that
/// extension early in the next step.  The reference is exactly periodic
/// through the relabeling because each knee starts a step at the angle the
/// opposite knee ended with.  Throws when the touchdown geometry is
/// infeasible for the requested step length.
ReferenceGait build_gait(const GaitParams& P, double drive, double lean,
                         const ModelParams& model, const GaitConfig& cfg);

/// As above with an explicit landing-knee extension.  Negative values land
/// on a flexed knee: the robot drops onto a crouched leg and stands up
/// early in the next stance, which shortens the post-impact climb and does
/// work against gravity under load.  That is the main energy source for
/// long steps, where the plain push-off cannot cover the impact loss.
ReferenceGait build_gait(const GaitParams& P, double drive, double land,
                         double lean, const ModelParams& model,
                         const GaitConfig& cfg);

/// Landing extension chosen automatically from the touchdown geometry
/// (zero when the plain landing already works).
bool auto_land(const GaitParams& P, double drive, const ModelParams& model,
               const GaitConfig& cfg, double* land);

/// Most-crouched admissible landing extension for this drive and step.
bool min_land(const GaitParams& P, double drive, const ModelParams& model,
              const GaitConfig& cfg, double* land);

/// True when the touchdown geometry of build_gait exists for this drive.
bool gait_feasible(const GaitParams& P, double drive, const ModelParams& model,
                   const GaitConfig& cfg);
bool gait_feasible(const GaitParams& P, double drive, double land,
                   const ModelParams& model, const GaitConfig& cfg);

/// Leg length at a given knee angle.
double leg_length_at_knee(double knee, const ModelParams& model);

struct PdResult {
  Vec4 torque;
  int saturated = 0;  // number of clamped joints
};

/// Classical PD tracking of the phase-indexed reference, saturated at the
/// actuator box.
PdResult pd_torque(const Vec5& xi, const Vec5& xidot, const ReferenceGait& g,
                   const ModelParams& model, const GaitConfig& cfg);

}  // namespace gaitcert
