#pragma once

#include <utility>
#include <vector>

#include "gaitcert/ext_real.hpp"
#include "gaitcert/types.hpp"

namespace gaitcert {

/// Point-mass biped: mass M at the hip, two massless legs of length l.
/// Stance dynamics are an inverted pendulum with hip height -l*cos(theta);
/// touchdown happens at theta = pi + alpha with alpha = asin(p2 / (2l)) and
/// the plastic impact scales the angular rate by cos(2*alpha).
struct SbmParams {
  double mass = 36.0;
  double l = 1.0;
  double g = 9.81;
};

enum class SbmBranch {
  reachable,  // next mid-stance reached with nonnegative rate
  deficit,    // velocity reverses before mid-stance; output is -sqrt(2g dh)/l
  stalled,    // input rate negative: mid-stance already unreachable
};

/// Step-to-step map for the mid-stance angular rate (f_y1hat).
double sbm_step_map_y1(double y1, const GaitParams& P, const SbmParams& sp);
SbmBranch sbm_branch(double y1, const GaitParams& P, const SbmParams& sp);

/// Swing-leg angle at touchdown (f_y2hat); depends on P only.
double sbm_touchdown_angle(const GaitParams& P, const SbmParams& sp);

/// Extremes of the stance angle between consecutive mid-stances
/// (f_y3hat, f_y4hat).
std::pair<ExtReal, ExtReal> sbm_range_y3_y4(double y1, const GaitParams& P,
                                            const SbmParams& sp);

double sbm_alpha(double p2, const SbmParams& sp);

/// Simulation oracle: integrates the stance pendulum with event detection
/// and applies the plastic impact, independent of the closed forms above.
struct SbmStepOutcome {
  SbmBranch branch = SbmBranch::reachable;
  double y1_next = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double phi_touchdown = 0.0;  // 2*pi when touchdown never happened
  bool touchdown = false;
};
SbmStepOutcome sbm_simulate_step(double y1, const GaitParams& P,
                                 const SbmParams& sp, double tol = 1e-12);

struct SbmSample {
  double t, theta, theta_dot;
};
/// Raw stance-phase trajectory from an arbitrary initial condition, stopped
/// at touchdown, velocity reversal, or backward fall.
std::vector<SbmSample> sbm_trajectory(double theta0, double theta_dot0,
                                      const GaitParams& P, const SbmParams& sp,
                                      double t_max);

}  // namespace gaitcert
