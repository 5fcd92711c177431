#pragma once

#include <cstdint>
#include <string>

#include "gaitcert/types.hpp"

namespace gaitcert {

/// Physical parameters of the planar five-link biped.  All quantities SI.
/// The shipped defaults define the reference platform for every table and
/// certificate in this repository; they are loosely modeled on the RABBIT
/// class of robots scaled to a one-meter leg.
struct ModelParams {
  double m_torso = 16.0;
  double m_thigh = 6.8;
  double m_shin = 3.2;

  double l_torso = 0.63;  // hip to torso tip
  double l_thigh = 0.5;
  double l_shin = 0.5;

  // COM offsets measured from the proximal joint along the link.
  double c_torso = 0.30;
  double c_thigh = 0.22;
  double c_shin = 0.22;

  // Inertias about each link's own COM.
  double i_torso = 0.55;
  double i_thigh = 0.15;
  double i_shin = 0.07;

  double gravity = 9.81;

  double torque_limit = 150.0;  // symmetric box per actuated joint, N*m
  double knee_min = -2.5;       // knee angles are kept nonpositive
  double knee_max = 0.0;

  double total_mass() const { return m_torso + 2.0 * (m_thigh + m_shin); }
  double leg_length() const { return l_thigh + l_shin; }
  bool valid() const;
};

struct SimConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double event_tol = 1e-10;     // |c_foot| at reported touchdown, m
  double max_step = 0.01;       // s
  double sample_dt = 1e-3;      // dense logging interval, s
  double t_max = 3.0;           // per-step timeout, s
  double hip_clearance = 0.05;  // q_v below this is a fall, m
  // Touchdown is only detected once the swing foot has cleared this height;
  // scuffing of the trailing foot right after liftoff is ignored, as is
  // conventional for point-foot knee walkers.
  double scuff_arm = 0.01;
};

struct GaitConfig {
  int grid_p1 = 8;
  int grid_p2 = 8;
  double kp = 1500.0;
  double kd = 60.0;
  double knee_stance = -0.70;   // base knee flexion during stance
  double knee_clearance = -1.20;  // swing-knee flexion at the clearance peak
  double phase_overrun = 1.1;
  int shoot_steps = 8;          // closed-loop steps per shooting evaluation
  int shoot_iters = 8;
  double speed_rtol = 0.10;     // accepted relative speed/step-length error
};

struct BoundsConfig {
  double y1_min = 0.0;   // compactified Y1
  double y1_max = 2.5;
  int y1_cells = 25;
  int p1_cells = 16;
  int p2_cells = 12;
  // Coarse grids used for the B2 table (previous-P x y1 x P).
  int b2_pprev_p1_cells = 4;
  int b2_pprev_p2_cells = 3;
  int b2_y1_cells = 5;
  int b2_p1_cells = 4;
  int b2_p2_cells = 3;
  int min_samples = 20;
  double eta = 0.02;  // inflation margin
  int refit_max_iters = 3;
};

struct CertConfig {
  int horizon = 3;
  double epsilon = 1e-3;       // strictness margin for the y3/y4 tables
  double spread_factor = 1.5;  // per-cell variation widening
  double y1_floor = 1.0;       // validity floor for the P-only ell tables
};

struct MpcConfig {
  double v_des_min = 0.25;
  double v_des_max = 2.0;
};

struct HarnessConfig {
  int trials = 50;
  int steps = 20;
  double speed_lo = 0.3;
  double speed_hi = 1.9;
  int resample_every = 5;  // steps between desired-speed resamples
};

struct Config {
  ModelParams model;
  SimConfig sim;
  GaitConfig gait;
  ParamBox pbox;
  BoundsConfig bounds;
  CertConfig certs;
  MpcConfig mpc;
  HarnessConfig harness;

  static Config load(const std::string& path);
  void save(const std::string& path) const;
  std::string canonical_json() const;
  /// FNV-1a over the canonical serialization; stamps every derived artifact.
  std::uint64_t hash() const;
};

std::uint64_t fnv1a(const std::string& s);

}  // namespace gaitcert
