#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gaitcert/anchor_model.hpp"
#include "gaitcert/config.hpp"
#include "gaitcert/gait.hpp"
#include "gaitcert/sim.hpp"

namespace gaitcert {

/// Calibrated gait-grid node: the drive value found by shooting plus the
/// measured steady-state quantities of the resulting closed-loop cycle.
struct GaitNode {
  double p1 = 0.0, p2 = 0.0;
  double drive = 0.0;
  double lean = 0.0;
  double omega_ms = 0.0;   // mid-stance rate on the cycle
  double duration = 0.0;   // steady step duration
  double avg_speed = 0.0;  // measured, must match p1 within tolerance
  double avg_step = 0.0;   // measured, must match p2 within tolerance
};

/// Grid of calibrated gaits over the admissible parameter box with bilinear
/// interpolation of the calibration quantities between nodes.
struct GaitLibrary {
  std::uint64_t config_hash = 0;
  std::vector<double> p1_grid, p2_grid;
  std::vector<GaitNode> nodes;  // row-major, index = i1 * p2_grid.size() + i2

  const GaitNode& node(int i1, int i2) const {
    return nodes[static_cast<size_t>(i1) * p2_grid.size() + i2];
  }

  /// Interpolated calibration at an arbitrary P (clamped to the box).
  GaitNode interpolate(const GaitParams& P) const;

  /// Ready-to-run reference gait at P.
  ReferenceGait gait_for(const GaitParams& P, const ModelParams& model,
                         const GaitConfig& cfg) const;

  void save(const std::string& path) const;
  static GaitLibrary load(const std::string& path);
};

/// Result of one closed-loop shooting evaluation at a fixed drive.
struct ShootOutcome {
  bool ok = false;
  StepTermination termination = StepTermination::mid_stance;
  double avg_speed = 0.0;
  double avg_step = 0.0;
  double omega_ms = 0.0;
  double duration = 0.0;
};

/// Roll the closed loop for several steps from the gait's own mid-stance and
/// measure the steady cycle (averages over the trailing steps).
ShootOutcome evaluate_gait(const ReferenceGait& gait, double omega0,
                           const AnchorModel& model, const SimConfig& sim,
                           const GaitConfig& gc);

/// Calibrate the drive at one parameter point by shooting so the measured
/// average speed matches p1.  Throws when no acceptable drive is found.
GaitNode calibrate_node(const GaitParams& P, double drive_guess,
                        double omega_guess, const AnchorModel& model,
                        const SimConfig& sim, const GaitConfig& gc);

using ProgressFn = std::function<void(const std::string&)>;

/// Build the full library over the configured grid.
GaitLibrary build_gait_library(const Config& cfg, const AnchorModel& model,
                               const ProgressFn& progress = nullptr);

}  // namespace gaitcert
