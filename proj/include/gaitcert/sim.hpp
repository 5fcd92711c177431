#pragma once

#include <vector>

#include "gaitcert/anchor_model.hpp"
#include "gaitcert/config.hpp"
#include "gaitcert/gait.hpp"
#include "gaitcert/types.hpp"

namespace gaitcert {

/// Why a simulated step segment stopped.
enum class StepTermination {
  mid_stance,           // reached the next mid-stance: nominal
  fall_backward,        // stance angle hit pi/2
  fall_forward,         // stance angle hit 3*pi/2
  hip_low,              // hip dropped below the clearance height
  liftoff,              // impact impulse not compressive
  premature_touchdown,  // swing foot struck ground again before mid-stance
  timeout,              // exceeded the per-phase wall-clock limit
  integrator_failure,   // step-size underflow
};

const char* to_string(StepTermination t);

/// Compact trajectory sample used for output extraction.
struct OutputSample {
  double t;
  double theta, theta_dot;  // stance leg angle and rate
  double qv;                // hip height
  double lst;               // stance leg length
};

/// Full-state sample (xi, xidot stacked) for detailed logging.
struct TimedSample {
  double t;
  Vec10 x;
};

/// One mid-stance-to-mid-stance segment of the closed-loop hybrid system.
struct SegmentResult {
  StepTermination termination = StepTermination::integrator_failure;
  bool touchdown = false;
  double t_touchdown = 0.0;
  double t_end = 0.0;
  double phi_td = 0.0;    // swing leg angle at touchdown (valid iff touchdown)
  double y1_end = 0.0;    // theta-dot at the terminal mid-stance
  Vec5 xi_end = Vec5::Zero();
  Vec5 xidot_end = Vec5::Zero();
  double theta_min = 0.0, theta_max = 0.0;  // over the whole segment
  double step_length = 0.0;  // foot-to-foot distance at touchdown
  double advance = 0.0;      // world-frame hip travel over the segment
  double impact_ke_ratio = 0.0;
  int saturated_samples = 0;
  std::vector<OutputSample> samples;  // at sim.sample_dt plus event points
  std::vector<std::vector<TimedSample>> arcs;  // filled iff record_full
};

/// Simulate from a mid-stance state until the next mid-stance (or failure)
/// under one phase-indexed reference gait.  The touchdown impact and the
/// stance relabeling happen inside; all terminal quantities are expressed
/// over the new stance foot.
SegmentResult simulate_segment(const Vec5& xi0, const Vec5& xidot0,
                               const ReferenceGait& gait,
                               const AnchorModel& model, const SimConfig& sim,
                               const GaitConfig& gc, bool record_full = false);

/// Simulate from an arbitrary stance state until touchdown only; the impact
/// and relabeling are applied to the terminal state.
SegmentResult simulate_to_touchdown(const Vec5& xi0, const Vec5& xidot0,
                                    const ReferenceGait& gait,
                                    const AnchorModel& model,
                                    const SimConfig& sim, const GaitConfig& gc,
                                    bool record_full = false);

}  // namespace gaitcert
