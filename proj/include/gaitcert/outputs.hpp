#pragma once

#include <vector>

#include "gaitcert/config.hpp"
#include "gaitcert/ext_real.hpp"
#include "gaitcert/sim.hpp"

namespace gaitcert {

/// Step-to-step safety outputs of one mid-stance segment.
///
/// y1_next: stance rate at the next mid-stance.  When the next mid-stance is
///   never reached it is the (nonpositive) shortfall rate computed at the
///   last velocity reversal, or -inf when not even that exists.
/// y2: swing leg angle at touchdown, 2*pi when the step never touched down.
/// y3 / y4: extremes of the stance angle over the segment; -inf/+inf when the
///   segment did not complete.
struct StepOutputs {
  ExtReal y1_next{0.0};
  ExtReal y2{0.0};
  ExtReal y3{0.0};
  ExtReal y4{0.0};
  bool completed = false;
  StepTermination termination = StepTermination::integrator_failure;
};

StepOutputs extract_outputs(const SegmentResult& seg, const ModelParams& model);

/// Per-step safety predicate on the four outputs.
bool safety_check(const ExtReal& y1, const ExtReal& y2, const ExtReal& y3,
                  const ExtReal& y4);

/// Last theta = pi crossing with nonnegative rate in a dense sample log,
/// refined by bisection on the piecewise-linear interpolant.  Returns false
/// when no such crossing exists.
bool last_mid_stance(const std::vector<OutputSample>& samples, double tol,
                     double* t_ms, double* theta_dot_ms);

/// Rate shortfall at the last velocity reversal: -sqrt(2 g (l_st - q_v))/l_st
/// evaluated where theta_dot last crossed zero from above.  Returns false
/// when the rate never reversed.
bool shortfall_rate(const std::vector<OutputSample>& samples, double gravity,
                    double* rate);

}  // namespace gaitcert
