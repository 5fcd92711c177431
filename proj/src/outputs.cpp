#include "gaitcert/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaitcert {

namespace {
constexpr double kPi = std::numbers::pi;
}

StepOutputs extract_outputs(const SegmentResult& seg,
                            const ModelParams& model) {
  StepOutputs o;
  o.termination = seg.termination;
  o.completed = seg.termination == StepTermination::mid_stance;

  o.y2 = seg.touchdown ? ExtReal(seg.phi_td) : ExtReal(2.0 * kPi);

  if (o.completed) {
    o.y1_next = ExtReal(seg.y1_end);
    o.y3 = ExtReal(seg.theta_min);
    o.y4 = ExtReal(seg.theta_max);
    return o;
  }

  o.y3 = ExtReal::neg_inf();
  o.y4 = ExtReal::pos_inf();
  double rate;
  if (shortfall_rate(seg.samples, model.gravity, &rate))
    o.y1_next = ExtReal(rate);
  else
    o.y1_next = ExtReal::neg_inf();
  return o;
}

bool safety_check(const ExtReal& y1, const ExtReal& y2, const ExtReal& y3,
                  const ExtReal& y4) {
  return y1 >= 0.0 && y2 <= kPi && y3 > kPi / 2.0 && y4 < 3.0 * kPi / 2.0;
}

bool last_mid_stance(const std::vector<OutputSample>& samples, double tol,
                     double* t_ms, double* theta_dot_ms) {
  for (int i = static_cast<int>(samples.size()) - 2; i >= 0; --i) {
    const OutputSample& a = samples[i];
    const OutputSample& b = samples[i + 1];
    const double ga = a.theta - kPi, gb = b.theta - kPi;
    if (ga == 0.0 && a.theta_dot >= 0.0) {
      *t_ms = a.t;
      *theta_dot_ms = a.theta_dot;
      return true;
    }
    if (ga * gb < 0.0) {
      double lo = a.t, hi = b.t;
      auto theta_at = [&](double t) {
        const double s = (t - a.t) / (b.t - a.t);
        return a.theta + s * (b.theta - a.theta);
      };
      double glo = ga;
      while (hi - lo > tol) {
        const double tm = 0.5 * (lo + hi);
        const double gm = theta_at(tm) - kPi;
        if ((glo > 0.0) == (gm > 0.0)) {
          lo = tm;
          glo = gm;
        } else {
          hi = tm;
        }
      }
      const double t = 0.5 * (lo + hi);
      const double s = (t - a.t) / (b.t - a.t);
      const double td = a.theta_dot + s * (b.theta_dot - a.theta_dot);
      if (td >= 0.0) {
        *t_ms = t;
        *theta_dot_ms = td;
        return true;
      }
    }
  }
  return false;
}

bool shortfall_rate(const std::vector<OutputSample>& samples, double gravity,
                    double* rate) {
  for (int i = static_cast<int>(samples.size()) - 2; i >= 0; --i) {
    const OutputSample& a = samples[i];
    const OutputSample& b = samples[i + 1];
    if (a.theta_dot > 0.0 && b.theta_dot <= 0.0) {
      const double s = a.theta_dot / (a.theta_dot - b.theta_dot);
      const double lst = a.lst + s * (b.lst - a.lst);
      const double qv = a.qv + s * (b.qv - a.qv);
      const double dh = std::max(lst - qv, 0.0);
      *rate = -std::sqrt(2.0 * gravity * dh) / lst;
      return true;
    }
  }
  return false;
}

}  // namespace gaitcert
