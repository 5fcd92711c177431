#include "gaitcert/sbm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gaitcert/integrator.hpp"

namespace gaitcert {

namespace {
constexpr double kPi = std::numbers::pi;

struct Terms {
  double alpha, K, c;  // c = cos(2 alpha), K = (2g/l)(1 - cos alpha)
};

Terms terms(const GaitParams& P, const SbmParams& sp) {
  const double r = P.p2 / (2.0 * sp.l);
  if (r > 1.0) throw std::invalid_argument("step length exceeds 2l");
  Terms t;
  t.alpha = std::asin(r);
  t.K = 2.0 * sp.g / sp.l * (1.0 - std::cos(t.alpha));
  t.c = std::cos(2.0 * t.alpha);
  return t;
}
}  // namespace

double sbm_alpha(double p2, const SbmParams& sp) {
  const double r = p2 / (2.0 * sp.l);
  if (r > 1.0) throw std::invalid_argument("step length exceeds 2l");
  return std::asin(r);
}

double sbm_step_map_y1(double y1, const GaitParams& P, const SbmParams& sp) {
  if (y1 < 0.0) return y1;  // mid-stance was never reached; nothing evolves
  const Terms t = terms(P, sp);
  // Energy bookkeeping mid-stance -> touchdown -> impact -> mid-stance.
  const double e = t.c * t.c * (y1 * y1 + t.K) - t.K;
  return e >= 0.0 ? std::sqrt(e) : -std::sqrt(-e);
}

SbmBranch sbm_branch(double y1, const GaitParams& P, const SbmParams& sp) {
  if (y1 < 0.0) return SbmBranch::stalled;
  const Terms t = terms(P, sp);
  const double e = t.c * t.c * (y1 * y1 + t.K) - t.K;
  return e > 0.0 ? SbmBranch::reachable : SbmBranch::deficit;
}

double sbm_touchdown_angle(const GaitParams& P, const SbmParams& sp) {
  return kPi - sbm_alpha(P.p2, sp);
}

std::pair<ExtReal, ExtReal> sbm_range_y3_y4(double y1, const GaitParams& P,
                                            const SbmParams& sp) {
  const Terms t = terms(P, sp);
  const bool reach =
      y1 > 0.0 && t.c * t.c * (y1 * y1 + t.K) - t.K > 0.0;
  const bool degenerate = t.alpha == 0.0 && y1 >= 0.0;
  if (reach || degenerate)
    return {ExtReal(kPi - t.alpha), ExtReal(kPi + t.alpha)};
  return {ExtReal::neg_inf(), ExtReal::pos_inf()};
}

namespace {
using V2 = Eigen::Vector2d;

IntegratorOptions sbm_opts(double tol) {
  IntegratorOptions o;
  o.rel_tol = tol;
  o.abs_tol = tol * 1e-2;
  o.max_step = 5e-3;
  o.event_value_tol = 1e-12;
  return o;
}
}  // namespace

SbmStepOutcome sbm_simulate_step(double y1, const GaitParams& P,
                                 const SbmParams& sp, double tol) {
  SbmStepOutcome out;
  const Terms tm = terms(P, sp);
  if (y1 < 0.0) {
    out.branch = SbmBranch::stalled;
    out.y1_next = y1;
    out.theta_min = 0.0;
    out.theta_max = 0.0;
    out.phi_touchdown = 2.0 * kPi;
    return out;
  }
  if (tm.alpha == 0.0) {
    // Zero-length step: touchdown coincides with mid-stance, lossless impact.
    out.branch = SbmBranch::reachable;
    out.y1_next = y1;
    out.theta_min = out.theta_max = kPi;
    out.phi_touchdown = kPi;
    out.touchdown = true;
    return out;
  }

  auto deriv = [&](double, const V2& x) {
    return V2(x[1], -sp.g / sp.l * std::sin(x[0]));
  };
  auto rk = make_rk45<V2>(deriv, sbm_opts(tol));

  const double theta_td = kPi + tm.alpha;
  std::vector<Event<V2>> ev(1);
  ev[0] = {[theta_td](double, const V2& x) { return theta_td - x[0]; }, -1,
           0.0};

  // Mid-stance to touchdown.  A nonnegative initial rate always reaches the
  // guard (downhill all the way) except exactly at rest.
  if (y1 == 0.0) {
    out.branch = SbmBranch::deficit;
    out.y1_next = 0.0;
    out.theta_min = kPi;
    out.theta_max = kPi;
    out.phi_touchdown = 2.0 * kPi;
    return out;
  }
  auto r1 = rk.integrate(0.0, V2(kPi, y1), 60.0, ev);
  if (r1.reason != StopReason::event)
    throw std::runtime_error("template touchdown was not reached");
  out.touchdown = true;
  out.phi_touchdown = 2.0 * kPi - r1.x[0];
  out.theta_max = r1.x[0];

  // Plastic impact and stance relabel.
  const double w_post = r1.x[1] * tm.c;
  const double theta0 = 2.0 * kPi - r1.x[0];
  out.theta_min = theta0;

  // Climb back to mid-stance, or reverse.
  std::vector<Event<V2>> ev2(2);
  ev2[0] = {[](double, const V2& x) { return x[0] - kPi; }, +1, 0.0};
  ev2[1] = {[](double, const V2& x) { return x[1]; }, -1, 0.0};
  auto r2 = rk.integrate(0.0, V2(theta0, w_post), 60.0, ev2);
  if (r2.reason != StopReason::event)
    throw std::runtime_error("template climb terminated without an event");
  if (r2.event_index == 0) {
    out.branch = SbmBranch::reachable;
    out.y1_next = r2.x[1];
  } else {
    out.branch = SbmBranch::deficit;
    const double dh = sp.l * (1.0 + std::cos(r2.x[0]));
    out.y1_next = -std::sqrt(2.0 * sp.g * std::max(dh, 0.0)) / sp.l;
  }
  return out;
}

std::vector<SbmSample> sbm_trajectory(double theta0, double theta_dot0,
                                      const GaitParams& P, const SbmParams& sp,
                                      double t_max) {
  const Terms tm = terms(P, sp);
  auto deriv = [&](double, const V2& x) {
    return V2(x[1], -sp.g / sp.l * std::sin(x[0]));
  };
  auto rk = make_rk45<V2>(deriv, sbm_opts(1e-12));
  const double theta_td = kPi + tm.alpha;
  std::vector<Event<V2>> ev(2);
  ev[0] = {[theta_td](double, const V2& x) { return theta_td - x[0]; }, -1,
           0.0};
  ev[1] = {[](double, const V2& x) { return x[0] - kPi / 2.0; }, -1, 0.0};

  std::vector<SbmSample> samples;
  samples.push_back({0.0, theta0, theta_dot0});
  auto obs = [&](double, const V2&, const V2&, double t1, const V2& x1,
                 const V2&) { samples.push_back({t1, x1[0], x1[1]}); };
  rk.integrate(0.0, V2(theta0, theta_dot0), t_max, ev, obs);
  return samples;
}

}  // namespace gaitcert
