#include "gaitcert/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaitcert/integrator.hpp"

namespace gaitcert {

namespace {
constexpr double kPi = std::numbers::pi;

Vec10 hermite10(double t0, const Vec10& x0, const Vec10& f0, double t1,
                const Vec10& x1, const Vec10& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * f0 +
         (-2 * s3 + 3 * s2) * x1 + (s3 - s2) * h * f1;
}

struct ArcContext {
  const AnchorModel* model;
  const ReferenceGait* gait;
  const SimConfig* sim;
  const GaitConfig* gc;
  SegmentResult* out;
  double t_offset = 0.0;      // global time of the arc start
  double next_sample = 0.0;   // next global sample time
  bool record_full = false;
  std::vector<TimedSample>* full = nullptr;

  void record(double t_global, const Vec10& x) {
    const Vec5 xi = x.head<5>();
    OutputSample s;
    s.t = t_global;
    s.theta = AnchorModel::theta(xi);
    s.theta_dot = AnchorModel::theta_dot(x.tail<5>());
    const Vec2 hip = model->hip_pos(xi);
    s.qv = hip[1];
    s.lst = hip.norm();
    out->samples.push_back(s);
    out->theta_min = std::min(out->theta_min, s.theta);
    out->theta_max = std::max(out->theta_max, s.theta);
    if (record_full && full) {
      full->push_back({t_global, x});
      const PdResult pd =
          pd_torque(xi, x.tail<5>(), *gait, model->params(), *gc);
      if (pd.saturated > 0) ++out->saturated_samples;
    }
  }

  void observe(double t0, const Vec10& x0, const Vec10& f0, double t1,
               const Vec10& x1, const Vec10& f1) {
    const double g0 = t0 + t_offset, g1 = t1 + t_offset;
    while (next_sample <= g1 + 1e-15) {
      if (next_sample > g0) {
        const Vec10 x =
            hermite10(g0, x0, f0, g1, x1, f1, std::min(next_sample, g1));
        record(next_sample, x);
      }
      next_sample += sim->sample_dt;
    }
  }
};

IntegratorOptions make_opts(const SimConfig& sim) {
  IntegratorOptions o;
  o.rel_tol = sim.rel_tol;
  o.abs_tol = sim.abs_tol;
  o.max_step = sim.max_step;
  o.event_value_tol = sim.event_tol;
  return o;
}

enum ArcEvent { ev_guard = 0, ev_fall_back, ev_fall_fwd, ev_hip_low, ev_mid };

std::vector<Event<Vec10>> make_events(const AnchorModel& model,
                                      const SimConfig& sim,
                                      bool with_mid_stance) {
  std::vector<Event<Vec10>> ev;
  ev.push_back({[&model](double, const Vec10& x) {
                  return model.swing_foot_pos(x.head<5>())[1];
                },
                -1, sim.scuff_arm});
  ev.push_back({[](double, const Vec10& x) {
                  return AnchorModel::theta(x.head<5>()) - kPi / 2.0;
                },
                -1, 0.0});
  ev.push_back({[](double, const Vec10& x) {
                  return 3.0 * kPi / 2.0 - AnchorModel::theta(x.head<5>());
                },
                -1, 0.0});
  ev.push_back({[&model, &sim](double, const Vec10& x) {
                  return model.hip_pos(x.head<5>())[1] - sim.hip_clearance;
                },
                -1, 0.0});
  if (with_mid_stance)
    ev.push_back({[](double, const Vec10& x) {
                    return AnchorModel::theta(x.head<5>()) - kPi;
                  },
                  +1, 0.0});
  return ev;
}

StepTermination fall_kind(int event_index) {
  switch (event_index) {
    case ev_fall_back: return StepTermination::fall_backward;
    case ev_fall_fwd: return StepTermination::fall_forward;
    case ev_hip_low: return StepTermination::hip_low;
    default: return StepTermination::integrator_failure;
  }
}

Vec10 pack(const Vec5& xi, const Vec5& xidot) {
  Vec10 x;
  x.head<5>() = xi;
  x.tail<5>() = xidot;
  return x;
}

SegmentResult run(const Vec5& xi0, const Vec5& xidot0,
                  const ReferenceGait& gait, const AnchorModel& model,
                  const SimConfig& sim, const GaitConfig& gc, bool record_full,
                  bool stop_at_touchdown) {
  SegmentResult out;
  out.theta_min = out.theta_max = AnchorModel::theta(xi0);

  auto deriv = [&](double, const Vec10& x) {
    const Vec5 xi = x.head<5>();
    const Vec5 xd = x.tail<5>();
    const Vec4 u = pd_torque(xi, xd, gait, model.params(), gc).torque;
    Vec10 dx;
    dx.head<5>() = xd;
    dx.tail<5>() = model.accel(xi, xd, u);
    return dx;
  };
  auto rk = make_rk45<Vec10>(deriv, make_opts(sim));

  ArcContext ctx{&model, &gait, &sim, &gc, &out};
  ctx.record_full = record_full;

  const double hip_start_x = model.hip_pos(xi0)[0];

  // --- stance arc: until touchdown or failure ------------------------------
  if (record_full) {
    out.arcs.emplace_back();
    ctx.full = &out.arcs.back();
  }
  ctx.t_offset = 0.0;
  ctx.next_sample = sim.sample_dt;
  ctx.record(0.0, pack(xi0, xidot0));
  ctx.next_sample = sim.sample_dt;

  const auto eventsA = make_events(model, sim, false);
  auto obs = [&ctx](double t0, const Vec10& x0, const Vec10& f0, double t1,
                    const Vec10& x1, const Vec10& f1) {
    ctx.observe(t0, x0, f0, t1, x1, f1);
  };
  auto rA = rk.integrate(0.0, pack(xi0, xidot0), sim.t_max, eventsA, obs);

  if (rA.reason == StopReason::step_underflow) {
    out.termination = StepTermination::integrator_failure;
    out.t_end = rA.t;
    return out;
  }
  if (rA.reason == StopReason::reached_t_end) {
    out.termination = StepTermination::timeout;
    out.t_end = rA.t;
    out.xi_end = rA.x.head<5>();
    out.xidot_end = rA.x.tail<5>();
    out.advance = model.hip_pos(out.xi_end)[0] - hip_start_x;
    return out;
  }
  if (rA.event_index != ev_guard) {
    out.termination = fall_kind(rA.event_index);
    out.t_end = rA.t;
    out.xi_end = rA.x.head<5>();
    out.xidot_end = rA.x.tail<5>();
    out.advance = model.hip_pos(out.xi_end)[0] - hip_start_x;
    ctx.record(rA.t, rA.x);
    return out;
  }

  // Touchdown: impact and relabel.
  const Vec5 xi_td = rA.x.head<5>();
  const Vec5 xd_td = rA.x.tail<5>();
  out.touchdown = true;
  out.t_touchdown = rA.t;
  out.phi_td = AnchorModel::phi(xi_td);
  out.step_length = model.swing_foot_pos(xi_td)[0];
  ctx.record(rA.t, rA.x);

  const auto imp = model.impact(xi_td, xd_td);
  out.impact_ke_ratio = imp.ke_pre > 0.0 ? imp.ke_post / imp.ke_pre : 1.0;
  if (imp.liftoff) {
    out.termination = StepTermination::liftoff;
    out.t_end = rA.t;
    out.xi_end = imp.xi;
    out.xidot_end = imp.xidot;
    out.advance = out.step_length + model.hip_pos(imp.xi)[0] - hip_start_x;
    return out;
  }

  if (stop_at_touchdown) {
    out.termination = StepTermination::mid_stance;  // nominal end for callers
    out.t_end = rA.t;
    out.xi_end = imp.xi;
    out.xidot_end = imp.xidot;
    out.y1_end = AnchorModel::theta_dot(imp.xidot);
    out.advance = out.step_length + model.hip_pos(imp.xi)[0] - hip_start_x;
    return out;
  }

  // --- climb arc: until the next mid-stance or failure ---------------------
  if (record_full) {
    out.arcs.emplace_back();
    ctx.full = &out.arcs.back();
  }
  ctx.t_offset = rA.t;
  ctx.record(rA.t, pack(imp.xi, imp.xidot));
  ctx.next_sample = std::ceil(rA.t / sim.sample_dt) * sim.sample_dt;
  if (ctx.next_sample <= rA.t) ctx.next_sample += sim.sample_dt;

  const auto eventsB = make_events(model, sim, true);
  auto rB =
      rk.integrate(0.0, pack(imp.xi, imp.xidot), sim.t_max, eventsB, obs);

  out.t_end = rA.t + rB.t;
  out.xi_end = rB.x.head<5>();
  out.xidot_end = rB.x.tail<5>();
  out.advance =
      out.step_length + model.hip_pos(out.xi_end)[0] - hip_start_x;

  if (rB.reason == StopReason::step_underflow) {
    out.termination = StepTermination::integrator_failure;
    return out;
  }
  if (rB.reason == StopReason::reached_t_end) {
    out.termination = StepTermination::timeout;
    return out;
  }
  ctx.record(out.t_end, rB.x);
  if (rB.event_index == ev_mid) {
    out.termination = StepTermination::mid_stance;
    out.y1_end = AnchorModel::theta_dot(out.xidot_end);
  } else if (rB.event_index == ev_guard) {
    out.termination = StepTermination::premature_touchdown;
  } else {
    out.termination = fall_kind(rB.event_index);
  }
  return out;
}
}  // namespace

const char* to_string(StepTermination t) {
  switch (t) {
    case StepTermination::mid_stance: return "mid_stance";
    case StepTermination::fall_backward: return "fall_backward";
    case StepTermination::fall_forward: return "fall_forward";
    case StepTermination::hip_low: return "hip_low";
    case StepTermination::liftoff: return "liftoff";
    case StepTermination::premature_touchdown: return "premature_touchdown";
    case StepTermination::timeout: return "timeout";
    case StepTermination::integrator_failure: return "integrator_failure";
  }
  return "unknown";
}

SegmentResult simulate_segment(const Vec5& xi0, const Vec5& xidot0,
                               const ReferenceGait& gait,
                               const AnchorModel& model, const SimConfig& sim,
                               const GaitConfig& gc, bool record_full) {
  return run(xi0, xidot0, gait, model, sim, gc, record_full, false);
}

SegmentResult simulate_to_touchdown(const Vec5& xi0, const Vec5& xidot0,
                                    const ReferenceGait& gait,
                                    const AnchorModel& model,
                                    const SimConfig& sim, const GaitConfig& gc,
                                    bool record_full) {
  return run(xi0, xidot0, gait, model, sim, gc, record_full, true);
}

}  // namespace gaitcert
