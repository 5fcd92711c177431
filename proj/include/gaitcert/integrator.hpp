#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gaitcert {

/// Outcome of an event-terminated integration.
enum class StopReason { reached_t_end, event, step_underflow };

template <typename Vec>
struct IntegrationResult {
  StopReason reason = StopReason::reached_t_end;
  int event_index = -1;  // which terminal event fired
  double t = 0.0;
  Vec x;
  long n_steps = 0;
  long n_rejected = 0;
};

/// Directional root event: fires when value crosses zero with the given sign
/// of the derivative (-1 falling, +1 rising, 0 either).
template <typename Vec>
struct Event {
  std::function<double(double, const Vec&)> value;
  int direction = 0;
  /// Events are ignored until armed; an event with arm_threshold <= 0 is
  /// always armed, otherwise it arms once value exceeds the threshold.
  double arm_threshold = 0.0;
};

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.01;
  double init_step = 1e-4;
  double event_value_tol = 1e-10;
  double min_step = 1e-14;
};

/// Adaptive Dormand-Prince 5(4) with cubic-Hermite event bracketing and an
/// error-controlled polishing pass for the event state.
template <typename Vec, typename Deriv>
class Rk45 {
 public:
  Rk45(Deriv deriv, IntegratorOptions opt) : f_(deriv), opt_(opt) {}

  /// Observer sees every accepted step: (t0, x0, f0, t1, x1, f1).
  using DenseObserver = std::function<void(double, const Vec&, const Vec&,
                                           double, const Vec&, const Vec&)>;

  IntegrationResult<Vec> integrate(double t0, const Vec& x0, double t_end,
                                   const std::vector<Event<Vec>>& events,
                                   const DenseObserver& observer = nullptr) {
    IntegrationResult<Vec> res;
    double t = t0;
    Vec x = x0;
    Vec k1 = f_(t, x);
    double h = std::min(opt_.init_step, opt_.max_step);

    std::vector<bool> armed(events.size());
    std::vector<double> gprev(events.size());
    for (size_t i = 0; i < events.size(); ++i) {
      gprev[i] = events[i].value(t, x);
      armed[i] = events[i].arm_threshold <= 0.0 ||
                 gprev[i] > events[i].arm_threshold;
    }

    while (t < t_end) {
      h = std::min(h, t_end - t);
      if (h < opt_.min_step) {
        res.reason = StopReason::step_underflow;
        res.t = t;
        res.x = x;
        return res;
      }
      Vec x1, k7;
      const double err = step(t, x, k1, h, x1, k7);
      if (err > 1.0) {
        ++res.n_rejected;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        continue;
      }
      ++res.n_steps;
      const double t1 = t + h;

      // Event scan over the accepted step.
      int fired = -1;
      double t_event = 0.0;
      Vec x_event;
      for (size_t i = 0; i < events.size(); ++i) {
        const double g1 = events[i].value(t1, x1);
        if (!armed[i]) {
          if (g1 > events[i].arm_threshold) armed[i] = true;
          gprev[i] = g1;
          continue;
        }
        const bool falling = gprev[i] > 0.0 && g1 <= 0.0;
        const bool rising = gprev[i] < 0.0 && g1 >= 0.0;
        const bool crossed = (events[i].direction < 0 && falling) ||
                             (events[i].direction > 0 && rising) ||
                             (events[i].direction == 0 && (falling || rising));
        if (crossed) {
          double te;
          Vec xe;
          locate(events[i], t, x, k1, t1, x1, k7, te, xe);
          if (fired < 0 || te < t_event) {
            fired = static_cast<int>(i);
            t_event = te;
            x_event = xe;
          }
        }
        gprev[i] = g1;
      }

      if (fired >= 0) {
        if (observer) {
          Vec fe = f_(t_event, x_event);
          observer(t, x, k1, t_event, x_event, fe);
        }
        res.reason = StopReason::event;
        res.event_index = fired;
        res.t = t_event;
        res.x = x_event;
        return res;
      }

      if (observer) observer(t, x, k1, t1, x1, k7);
      t = t1;
      x = x1;
      k1 = k7;  // FSAL
      h = std::min(opt_.max_step,
                   h * std::min(5.0, std::max(0.2, 0.9 * std::pow(
                                                        std::max(err, 1e-10),
                                                        -0.2))));
    }
    res.t = t;
    res.x = x;
    return res;
  }

  /// One error-controlled integration from (t0,x0) to tf, no events.
  Vec advance(double t0, const Vec& x0, double tf) {
    IntegrationResult<Vec> r = integrate(t0, x0, tf, {});
    if (r.reason != StopReason::reached_t_end)
      throw std::runtime_error("integrator step-size underflow");
    return r.x;
  }

 private:
  // Dormand-Prince 5(4) tableau.
  double step(double t, const Vec& x, const Vec& k1, double h, Vec& x_out,
              Vec& k7_out) {
    const Vec k2 = f_(t + h / 5.0, x + h * (k1 / 5.0));
    const Vec k3 = f_(t + 3.0 * h / 10.0,
                      x + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const Vec k4 = f_(t + 4.0 * h / 5.0,
                      x + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 +
                               32.0 / 9.0 * k3));
    const Vec k5 =
        f_(t + 8.0 * h / 9.0,
           x + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                    64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    const Vec k6 =
        f_(t + h, x + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                           46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                           5103.0 / 18656.0 * k5));
    x_out = x + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                     125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                     11.0 / 84.0 * k6);
    k7_out = f_(t + h, x_out);
    const Vec err_vec =
        h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 -
             17253.0 / 339200.0 * k5 + 22.0 / 525.0 * k6 - 1.0 / 40.0 * k7_out);
    double err = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double sc = opt_.abs_tol +
                        opt_.rel_tol * std::max(std::abs(x[i]),
                                                std::abs(x_out[i]));
      const double e = err_vec[i] / sc;
      err += e * e;
    }
    return std::sqrt(err / static_cast<double>(x.size()));
  }

  static Vec hermite(double t0, const Vec& x0, const Vec& f0, double t1,
                     const Vec& x1, const Vec& f1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * f0 +
           (-2 * s3 + 3 * s2) * x1 + (s3 - s2) * h * f1;
  }

  void locate(const Event<Vec>& ev, double t0, const Vec& x0, const Vec& f0,
              double t1, const Vec& x1, const Vec& f1, double& t_event,
              Vec& x_event) {
    // Bisection on the Hermite interpolant first.
    double lo = t0, hi = t1;
    double glo = ev.value(t0, x0);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(t1));
         ++it) {
      const double tm = 0.5 * (lo + hi);
      const double gm = ev.value(tm, hermite(t0, x0, f0, t1, x1, f1, tm));
      if ((glo > 0.0) == (gm > 0.0)) {
        lo = tm;
        glo = gm;
      } else {
        hi = tm;
      }
    }
    t_event = hi;
    // Polish against the true flow with secant iterations.
    x_event = advance_nested(t0, x0, t_event);
    double g = ev.value(t_event, x_event);
    double tp = lo, gp = ev.value(tp, hermite(t0, x0, f0, t1, x1, f1, tp));
    for (int it = 0; it < 10 && std::abs(g) > opt_.event_value_tol; ++it) {
      const double denom = g - gp;
      double tn = (std::abs(denom) > 0.0) ? t_event - g * (t_event - tp) / denom
                                          : 0.5 * (t_event + tp);
      tn = std::min(std::max(tn, t0), t1);
      tp = t_event;
      gp = g;
      t_event = tn;
      x_event = advance_nested(t0, x0, t_event);
      g = ev.value(t_event, x_event);
    }
  }

  Vec advance_nested(double t0, const Vec& x0, double tf) {
    if (tf <= t0) return x0;
    IntegrationResult<Vec> r;
    double t = t0;
    Vec x = x0;
    Vec k1 = f_(t, x);
    double h = std::min(opt_.max_step, tf - t0);
    int guard = 0;
    while (t < tf && ++guard < 100000) {
      h = std::min(h, tf - t);
      if (h < opt_.min_step) break;
      Vec x1, k7;
      const double err = step(t, x, k1, h, x1, k7);
      if (err > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        continue;
      }
      t += h;
      x = x1;
      k1 = k7;
      h = std::min(opt_.max_step,
                   h * std::min(5.0, std::max(0.2, 0.9 * std::pow(
                                                        std::max(err, 1e-10),
                                                        -0.2))));
    }
    return x;
  }

  Deriv f_;
  IntegratorOptions opt_;
};

template <typename Vec, typename Deriv>
Rk45<Vec, Deriv> make_rk45(Deriv deriv, IntegratorOptions opt) {
  return Rk45<Vec, Deriv>(deriv, opt);
}

}  // namespace gaitcert
