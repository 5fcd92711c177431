#include "gaitcert/gait_library.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gaitcert {

namespace {
using ordered_json = nlohmann::ordered_json;

constexpr double kDriveMin = -0.25;
constexpr int kTailSteps = 3;  // steps averaged for the steady-cycle measure

double drive_max(const GaitConfig& gc, const ModelParams& model) {
  // Keep the extended stance knee strictly away from the straight-leg stop.
  return model.knee_max - gc.knee_stance - 0.02;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = a + (b - a) * (n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return v;
}
}  // namespace

GaitNode GaitLibrary::interpolate(const GaitParams& P) const {
  auto locate = [](const std::vector<double>& g, double v, int& i,
                   double& w) {
    v = std::clamp(v, g.front(), g.back());
    i = static_cast<int>(
            std::upper_bound(g.begin(), g.end(), v) - g.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(g.size()) - 2);
    w = (v - g[i]) / (g[i + 1] - g[i]);
  };
  int i1, i2;
  double w1, w2;
  locate(p1_grid, P.p1, i1, w1);
  locate(p2_grid, P.p2, i2, w2);

  const GaitNode& n00 = node(i1, i2);
  const GaitNode& n10 = node(i1 + 1, i2);
  const GaitNode& n01 = node(i1, i2 + 1);
  const GaitNode& n11 = node(i1 + 1, i2 + 1);
  auto blend = [&](double a00, double a10, double a01, double a11) {
    return (1 - w1) * ((1 - w2) * a00 + w2 * a01) +
           w1 * ((1 - w2) * a10 + w2 * a11);
  };
  GaitNode out;
  out.p1 = P.p1;
  out.p2 = P.p2;
  out.drive = blend(n00.drive, n10.drive, n01.drive, n11.drive);
  out.lean = blend(n00.lean, n10.lean, n01.lean, n11.lean);
  out.omega_ms = blend(n00.omega_ms, n10.omega_ms, n01.omega_ms, n11.omega_ms);
  out.duration = blend(n00.duration, n10.duration, n01.duration, n11.duration);
  out.avg_speed =
      blend(n00.avg_speed, n10.avg_speed, n01.avg_speed, n11.avg_speed);
  out.avg_step = blend(n00.avg_step, n10.avg_step, n01.avg_step, n11.avg_step);
  return out;
}

ReferenceGait GaitLibrary::gait_for(const GaitParams& P,
                                    const ModelParams& model,
                                    const GaitConfig& cfg) const {
  const GaitNode n = interpolate(P);
  ReferenceGait g = build_gait(P, n.drive, n.lean, model, cfg);
  g.omega_ms = n.omega_ms;
  g.duration = n.duration;
  return g;
}

void GaitLibrary::save(const std::string& path) const {
  ordered_json j;
  j["config_hash"] = config_hash;
  j["p1_grid"] = p1_grid;
  j["p2_grid"] = p2_grid;
  ordered_json arr = ordered_json::array();
  for (const GaitNode& n : nodes) {
    arr.push_back({{"p1", n.p1},
                   {"p2", n.p2},
                   {"drive", n.drive},
                   {"lean", n.lean},
                   {"omega_ms", n.omega_ms},
                   {"duration", n.duration},
                   {"avg_speed", n.avg_speed},
                   {"avg_step", n.avg_step}});
  }
  j["nodes"] = std::move(arr);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

GaitLibrary GaitLibrary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  ordered_json j = ordered_json::parse(in);
  GaitLibrary lib;
  lib.config_hash = j.at("config_hash").get<std::uint64_t>();
  lib.p1_grid = j.at("p1_grid").get<std::vector<double>>();
  lib.p2_grid = j.at("p2_grid").get<std::vector<double>>();
  for (const auto& e : j.at("nodes")) {
    GaitNode n;
    n.p1 = e.at("p1");
    n.p2 = e.at("p2");
    n.drive = e.at("drive");
    n.lean = e.at("lean");
    n.omega_ms = e.at("omega_ms");
    n.duration = e.at("duration");
    n.avg_speed = e.at("avg_speed");
    n.avg_step = e.at("avg_step");
    lib.nodes.push_back(n);
  }
  if (lib.nodes.size() != lib.p1_grid.size() * lib.p2_grid.size())
    throw std::runtime_error("gait library node count mismatch");
  return lib;
}

ShootOutcome evaluate_gait(const ReferenceGait& gait, double omega0,
                           const AnchorModel& model, const SimConfig& sim,
                           const GaitConfig& gc) {
  ShootOutcome out;
  Vec5 xi, xidot;
  gait.mid_stance_state(omega0, xi, xidot);

  double adv = 0.0, time = 0.0, step = 0.0;
  int tail = 0;
  double omega = omega0;
  for (int k = 0; k < gc.shoot_steps; ++k) {
    const SegmentResult seg =
        simulate_segment(xi, xidot, gait, model, sim, gc);
    if (seg.termination != StepTermination::mid_stance) {
      out.termination = seg.termination;
      return out;
    }
    xi = seg.xi_end;
    xidot = seg.xidot_end;
    omega = seg.y1_end;
    if (k >= gc.shoot_steps - kTailSteps) {
      adv += seg.advance;
      time += seg.t_end;
      step += seg.step_length;
      ++tail;
    }
  }
  out.ok = true;
  out.avg_speed = adv / time;
  out.avg_step = step / tail;
  out.omega_ms = omega;
  out.duration = time / tail;
  return out;
}

GaitNode calibrate_node(const GaitParams& P, double drive_guess,
                        double omega_guess, const AnchorModel& model,
                        const SimConfig& sim, const GaitConfig& gc) {
  const double dmax = drive_max(gc, model.params());
  const double dmin = kDriveMin;
  double omega = omega_guess > 0.0
                     ? omega_guess
                     : P.p1 / leg_length_at_knee(gc.knee_stance,
                                                 model.params());

  auto run = [&](double d) -> ShootOutcome {
    if (!gait_feasible(P, d, model.params(), gc)) return {};
    const ReferenceGait g = build_gait(P, d, 0.0, model.params(), gc);
    for (double scale : {1.0, 1.3, 0.7, 1.7, 0.4}) {
      ShootOutcome so = evaluate_gait(g, omega * scale, model, sim, gc);
      if (so.ok) return so;
      if (scale == 0.4) return so;
    }
    return {};
  };

  struct Pt {
    double d, err;
    ShootOutcome so;
  };
  std::vector<Pt> pts;
  auto eval = [&](double d) -> const Pt& {
    d = std::clamp(d, dmin, dmax);
    ShootOutcome so = run(d);
    if (so.ok) omega = so.omega_ms;
    pts.push_back({d, so.ok ? so.avg_speed - P.p1 : 0.0, so});
    return pts.back();
  };

  // Initial point, with a coarse scan fallback when the guess falls over.
  eval(std::clamp(drive_guess, dmin, dmax));
  if (!pts.back().so.ok) {
    pts.clear();
    for (double d : linspace(dmin, dmax, 9)) {
      eval(d);
      if (pts.back().so.ok) break;
    }
    if (!pts.back().so.ok)
      throw std::runtime_error("gait calibration: no stable drive found");
  }

  auto accepted = [&](const Pt& p) {
    return p.so.ok && std::abs(p.so.avg_speed - P.p1) <= gc.speed_rtol * P.p1;
  };

  Pt best = pts.back();
  // Second point for the secant.
  if (!accepted(best)) {
    const double d2 = std::clamp(
        best.d + (best.err < 0.0 ? 0.06 : -0.06), dmin, dmax);
    eval(d2);
    if (pts.back().so.ok &&
        std::abs(pts.back().err) < std::abs(best.err))
      best = pts.back();
  }

  for (int it = 0; it < gc.shoot_iters && !accepted(best); ++it) {
    // Prefer a bracketing pair when one exists.
    const Pt* lo = nullptr;
    const Pt* hi = nullptr;
    for (const Pt& p : pts) {
      if (!p.so.ok) continue;
      if (p.err < 0.0 && (!lo || p.err > lo->err)) lo = &p;
      if (p.err > 0.0 && (!hi || p.err < hi->err)) hi = &p;
    }
    double d_next;
    if (lo && hi) {
      d_next = lo->d + (hi->d - lo->d) * (-lo->err) / (hi->err - lo->err);
      // Guard against stalling at an endpoint of the bracket.
      const double mid = 0.5 * (lo->d + hi->d);
      if (!(d_next > std::min(lo->d, hi->d) &&
            d_next < std::max(lo->d, hi->d)))
        d_next = mid;
    } else {
      // One-sided: push further in the indicated direction.
      const Pt& p = best;
      d_next = p.d + (p.err < 0.0 ? 1.0 : -1.0) *
                         std::max(0.04, std::abs(p.err) * 0.15);
    }
    d_next = std::clamp(d_next, dmin, dmax);
    // Avoid exact repeats.
    bool repeat = false;
    for (const Pt& p : pts)
      if (std::abs(p.d - d_next) < 1e-6) repeat = true;
    if (repeat) d_next = std::clamp(d_next + 1e-3, dmin, dmax);

    const Pt& p = eval(d_next);
    if (p.so.ok && std::abs(p.err) < std::abs(best.err)) best = p;
  }

  if (!accepted(best)) {
    std::ostringstream msg;
    msg << "gait calibration failed at p1=" << P.p1 << " p2=" << P.p2
        << " (best speed " << best.so.avg_speed << ")";
    throw std::runtime_error(msg.str());
  }
  if (std::abs(best.so.avg_step - P.p2) > gc.speed_rtol * P.p2) {
    std::ostringstream msg;
    msg << "gait calibration: step length " << best.so.avg_step
        << " misses target " << P.p2;
    throw std::runtime_error(msg.str());
  }

  GaitNode n;
  n.p1 = P.p1;
  n.p2 = P.p2;
  n.drive = best.d;
  n.lean = 0.0;
  n.omega_ms = best.so.omega_ms;
  n.duration = best.so.duration;
  n.avg_speed = best.so.avg_speed;
  n.avg_step = best.so.avg_step;
  return n;
}

GaitLibrary build_gait_library(const Config& cfg, const AnchorModel& model,
                               const ProgressFn& progress) {
  GaitLibrary lib;
  lib.config_hash = cfg.hash();
  lib.p1_grid = linspace(cfg.pbox.p1_min, cfg.pbox.p1_max, cfg.gait.grid_p1);
  lib.p2_grid = linspace(cfg.pbox.p2_min, cfg.pbox.p2_max, cfg.gait.grid_p2);
  const int np1 = cfg.gait.grid_p1, np2 = cfg.gait.grid_p2;
  lib.nodes.resize(static_cast<size_t>(np1) * np2);

  for (int i2 = 0; i2 < np2; ++i2) {
    for (int i1 = 0; i1 < np1; ++i1) {
      double drive_guess = 0.05, omega_guess = -1.0;
      if (i1 > 0) {
        const GaitNode& prev = lib.node(i1 - 1, i2);
        drive_guess = prev.drive;
        omega_guess = prev.omega_ms;
      } else if (i2 > 0) {
        const GaitNode& prev = lib.node(i1, i2 - 1);
        drive_guess = prev.drive;
        omega_guess = prev.omega_ms;
      }
      const GaitParams P{lib.p1_grid[i1], lib.p2_grid[i2]};
      GaitNode n = calibrate_node(P, drive_guess, omega_guess, model, cfg.sim,
                                  cfg.gait);
      lib.nodes[static_cast<size_t>(i1) * np2 + i2] = n;
      if (progress) {
        std::ostringstream msg;
        msg << "gait node p1=" << P.p1 << " p2=" << P.p2
            << " drive=" << n.drive << " speed=" << n.avg_speed
            << " step=" << n.avg_step << " omega=" << n.omega_ms;
        progress(msg.str());
      }
    }
  }
  return lib;
}

}  // namespace gaitcert
