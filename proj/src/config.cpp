#include "gaitcert/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gaitcert {

using nlohmann::json;

bool ModelParams::valid() const {
  return m_torso > 0 && m_thigh > 0 && m_shin > 0 && l_torso > 0 &&
         l_thigh > 0 && l_shin > 0 && c_torso > 0 && c_thigh > 0 &&
         c_shin > 0 && i_torso > 0 && i_thigh > 0 && i_shin > 0 &&
         gravity > 0 && torque_limit > 0 && knee_min < knee_max;
}

namespace {

json to_json(const ModelParams& m) {
  return {{"m_torso", m.m_torso},   {"m_thigh", m.m_thigh},
          {"m_shin", m.m_shin},     {"l_torso", m.l_torso},
          {"l_thigh", m.l_thigh},   {"l_shin", m.l_shin},
          {"c_torso", m.c_torso},   {"c_thigh", m.c_thigh},
          {"c_shin", m.c_shin},     {"i_torso", m.i_torso},
          {"i_thigh", m.i_thigh},   {"i_shin", m.i_shin},
          {"gravity", m.gravity},   {"torque_limit", m.torque_limit},
          {"knee_min", m.knee_min}, {"knee_max", m.knee_max}};
}

void from_json_into(const json& j, ModelParams& m) {
  m.m_torso = j.value("m_torso", m.m_torso);
  m.m_thigh = j.value("m_thigh", m.m_thigh);
  m.m_shin = j.value("m_shin", m.m_shin);
  m.l_torso = j.value("l_torso", m.l_torso);
  m.l_thigh = j.value("l_thigh", m.l_thigh);
  m.l_shin = j.value("l_shin", m.l_shin);
  m.c_torso = j.value("c_torso", m.c_torso);
  m.c_thigh = j.value("c_thigh", m.c_thigh);
  m.c_shin = j.value("c_shin", m.c_shin);
  m.i_torso = j.value("i_torso", m.i_torso);
  m.i_thigh = j.value("i_thigh", m.i_thigh);
  m.i_shin = j.value("i_shin", m.i_shin);
  m.gravity = j.value("gravity", m.gravity);
  m.torque_limit = j.value("torque_limit", m.torque_limit);
  m.knee_min = j.value("knee_min", m.knee_min);
  m.knee_max = j.value("knee_max", m.knee_max);
}

json to_json(const Config& c) {
  json j;
  j["model"] = to_json(c.model);
  j["sim"] = {{"rel_tol", c.sim.rel_tol},
              {"abs_tol", c.sim.abs_tol},
              {"event_tol", c.sim.event_tol},
              {"max_step", c.sim.max_step},
              {"sample_dt", c.sim.sample_dt},
              {"t_max", c.sim.t_max},
              {"hip_clearance", c.sim.hip_clearance},
              {"scuff_arm", c.sim.scuff_arm}};
  j["gait"] = {{"grid_p1", c.gait.grid_p1},
               {"grid_p2", c.gait.grid_p2},
               {"kp", c.gait.kp},
               {"kd", c.gait.kd},
               {"knee_stance", c.gait.knee_stance},
               {"knee_clearance", c.gait.knee_clearance},
               {"phase_overrun", c.gait.phase_overrun},
               {"shoot_steps", c.gait.shoot_steps},
               {"shoot_iters", c.gait.shoot_iters},
               {"speed_rtol", c.gait.speed_rtol}};
  j["pbox"] = {{"p1_min", c.pbox.p1_min},
               {"p1_max", c.pbox.p1_max},
               {"p2_min", c.pbox.p2_min},
               {"p2_max", c.pbox.p2_max}};
  j["bounds"] = {{"y1_min", c.bounds.y1_min},
                 {"y1_max", c.bounds.y1_max},
                 {"y1_cells", c.bounds.y1_cells},
                 {"p1_cells", c.bounds.p1_cells},
                 {"p2_cells", c.bounds.p2_cells},
                 {"b2_pprev_p1_cells", c.bounds.b2_pprev_p1_cells},
                 {"b2_pprev_p2_cells", c.bounds.b2_pprev_p2_cells},
                 {"b2_y1_cells", c.bounds.b2_y1_cells},
                 {"b2_p1_cells", c.bounds.b2_p1_cells},
                 {"b2_p2_cells", c.bounds.b2_p2_cells},
                 {"min_samples", c.bounds.min_samples},
                 {"eta", c.bounds.eta},
                 {"refit_max_iters", c.bounds.refit_max_iters}};
  j["certs"] = {{"horizon", c.certs.horizon},
                {"epsilon", c.certs.epsilon},
                {"spread_factor", c.certs.spread_factor},
                {"y1_floor", c.certs.y1_floor}};
  j["mpc"] = {{"v_des_min", c.mpc.v_des_min}, {"v_des_max", c.mpc.v_des_max}};
  j["harness"] = {{"trials", c.harness.trials},
                  {"steps", c.harness.steps},
                  {"speed_lo", c.harness.speed_lo},
                  {"speed_hi", c.harness.speed_hi},
                  {"resample_every", c.harness.resample_every}};
  return j;
}

void from_json_into(const json& j, Config& c) {
  if (j.contains("model")) from_json_into(j.at("model"), c.model);
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    c.sim.rel_tol = s.value("rel_tol", c.sim.rel_tol);
    c.sim.abs_tol = s.value("abs_tol", c.sim.abs_tol);
    c.sim.event_tol = s.value("event_tol", c.sim.event_tol);
    c.sim.max_step = s.value("max_step", c.sim.max_step);
    c.sim.sample_dt = s.value("sample_dt", c.sim.sample_dt);
    c.sim.t_max = s.value("t_max", c.sim.t_max);
    c.sim.hip_clearance = s.value("hip_clearance", c.sim.hip_clearance);
    c.sim.scuff_arm = s.value("scuff_arm", c.sim.scuff_arm);
  }
  if (j.contains("gait")) {
    const auto& g = j.at("gait");
    c.gait.grid_p1 = g.value("grid_p1", c.gait.grid_p1);
    c.gait.grid_p2 = g.value("grid_p2", c.gait.grid_p2);
    c.gait.kp = g.value("kp", c.gait.kp);
    c.gait.kd = g.value("kd", c.gait.kd);
    c.gait.knee_stance = g.value("knee_stance", c.gait.knee_stance);
    c.gait.knee_clearance = g.value("knee_clearance", c.gait.knee_clearance);
    c.gait.phase_overrun = g.value("phase_overrun", c.gait.phase_overrun);
    c.gait.shoot_steps = g.value("shoot_steps", c.gait.shoot_steps);
    c.gait.shoot_iters = g.value("shoot_iters", c.gait.shoot_iters);
    c.gait.speed_rtol = g.value("speed_rtol", c.gait.speed_rtol);
  }
  if (j.contains("pbox")) {
    const auto& p = j.at("pbox");
    c.pbox.p1_min = p.value("p1_min", c.pbox.p1_min);
    c.pbox.p1_max = p.value("p1_max", c.pbox.p1_max);
    c.pbox.p2_min = p.value("p2_min", c.pbox.p2_min);
    c.pbox.p2_max = p.value("p2_max", c.pbox.p2_max);
  }
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    c.bounds.y1_min = b.value("y1_min", c.bounds.y1_min);
    c.bounds.y1_max = b.value("y1_max", c.bounds.y1_max);
    c.bounds.y1_cells = b.value("y1_cells", c.bounds.y1_cells);
    c.bounds.p1_cells = b.value("p1_cells", c.bounds.p1_cells);
    c.bounds.p2_cells = b.value("p2_cells", c.bounds.p2_cells);
    c.bounds.b2_pprev_p1_cells =
        b.value("b2_pprev_p1_cells", c.bounds.b2_pprev_p1_cells);
    c.bounds.b2_pprev_p2_cells =
        b.value("b2_pprev_p2_cells", c.bounds.b2_pprev_p2_cells);
    c.bounds.b2_y1_cells = b.value("b2_y1_cells", c.bounds.b2_y1_cells);
    c.bounds.b2_p1_cells = b.value("b2_p1_cells", c.bounds.b2_p1_cells);
    c.bounds.b2_p2_cells = b.value("b2_p2_cells", c.bounds.b2_p2_cells);
    c.bounds.min_samples = b.value("min_samples", c.bounds.min_samples);
    c.bounds.eta = b.value("eta", c.bounds.eta);
    c.bounds.refit_max_iters =
        b.value("refit_max_iters", c.bounds.refit_max_iters);
  }
  if (j.contains("certs")) {
    const auto& z = j.at("certs");
    c.certs.horizon = z.value("horizon", c.certs.horizon);
    c.certs.epsilon = z.value("epsilon", c.certs.epsilon);
    c.certs.spread_factor = z.value("spread_factor", c.certs.spread_factor);
    c.certs.y1_floor = z.value("y1_floor", c.certs.y1_floor);
  }
  if (j.contains("mpc")) {
    const auto& m = j.at("mpc");
    c.mpc.v_des_min = m.value("v_des_min", c.mpc.v_des_min);
    c.mpc.v_des_max = m.value("v_des_max", c.mpc.v_des_max);
  }
  if (j.contains("harness")) {
    const auto& h = j.at("harness");
    c.harness.trials = h.value("trials", c.harness.trials);
    c.harness.steps = h.value("steps", c.harness.steps);
    c.harness.speed_lo = h.value("speed_lo", c.harness.speed_lo);
    c.harness.speed_hi = h.value("speed_hi", c.harness.speed_hi);
    c.harness.resample_every =
        h.value("resample_every", c.harness.resample_every);
  }
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in);
  Config c;
  from_json_into(j, c);
  if (!c.model.valid())
    throw std::runtime_error("invalid model parameters in " + path);
  return c;
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << to_json(*this).dump(2) << "\n";
}

std::string Config::canonical_json() const { return to_json(*this).dump(); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t Config::hash() const { return fnv1a(canonical_json()); }

}  // namespace gaitcert
