#include "gaitcert/anchor_model.hpp"

#include <cmath>
#include <stdexcept>

namespace gaitcert {

namespace {
inline Vec2 u_of(double a) { return {std::sin(a), std::cos(a)}; }
inline Vec2 du_of(double a) { return {std::cos(a), -std::sin(a)}; }
}  // namespace

AnchorModel::AnchorModel(const ModelParams& p) : params_(p) {
  if (!p.valid()) throw std::invalid_argument("non-physical model parameters");

  slot_rows_[0] << 1, 0, 0, 0, 0;  // torso
  slot_rows_[1] << 1, 1, 0, 0, 0;  // stance thigh
  slot_rows_[2] << 1, 1, 1, 0, 0;  // stance shin
  slot_rows_[3] << 1, 0, 0, 1, 0;  // swing thigh
  slot_rows_[4] << 1, 0, 0, 1, 1;  // swing shin

  const double lt = p.l_thigh, ls = p.l_shin;
  // COM positions with the stance foot at the origin; the hip is
  // -lt*u1 - ls*u2.
  links_[0] = {p.m_torso, p.i_torso, slot_rows_[0], 3,
               {p.c_torso, -lt, -ls}, {0, 1, 2}};
  links_[1] = {p.m_thigh, p.i_thigh, slot_rows_[1], 2,
               {p.c_thigh - lt, -ls, 0}, {1, 2, 0}};
  links_[2] = {p.m_shin, p.i_shin, slot_rows_[2], 1,
               {p.c_shin - ls, 0, 0}, {2, 0, 0}};
  links_[3] = {p.m_thigh, p.i_thigh, slot_rows_[3], 3,
               {-lt, -ls, p.c_thigh}, {1, 2, 3}};
  links_[4] = {p.m_shin, p.i_shin, slot_rows_[4], 4,
               {-lt, -ls, lt, p.c_shin}, {1, 2, 3, 4}};
}

void AnchorModel::angles(const Vec5& xi, std::array<double, 5>& a) const {
  a[0] = xi[0];
  a[1] = xi[0] + xi[1];
  a[2] = a[1] + xi[2];
  a[3] = xi[0] + xi[3];
  a[4] = a[3] + xi[4];
}

Mat5 AnchorModel::mass_matrix(const Vec5& xi) const {
  std::array<double, 5> al;
  angles(xi, al);
  Mat5 M = Mat5::Zero();
  Eigen::Matrix<double, 2, 5> Jv;
  for (const Link& L : links_) {
    Jv.setZero();
    for (int k = 0; k < L.nterms; ++k)
      Jv += L.coeff[k] * du_of(al[L.slot[k]]) * slot_rows_[L.slot[k]].transpose();
    M.noalias() += L.mass * Jv.transpose() * Jv;
    M.noalias() += L.inertia * L.a * L.a.transpose();
  }
  return M;
}

void AnchorModel::dynamics_terms(const Vec5& xi, const Vec5& xidot, Mat5& M,
                                 Mat5& C, Vec5& G) const {
  std::array<double, 5> al;
  angles(xi, al);
  std::array<Vec2, 5> u, du;
  for (int k = 0; k < 5; ++k) {
    u[k] = u_of(al[k]);
    du[k] = du_of(al[k]);
  }

  M.setZero();
  std::array<Mat5, 5> dM;  // dM[r] = dM/dxi_r
  for (auto& m : dM) m.setZero();
  G.setZero();

  Eigen::Matrix<double, 2, 5> Jv, dJv;
  for (const Link& L : links_) {
    Jv.setZero();
    for (int k = 0; k < L.nterms; ++k)
      Jv += L.coeff[k] * du[L.slot[k]] * slot_rows_[L.slot[k]].transpose();
    M.noalias() += L.mass * Jv.transpose() * Jv;
    M.noalias() += L.inertia * L.a * L.a.transpose();

    for (int r = 0; r < 5; ++r) {
      dJv.setZero();
      bool any = false;
      for (int k = 0; k < L.nterms; ++k) {
        const double ar = slot_rows_[L.slot[k]][r];
        if (ar == 0.0) continue;
        // d u'(alpha)/d xi_r = -u(alpha) * a_r
        dJv -= L.coeff[k] * ar * u[L.slot[k]] *
               slot_rows_[L.slot[k]].transpose();
        any = true;
      }
      if (!any) continue;
      Mat5 t = L.mass * dJv.transpose() * Jv;
      dM[r].noalias() += t + t.transpose();
    }

    // G = dV/dxi, V = sum m g y_com, y_com = sum coeff cos(alpha)
    for (int k = 0; k < L.nterms; ++k)
      G -= L.mass * params_.gravity * L.coeff[k] *
           std::sin(al[L.slot[k]]) * slot_rows_[L.slot[k]];
  }

  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      double c = 0.0;
      for (int k = 0; k < 5; ++k)
        c += (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * xidot[k];
      C(i, j) = 0.5 * c;
    }
}

Vec5 AnchorModel::accel(const Vec5& xi, const Vec5& xidot,
                        const Vec4& torque) const {
  Mat5 M, C;
  Vec5 G;
  dynamics_terms(xi, xidot, M, C, G);
  Vec5 rhs;
  rhs << 0.0, torque[0], torque[1], torque[2], torque[3];
  rhs -= C * xidot + G;
  Eigen::LLT<Mat5> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mass matrix not positive definite");
  return llt.solve(rhs);
}

double AnchorModel::kinetic_energy(const Vec5& xi, const Vec5& xidot) const {
  return 0.5 * xidot.dot(mass_matrix(xi) * xidot);
}

double AnchorModel::potential_energy(const Vec5& xi) const {
  std::array<double, 5> al;
  angles(xi, al);
  double v = 0.0;
  for (const Link& L : links_) {
    double y = 0.0;
    for (int k = 0; k < L.nterms; ++k)
      y += L.coeff[k] * std::cos(al[L.slot[k]]);
    v += L.mass * params_.gravity * y;
  }
  return v;
}

Vec2 AnchorModel::hip_pos(const Vec5& xi) const {
  std::array<double, 5> al;
  angles(xi, al);
  return -params_.l_thigh * u_of(al[1]) - params_.l_shin * u_of(al[2]);
}

Vec2 AnchorModel::hip_vel(const Vec5& xi, const Vec5& xidot) const {
  std::array<double, 5> al;
  angles(xi, al);
  const double w1 = slot_rows_[1].dot(xidot), w2 = slot_rows_[2].dot(xidot);
  return -params_.l_thigh * du_of(al[1]) * w1 -
         params_.l_shin * du_of(al[2]) * w2;
}

Vec2 AnchorModel::hip_acc(const Vec5& xi, const Vec5& xidot,
                          const Vec5& xiddot) const {
  std::array<double, 5> al;
  angles(xi, al);
  const double w1 = slot_rows_[1].dot(xidot), w2 = slot_rows_[2].dot(xidot);
  const double a1 = slot_rows_[1].dot(xiddot), a2 = slot_rows_[2].dot(xiddot);
  return -params_.l_thigh * (du_of(al[1]) * a1 - u_of(al[1]) * w1 * w1) -
         params_.l_shin * (du_of(al[2]) * a2 - u_of(al[2]) * w2 * w2);
}

Vec2 AnchorModel::swing_foot_pos(const Vec5& xi) const {
  std::array<double, 5> al;
  angles(xi, al);
  return hip_pos(xi) + params_.l_thigh * u_of(al[3]) +
         params_.l_shin * u_of(al[4]);
}

Vec2 AnchorModel::swing_foot_vel(const Vec5& xi, const Vec5& xidot) const {
  std::array<double, 5> al;
  angles(xi, al);
  const double w3 = slot_rows_[3].dot(xidot), w4 = slot_rows_[4].dot(xidot);
  return hip_vel(xi, xidot) + params_.l_thigh * du_of(al[3]) * w3 +
         params_.l_shin * du_of(al[4]) * w4;
}

AnchorModel::GuardInfo AnchorModel::guard_distance(const Vec5& xi,
                                                   const Vec5& xidot) const {
  GuardInfo g;
  g.c_foot = swing_foot_pos(xi)[1];
  g.cdot_foot = swing_foot_vel(xi, xidot)[1];
  g.theta = theta(xi);
  return g;
}

AnchorModel::ImpactResult AnchorModel::impact(const Vec5& xi,
                                              const Vec5& xidot) const {
  using Mat27 = Eigen::Matrix<double, 2, 7>;
  const double lt = params_.l_thigh, ls = params_.l_shin;

  std::array<double, 5> al;
  angles(xi, al);

  // Floating-base coordinates (hip_x, hip_y, q1..q5); COM offsets hang from
  // the hip, so both feet are unconstrained while the impulse is resolved.
  struct ETerm { double coeff; int slot; };
  struct ELink { double mass, inertia; int aslot; int n; std::array<ETerm, 2> t; };
  const std::array<ELink, 5> elinks = {{
      {params_.m_torso, params_.i_torso, 0, 1, {{{params_.c_torso, 0}, {}}}},
      {params_.m_thigh, params_.i_thigh, 1, 1, {{{params_.c_thigh, 1}, {}}}},
      {params_.m_shin, params_.i_shin, 2, 2,
       {{{lt, 1}, {params_.c_shin, 2}}}},
      {params_.m_thigh, params_.i_thigh, 3, 1, {{{params_.c_thigh, 3}, {}}}},
      {params_.m_shin, params_.i_shin, 4, 2,
       {{{lt, 3}, {params_.c_shin, 4}}}},
  }};

  auto erow = [&](int slot) {
    Eigen::Matrix<double, 7, 1> r = Eigen::Matrix<double, 7, 1>::Zero();
    r.tail<5>() = slot_rows_[slot];
    return r;
  };

  Mat7 Me = Mat7::Zero();
  Mat27 Jv;
  for (const ELink& L : elinks) {
    Jv.setZero();
    Jv(0, 0) = Jv(1, 1) = 1.0;
    for (int k = 0; k < L.n; ++k)
      Jv += L.t[k].coeff * du_of(al[L.t[k].slot]) * erow(L.t[k].slot).transpose();
    Me.noalias() += L.mass * Jv.transpose() * Jv;
    const auto a = erow(L.aslot);
    Me.noalias() += L.inertia * a * a.transpose();
  }

  // Swing foot (the incoming contact) Jacobian.
  Mat27 Jc = Mat27::Zero();
  Jc(0, 0) = Jc(1, 1) = 1.0;
  Jc += lt * du_of(al[3]) * erow(3).transpose();
  Jc += ls * du_of(al[4]) * erow(4).transpose();

  Vec7 qe_dot;
  qe_dot.head<2>() = hip_vel(xi, xidot);
  qe_dot.tail<5>() = xidot;

  // [Me -Jc^T; Jc 0] [qdot+; F] = [Me qdot-; 0]
  Eigen::Matrix<double, 9, 9> K = Eigen::Matrix<double, 9, 9>::Zero();
  K.topLeftCorner<7, 7>() = Me;
  K.topRightCorner<7, 2>() = -Jc.transpose();
  K.bottomLeftCorner<2, 7>() = Jc;
  Eigen::Matrix<double, 9, 1> rhs = Eigen::Matrix<double, 9, 1>::Zero();
  rhs.head<7>() = Me * qe_dot;
  Eigen::Matrix<double, 9, 1> sol = K.partialPivLu().solve(rhs);
  const Vec7 qe_dot_post = sol.head<7>();
  const Vec2 impulse = sol.tail<2>();

  ImpactResult r;
  r.impulse = impulse;
  r.liftoff = impulse[1] <= 0.0;
  r.ke_pre = 0.5 * qe_dot.dot(Me * qe_dot);
  r.ke_post = 0.5 * qe_dot_post.dot(Me * qe_dot_post);

  // Relabel: the swing leg becomes the stance leg.
  r.xi << xi[0], xi[3], xi[4], xi[1], xi[2];
  const Vec5 jd = qe_dot_post.tail<5>();
  r.xidot << jd[0], jd[3], jd[4], jd[1], jd[2];
  return r;
}

RobotState AnchorModel::make_state(const Vec5& xi, const Vec5& xidot,
                                   StanceSide side, double time) const {
  RobotState s;
  s.q.head<2>() = hip_pos(xi);
  s.q.tail<5>() = xi;
  s.qdot.head<2>() = hip_vel(xi, xidot);
  s.qdot.tail<5>() = xidot;
  s.stance_side = side;
  s.time = time;
  return s;
}

Vec14 AnchorModel::continuous_dynamics(const RobotState& s,
                                       const Vec4& torque) const {
  const Vec5 xi = xi_of(s);
  const Vec5 xidot = xidot_of(s);
  const Vec5 xiddot = accel(xi, xidot, torque);
  Vec14 out;
  out.head<2>() = hip_vel(xi, xidot);
  out.segment<5>(2) = xidot;
  out.segment<2>(7) = hip_acc(xi, xidot, xiddot);
  out.tail<5>() = xiddot;
  return out;
}

}  // namespace gaitcert
