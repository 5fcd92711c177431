#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace gaitcert {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Vec14 = Eigen::Matrix<double, 14, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

enum class StanceSide : std::uint8_t { left, right };

inline StanceSide other(StanceSide s) {
  return s == StanceSide::left ? StanceSide::right : StanceSide::left;
}

/// Gait parameter P = (average horizontal velocity, step length).
struct GaitParams {
  double p1 = 1.0;  // m/s
  double p2 = 0.4;  // m
};

/// Rectangle of admissible gait parameters.
struct ParamBox {
  double p1_min = 0.25, p1_max = 2.0;
  double p2_min = 0.15, p2_max = 0.7;

  bool contains(const GaitParams& p, double tol = 0.0) const {
    return p.p1 >= p1_min - tol && p.p1 <= p1_max + tol &&
           p.p2 >= p2_min - tol && p.p2 <= p2_max + tol;
  }
  GaitParams clamp(const GaitParams& p) const {
    return {std::min(std::max(p.p1, p1_min), p1_max),
            std::min(std::max(p.p2, p2_min), p2_max)};
  }
};

/// Full anchor state: hip position, torso/hip/knee angles and rates,
/// expressed with the current stance foot at the origin.
struct RobotState {
  Vec7 q = Vec7::Zero();     // q_h, q_v, q1..q5
  Vec7 qdot = Vec7::Zero();  // time derivatives
  StanceSide stance_side = StanceSide::left;
  double time = 0.0;
};

}  // namespace gaitcert
