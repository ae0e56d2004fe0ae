#include "swarmform/locomotion.hpp"

#include <algorithm>
#include <cmath>

namespace swarmform {

WheelCommand saturate(const WheelCommand& cmd, double v_max, double omega_max) {
  return {std::clamp(cmd.v, -v_max, v_max), std::clamp(cmd.omega, -omega_max, omega_max)};
}

Pose integrate_pose(const Pose& pose, const WheelCommand& cmd, double dt) {
  if (!std::isfinite(cmd.v) || !std::isfinite(cmd.omega) || !std::isfinite(dt))
    throw std::domain_error("integrate_pose: non-finite input");
  double x = pose.x, y = pose.y, th = pose.theta;
  if (std::fabs(cmd.omega) < 1e-9) {
    x += cmd.v * dt * std::cos(th);
    y += cmd.v * dt * std::sin(th);
    th += cmd.omega * dt;
  } else {
    double th1 = th + cmd.omega * dt;
    double rr = cmd.v / cmd.omega;
    x += rr * (std::sin(th1) - std::sin(th));
    y -= rr * (std::cos(th1) - std::cos(th));
    th = th1;
  }
  return Pose(x, y, th);
}

OdometryState odometry_step(const OdometryState& state, double dphi_r, double dphi_l, double r,
                            double L) {
  double ds = 0.5 * r * (dphi_r + dphi_l);
  double dth = (r / L) * (dphi_r - dphi_l);
  OdometryState next = state;
  double mid = state.pose.theta + 0.5 * dth;
  next.pose = Pose(state.pose.x + ds * std::cos(mid), state.pose.y + ds * std::sin(mid),
                   state.pose.theta + dth);
  next.distance += std::fabs(ds);
  next.cum_turn += std::fabs(dth);
  next.sigma2 = next.k1 * next.distance + next.k2 * next.cum_turn;
  return next;
}

std::pair<double, double> simulate_encoders(const WheelCommand& cmd, double dt, double r, double L,
                                            double k1, double k2, RngStream& rng,
                                            bool noise_enabled) {
  double ds = cmd.v * dt;
  double dth = cmd.omega * dt;
  if (noise_enabled) {
    // independent slip noise on the distance and turn increments; the
    // dead-reckoned variance then accumulates as k1*d + k2*|turn|
    ds += rng.gaussian(std::sqrt(k1 * std::fabs(cmd.v * dt)));
    dth += rng.gaussian(std::sqrt(k2 * std::fabs(cmd.omega * dt)));
  }
  double dphi_r = (ds + 0.5 * dth * L) / r;
  double dphi_l = (ds - 0.5 * dth * L) / r;
  return {dphi_r, dphi_l};
}

ControlOutput axis_aligned_controller(const Pose& est_pose, const Eigen::Vector2d& goal,
                                      const ControllerConfig& cfg) {
  AxisControlState fresh;
  return axis_aligned_controller(est_pose, goal, cfg, fresh);
}

ControlOutput axis_aligned_controller(const Pose& est_pose, const Eigen::Vector2d& goal,
                                      const ControllerConfig& cfg, AxisControlState& state) {
  double y_err = goal.y() - est_pose.y;
  double x_err = goal.x() - est_pose.x;

  if (std::fabs(y_err) <= cfg.epsilon_pos && std::fabs(x_err) <= cfg.epsilon_pos) {
    state.x_leg = false;
    return {WheelCommand{0.0, 0.0}, true};
  }

  double y_gate = (state.x_leg ? cfg.hysteresis : 1.0) * cfg.epsilon_pos;
  bool y_active = std::fabs(y_err) > y_gate;
  // x leg finished while y sits inside the hysteresis band: back to y
  if (!y_active && std::fabs(x_err) <= cfg.epsilon_pos) y_active = true;
  state.x_leg = !y_active;

  double target_heading;
  double axis_err;
  if (y_active) {
    target_heading = y_err > 0 ? M_PI / 2 : -M_PI / 2;
    axis_err = std::fabs(y_err);
  } else {
    target_heading = x_err > 0 ? 0.0 : M_PI;
    axis_err = std::fabs(x_err);
  }

  double heading_err = wrap_angle(target_heading - est_pose.theta);
  double omega = std::clamp(cfg.k_omega * heading_err, -cfg.omega_max, cfg.omega_max);
  if (std::fabs(heading_err) > cfg.angular_tol) {
    return {WheelCommand{0.0, omega}, false};
  }
  double v = std::min(cfg.v_max, cfg.k_v * axis_err);
  return {WheelCommand{v, omega}, false};
}

}  // namespace swarmform
