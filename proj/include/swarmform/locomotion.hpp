#pragma once

#include "swarmform/rng.hpp"
#include "swarmform/world_model.hpp"

#include <utility>

namespace swarmform {

/// Unicycle command (linear, angular velocity).
struct WheelCommand {
  double v{0.0};      // m/s
  double omega{0.0};  // rad/s
};

/// Clamp each component independently to its bound, sign preserved.
WheelCommand saturate(const WheelCommand& cmd, double v_max, double omega_max);

/// Exact closed-form unicycle integration over dt. For |omega| < 1e-9 the
/// straight-line limit is used; theta comes out wrapped.
Pose integrate_pose(const Pose& pose, const WheelCommand& cmd, double dt);

/// Dead-reckoned pose plus the drift bookkeeping sigma2 = k1*d + k2*|turn|.
struct OdometryState {
  Pose pose;
  double distance{0.0};   // total |ds| accumulated, m
  double cum_turn{0.0};   // total |dtheta| accumulated, rad
  double sigma2{0.0};     // m^2
  double k1{0.01};        // m^2/m
  double k2{0.005};       // m^2/rad
};

/// One encoder update: midpoint-heading dead reckoning from wheel increments.
OdometryState odometry_step(const OdometryState& state, double dphi_r, double dphi_l, double r,
                            double L);

/// Simulated wheel encoder readings for an executed command: exact inversion
/// of the dead-reckoning equations plus slip noise sized so that the
/// dead-reckoned position variance grows as k1*d + k2*|turn|.
std::pair<double, double> simulate_encoders(const WheelCommand& cmd, double dt, double r, double L,
                                            double k1, double k2, RngStream& rng,
                                            bool noise_enabled = true);

struct ControllerConfig {
  double epsilon_pos{0.05};  // m, per-axis arrival tolerance
  double angular_tol{0.05};  // rad
  double k_v{1.0};           // 1/s
  double k_omega{3.0};
  double v_max{0.22};
  double omega_max{2.84};
  double hysteresis{3.0};    // y-leg re-entry threshold, multiple of epsilon_pos
};

struct ControlOutput {
  WheelCommand cmd;
  bool arrived{false};
};

/// Steering memory: which axis leg is active. Once the x leg engages, the y
/// leg re-engages only past hysteresis * epsilon_pos, so position noise near
/// the threshold cannot flip the target heading every tick (each flip costs
/// a rotation, and rotation feeds odometry heading drift).
struct AxisControlState {
  bool x_leg{false};
};

/// Axis-aligned waypoint steering: y axis first, then x axis; rotate in
/// place until the heading error is inside angular_tol, then drive at
/// min(v_max, k_v * axis_err). Both errors within epsilon_pos -> arrived.
ControlOutput axis_aligned_controller(const Pose& est_pose, const Eigen::Vector2d& goal,
                                      const ControllerConfig& cfg);

/// Stateful variant with axis-leg hysteresis; the stateless overload is the
/// special case of a fresh state every call.
ControlOutput axis_aligned_controller(const Pose& est_pose, const Eigen::Vector2d& goal,
                                      const ControllerConfig& cfg, AxisControlState& state);

}  // namespace swarmform
