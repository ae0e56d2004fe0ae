#pragma once

#include "swarmform/locomotion.hpp"
#include "swarmform/rng.hpp"
#include "swarmform/world_model.hpp"

#include <Eigen/Dense>
#include <optional>

namespace swarmform {

/// Absolute position fix: true position plus N(0, sigma_gps^2) per axis.
struct GpsFix {
  double x{0.0};
  double y{0.0};
  double timestamp{0.0};  // s

  Eigen::Vector2d position() const { return {x, y}; }
};

GpsFix sample_gps(const Eigen::Vector2d& true_pos, double sigma_gps, RngStream& rng,
                  double timestamp = 0.0);

/// Componentwise convex blend alpha*gps + (1-alpha)*odom.
/// Throws std::domain_error for alpha outside [0,1].
Eigen::Vector2d complementary_fuse(const Eigen::Vector2d& odom, const Eigen::Vector2d& gps,
                                   double alpha);

/// Pose-only EKF belief: mean [x, y, theta] and 3x3 covariance.
struct EkfState {
  Eigen::Vector3d mu{Eigen::Vector3d::Zero()};
  Eigen::Matrix3d Sigma{Eigen::Matrix3d::Zero()};
};

/// Prediction: exact-arc motion model, analytic Jacobian, Sigma <- G S G' + R
/// (re-symmetrized).
EkfState ekf_predict(const EkfState& state, const WheelCommand& cmd, double dt,
                     const Eigen::Matrix3d& R_t);

/// Position-only update, h(X) = (x, y). Joseph-form covariance update keeps
/// Sigma symmetric PSD. Throws std::runtime_error when the innovation
/// covariance is numerically singular (caller keeps the prior state).
EkfState ekf_update(const EkfState& state, const GpsFix& z, const Eigen::Matrix2d& Q_t);

/// Complementary-filter estimator as run per robot per tick: odometry every
/// tick, GPS fused on schedule, dead-reckoning origin rebased to the fused
/// position after every fix.
class ComplementaryEstimator {
 public:
  ComplementaryEstimator() = default;
  ComplementaryEstimator(const Pose& initial, double alpha, double k1, double k2)
      : alpha_(alpha) {
    odom_.pose = initial;
    odom_.k1 = k1;
    odom_.k2 = k2;
  }

  void predict(double dphi_r, double dphi_l, double r, double L) {
    odom_ = odometry_step(odom_, dphi_r, dphi_l, r, L);
  }

  void fuse(const GpsFix& fix) {
    Eigen::Vector2d fused = complementary_fuse(odom_.pose.position(), fix.position(), alpha_);
    odom_.pose.x = fused.x();  // rebase the dead-reckoning origin
    odom_.pose.y = fused.y();
    last_gps_ = fix;
  }

  Pose estimate() const { return odom_.pose; }
  const OdometryState& odometry() const { return odom_; }
  const std::optional<GpsFix>& last_gps() const { return last_gps_; }

 private:
  OdometryState odom_;
  double alpha_{0.7};
  std::optional<GpsFix> last_gps_;
};

/// EKF estimator driven by measured encoder increments (as a pseudo command)
/// with GPS position updates.
class EkfEstimator {
 public:
  EkfEstimator() = default;
  EkfEstimator(const Pose& initial, double k1, double k2, double sigma_gps)
      : k1_(k1), k2_(k2) {
    state_.mu = Eigen::Vector3d(initial.x, initial.y, initial.theta);
    state_.Sigma = Eigen::Matrix3d::Identity() * 1e-9;
    Q_ = Eigen::Matrix2d::Identity() * std::max(sigma_gps * sigma_gps, 1e-12);
  }

  void predict(double dphi_r, double dphi_l, double r, double L, double dt) {
    double ds = 0.5 * r * (dphi_r + dphi_l);
    double dth = (r / L) * (dphi_r - dphi_l);
    WheelCommand pseudo{ds / dt, dth / dt};
    Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
    R(0, 0) = R(1, 1) = k1_ * std::fabs(ds);
    R(2, 2) = k2_ * std::fabs(dth);
    state_ = ekf_predict(state_, pseudo, dt, R);
  }

  void fuse(const GpsFix& fix) { state_ = ekf_update(state_, fix, Q_); }

  Pose estimate() const { return Pose(state_.mu.x(), state_.mu.y(), state_.mu.z()); }
  const EkfState& state() const { return state_; }

 private:
  EkfState state_;
  Eigen::Matrix2d Q_{Eigen::Matrix2d::Identity()};
  double k1_{0.01};
  double k2_{0.005};
};

}  // namespace swarmform
