#include "swarmform/localization.hpp"

#include <cmath>

namespace swarmform {

GpsFix sample_gps(const Eigen::Vector2d& true_pos, double sigma_gps, RngStream& rng,
                  double timestamp) {
  if (sigma_gps < 0) throw std::domain_error("sample_gps: sigma_gps must be >= 0");
  return GpsFix{true_pos.x() + rng.gaussian(sigma_gps), true_pos.y() + rng.gaussian(sigma_gps),
                timestamp};
}

Eigen::Vector2d complementary_fuse(const Eigen::Vector2d& odom, const Eigen::Vector2d& gps,
                                   double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("complementary_fuse: alpha must be in [0,1]");
  return alpha * gps + (1.0 - alpha) * odom;
}

EkfState ekf_predict(const EkfState& state, const WheelCommand& cmd, double dt,
                     const Eigen::Matrix3d& R_t) {
  Pose prior(state.mu.x(), state.mu.y(), state.mu.z());
  Pose posterior = integrate_pose(prior, cmd, dt);

  // analytic Jacobian of the exact-arc motion model at the prior mean
  double th = prior.theta;
  Eigen::Matrix3d G = Eigen::Matrix3d::Identity();
  if (std::fabs(cmd.omega) < 1e-9) {
    G(0, 2) = -cmd.v * dt * std::sin(th);
    G(1, 2) = cmd.v * dt * std::cos(th);
  } else {
    double th1 = th + cmd.omega * dt;
    double rr = cmd.v / cmd.omega;
    G(0, 2) = rr * (std::cos(th1) - std::cos(th));
    G(1, 2) = rr * (std::sin(th1) - std::sin(th));
  }

  EkfState next;
  next.mu = Eigen::Vector3d(posterior.x, posterior.y, posterior.theta);
  Eigen::Matrix3d S = G * state.Sigma * G.transpose() + R_t;
  next.Sigma = 0.5 * (S + S.transpose());
  return next;
}

EkfState ekf_update(const EkfState& state, const GpsFix& z, const Eigen::Matrix2d& Q_t) {
  Eigen::Matrix<double, 2, 3> H = Eigen::Matrix<double, 2, 3>::Zero();
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;

  Eigen::Matrix2d S = H * state.Sigma * H.transpose() + Q_t;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(S);
  if (!lu.isInvertible())
    throw std::runtime_error("ekf_update: singular innovation covariance");

  Eigen::Matrix<double, 3, 2> K = state.Sigma * H.transpose() * lu.inverse();
  Eigen::Vector2d innovation = z.position() - state.mu.head<2>();

  EkfState next;
  Eigen::Vector3d mu = state.mu + K * innovation;
  mu.z() = wrap_angle(mu.z());
  next.mu = mu;

  // Joseph form keeps the covariance symmetric PSD
  Eigen::Matrix3d IKH = Eigen::Matrix3d::Identity() - K * H;
  Eigen::Matrix3d P = IKH * state.Sigma * IKH.transpose() + K * Q_t * K.transpose();
  next.Sigma = 0.5 * (P + P.transpose());
  return next;
}

}  // namespace swarmform
