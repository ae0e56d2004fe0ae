#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swarmform/localization.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

using namespace swarmform;

TEST_CASE("sample_gps zero noise and statistics") {
  RngStream rng(3);
  GpsFix f = sample_gps({1.5, -0.5}, 0.0, rng);
  CHECK(f.x == doctest::Approx(1.5));
  CHECK(f.y == doctest::Approx(-0.5));

  const int n = 100000;
  double sx = 0, sx2 = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    GpsFix g = sample_gps({0.0, 0.0}, 0.05, rng);
    sx += g.x;
    sx2 += g.x * g.x;
    sy += g.y;
  }
  double mean = sx / n;
  double stddev = std::sqrt(sx2 / n - mean * mean);
  CHECK(stddev > 0.049);
  CHECK(stddev < 0.051);
  CHECK(std::fabs(mean) < 3.0 * 0.05 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(sy / n) < 3.0 * 0.05 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("complementary_fuse") {
  Eigen::Vector2d f = complementary_fuse({0, 0}, {1, 0}, 0.7);
  CHECK(f.x() == doctest::Approx(0.7));
  CHECK(f.y() == doctest::Approx(0.0));
  CHECK(complementary_fuse({0.3, -0.4}, {1, 2}, 0.0).isApprox(Eigen::Vector2d(0.3, -0.4)));
  CHECK(complementary_fuse({0.3, -0.4}, {1, 2}, 1.0).isApprox(Eigen::Vector2d(1, 2)));
  CHECK_THROWS_AS(complementary_fuse({0, 0}, {0, 0}, 1.1), std::domain_error);
  CHECK_THROWS_AS(complementary_fuse({0, 0}, {0, 0}, -0.1), std::domain_error);
  // linearity
  Eigen::Vector2d o(0.4, -1.2), g(2.0, 0.5);
  CHECK(complementary_fuse(3.0 * o, 3.0 * g, 0.7).isApprox(3.0 * complementary_fuse(o, g, 0.7)));
}

TEST_CASE("ekf_predict identity and straight-line Jacobian") {
  EkfState s;
  s.mu = {0.5, -0.5, 0.25};
  s.Sigma = Eigen::Matrix3d::Identity() * 0.01;
  EkfState s1 = ekf_predict(s, {0.0, 0.0}, 1.0, Eigen::Matrix3d::Zero());
  CHECK(s1.mu.isApprox(s.mu));
  CHECK(s1.Sigma.isApprox(s.Sigma));

  // v=1, omega=0, theta=0, dt=1: G = [[1,0,0],[0,1,1],[0,0,1]]
  s.mu = {0.0, 0.0, 0.0};
  s.Sigma = Eigen::Matrix3d::Identity();
  s1 = ekf_predict(s, {1.0, 0.0}, 1.0, Eigen::Matrix3d::Zero());
  CHECK(s1.mu.x() == doctest::Approx(1.0));
  Eigen::Matrix3d G;
  G << 1, 0, 0, 0, 1, 1, 0, 0, 1;
  CHECK(s1.Sigma.isApprox(G * G.transpose(), 1e-12));
}

TEST_CASE("ekf_predict Jacobian matches central finite differences") {
  RngStream rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Vector3d mu(rng.gaussian(1.0), rng.gaussian(1.0), rng.uniform() * 6 - 3);
    WheelCommand cmd{(rng.uniform() * 2 - 1) * 0.22, (rng.uniform() * 2 - 1) * 2.84};
    double dt = 0.05;
    auto g = [&](const Eigen::Vector3d& x) {
      Pose p = integrate_pose(Pose(x(0), x(1), x(2)), cmd, dt);
      return Eigen::Vector3d(p.x, p.y, p.theta);
    };
    Eigen::Matrix3d Gn;
    const double h = 1e-6;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d hi = mu, lo = mu;
      hi(j) += h;
      lo(j) -= h;
      Eigen::Vector3d diff = g(hi) - g(lo);
      diff(2) = wrap_angle(diff(2));
      Gn.col(j) = diff / (2.0 * h);
    }
    // recover the analytic G from Sigma' = G Sigma G' with Sigma = I, R = 0
    EkfState s;
    s.mu = mu;
    s.Sigma = Eigen::Matrix3d::Identity();
    EkfState s1 = ekf_predict(s, cmd, dt, Eigen::Matrix3d::Zero());
    CHECK((s1.Sigma - Gn * Gn.transpose()).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("ekf_predict additive noise with zero command") {
  EkfState s;
  s.Sigma = Eigen::Matrix3d::Identity() * 0.3;
  double q = 0.07;
  EkfState s1 = ekf_predict(s, {0.0, 0.0}, 0.05, Eigen::Matrix3d::Identity() * q);
  CHECK(s1.Sigma.isApprox(Eigen::Matrix3d::Identity() * (0.3 + q), 1e-12));
}

TEST_CASE("ekf_update limits") {
  EkfState s;
  s.mu = {0.0, 0.0, 0.4};
  s.Sigma = Eigen::Matrix3d::Identity() * 0.04;
  GpsFix z{1.0, -2.0, 0.0};

  // near-perfect measurement snaps position
  EkfState a = ekf_update(s, z, Eigen::Matrix2d::Identity() * 1e-15);
  CHECK(a.mu.x() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.mu.y() == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(a.Sigma.topLeftCorner<2, 2>().norm() < 1e-12);

  // uninformative measurement leaves the state unchanged
  EkfState b = ekf_update(s, z, Eigen::Matrix2d::Identity() * 1e12);
  CHECK((b.mu - s.mu).norm() < 1e-6);
  CHECK((b.Sigma - s.Sigma).norm() < 1e-6);

  // hand gain: Sigma_pos = I, Q = I, innovation (1, 0) -> mu.x += 0.5
  EkfState c;
  c.Sigma = Eigen::Matrix3d::Identity();
  EkfState c1 = ekf_update(c, GpsFix{1.0, 0.0, 0.0}, Eigen::Matrix2d::Identity());
  CHECK(c1.mu.x() == doctest::Approx(0.5));
  CHECK(c1.mu.y() == doctest::Approx(0.0));
}

TEST_CASE("ekf_update never increases the covariance trace") {
  RngStream rng(21);
  EkfState s;
  s.Sigma = Eigen::Matrix3d::Identity() * 0.5;
  for (int i = 0; i < 200; ++i) {
    GpsFix z{rng.gaussian(1.0), rng.gaussian(1.0), 0.0};
    EkfState s1 = ekf_update(s, z, Eigen::Matrix2d::Identity() * 0.0025);
    CHECK(s1.Sigma.trace() <= s.Sigma.trace() + 1e-12);
    s = ekf_predict(s1, {0.1, 0.2}, 0.05,
                    Eigen::Matrix3d::Identity() * 1e-5);
  }
}

TEST_CASE("covariance stays symmetric PSD over random interleavings") {
  RngStream rng(31);
  EkfState s;
  s.Sigma = Eigen::Matrix3d::Identity() * 1e-9;
  for (int i = 0; i < 1000; ++i) {
    WheelCommand cmd{(rng.uniform() * 2 - 1) * 0.22, (rng.uniform() * 2 - 1) * 2.84};
    Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
    R(0, 0) = R(1, 1) = 1e-5;
    R(2, 2) = 1e-6;
    s = ekf_predict(s, cmd, 0.05, R);
    if (i % 2 == 0) s = ekf_update(s, GpsFix{rng.gaussian(2.0), rng.gaussian(2.0), 0.0},
                                   Eigen::Matrix2d::Identity() * 0.0025);
    CHECK((s.Sigma - s.Sigma.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(s.Sigma);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("complementary estimator rebases odometry to the fused position") {
  ComplementaryEstimator est(Pose(0, 0, 0), 0.7, 0.01, 0.005);
  est.fuse(GpsFix{1.0, 0.0, 0.1});
  CHECK(est.estimate().x == doctest::Approx(0.7));
  // next fuse blends against the rebased origin: 0.3*0.7 + 0.7*1.0
  est.fuse(GpsFix{1.0, 0.0, 0.2});
  CHECK(est.estimate().x == doctest::Approx(0.91));
}

TEST_CASE("fusion beats its raw inputs over a straight run") {
  // 10 m straight with section-5 noise defaults, 100 seeds:
  // complementary <= raw GPS, EKF <= dead reckoning (position RMSE)
  const double dt = 0.05, v = 0.22, sigma_gps = 0.05, k1 = 0.01, k2 = 0.005;
  const int ticks = static_cast<int>(std::ceil(10.0 / (v * dt)));
  double se_comp = 0, se_gps = 0, se_ekf = 0, se_dr = 0;
  long n_est = 0, n_gps = 0;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream enc = RngStream::derive(900, static_cast<std::uint64_t>(seed), 1);
    RngStream gps = RngStream::derive(900, static_cast<std::uint64_t>(seed), 2);
    Pose truth(0, 0, 0);
    ComplementaryEstimator comp(truth, 0.7, k1, k2);
    EkfEstimator ekf(truth, k1, k2, sigma_gps);
    OdometryState dr;
    dr.k1 = k1;
    dr.k2 = k2;
    for (int t = 1; t <= ticks; ++t) {
      truth = integrate_pose(truth, {v, 0.0}, dt);
      auto [dphi_r, dphi_l] = simulate_encoders({v, 0.0}, dt, 0.033, 0.16, k1, k2, enc);
      comp.predict(dphi_r, dphi_l, 0.033, 0.16);
      ekf.predict(dphi_r, dphi_l, 0.033, 0.16, dt);
      dr = odometry_step(dr, dphi_r, dphi_l, 0.033, 0.16);
      if (t % 2 == 0) {
        GpsFix fix = sample_gps(truth.position(), sigma_gps, gps, t * dt);
        comp.fuse(fix);
        ekf.fuse(fix);
        se_gps += (fix.position() - truth.position()).squaredNorm();
        ++n_gps;
      }
      se_comp += (comp.estimate().position() - truth.position()).squaredNorm();
      se_ekf += (ekf.estimate().position() - truth.position()).squaredNorm();
      se_dr += (dr.pose.position() - truth.position()).squaredNorm();
      ++n_est;
    }
  }
  double rmse_comp = std::sqrt(se_comp / n_est);
  double rmse_ekf = std::sqrt(se_ekf / n_est);
  double rmse_dr = std::sqrt(se_dr / n_est);
  double rmse_gps = std::sqrt(se_gps / n_gps);
  CHECK(rmse_comp <= rmse_gps);
  CHECK(rmse_ekf <= rmse_dr);
}
