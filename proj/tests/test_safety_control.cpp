#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swarmform/safety_control.hpp"
#include "swarmform/rng.hpp"

#include <cmath>

using namespace swarmform;

namespace {

// dense time-sampling oracle for VO membership
bool in_vo_sampled(const Eigen::Vector2d& v, const VelocityObstacle& vo, double tau,
                   int samples = 10000) {
  for (int i = 1; i <= samples; ++i) {
    double t = tau * static_cast<double>(i) / samples;
    if ((vo.apex + t * (vo.obstacle_velocity - v)).norm() <= vo.combined_radius) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("in_velocity_obstacle geometry") {
  VelocityObstacle vo{{1, 0}, 0.2, {0, 0}};
  CHECK(in_velocity_obstacle({1, 0}, vo, 5.0));       // head-on ray hits the disk
  CHECK(!in_velocity_obstacle({0, 1}, vo, 5.0));      // perpendicular misses (min dist 1)
  VelocityObstacle moving{{1, 0}, 0.2, {0.3, 0.1}};
  CHECK(!in_velocity_obstacle({0.3, 0.1}, moving, 5.0));  // zero relative velocity
}

TEST_CASE("closed-form membership agrees with the sampling oracle") {
  RngStream rng(13);
  int agree = 0, evaluated = 0;
  for (int i = 0; i < 300; ++i) {
    VelocityObstacle vo{{rng.gaussian(1.0), rng.gaussian(1.0)},
                        0.05 + rng.uniform() * 0.5,
                        {rng.gaussian(0.2), rng.gaussian(0.2)}};
    if (vo.apex.norm() < vo.combined_radius) continue;  // already overlapping: skip
    Eigen::Vector2d v(rng.gaussian(0.3), rng.gaussian(0.3));
    ++evaluated;
    bool closed = in_velocity_obstacle(v, vo, 5.0);
    bool sampled = in_vo_sampled(v, vo, 5.0);
    // the dense sampler can only under-report membership at tangency;
    // closed form must cover everything the sampler finds
    if (sampled) CHECK(closed);
    if (closed == sampled) ++agree;
  }
  CHECK(agree >= evaluated - 5);  // tangency disagreements are rare
}

TEST_CASE("select_velocity") {
  // unconstrained: the preferred velocity itself
  Eigen::Vector2d v_pref(0.15, 0.1);
  auto sel = select_velocity(v_pref, {}, 0.22, 5.0);
  CHECK(!sel.blocked);
  CHECK(sel.v.isApprox(v_pref));

  // obstacle dead ahead: returns a free velocity within the speed limit
  VelocityObstacle ahead{{0.5, 0}, 0.2, {0, 0}};
  sel = select_velocity({0.2, 0.0}, {ahead}, 0.22, 5.0);
  CHECK(!sel.blocked);
  CHECK(!in_velocity_obstacle(sel.v, ahead, 5.0));
  CHECK(sel.v.norm() <= 0.22 + 1e-12);

  // everything covered: zero vector plus the blocked flag
  VelocityObstacle everywhere{{0.01, 0}, 5.0, {0, 0}};
  sel = select_velocity({0.2, 0.0}, {everywhere}, 0.22, 5.0);
  CHECK(sel.blocked);
  CHECK(sel.v.norm() == doctest::Approx(0.0));
}

TEST_CASE("select_velocity output is always free and bounded") {
  RngStream rng(19);
  for (int i = 0; i < 200; ++i) {
    std::vector<VelocityObstacle> obstacles;
    int n = 1 + static_cast<int>(rng.uniform() * 4);
    for (int j = 0; j < n; ++j) {
      Eigen::Vector2d apex(rng.gaussian(0.8), rng.gaussian(0.8));
      if (apex.norm() < 0.25) apex *= 0.3 / apex.norm();
      obstacles.push_back({apex, 0.16, {rng.gaussian(0.1), rng.gaussian(0.1)}});
    }
    double ang = rng.uniform() * 2 * M_PI;
    Eigen::Vector2d v_pref = 0.22 * rng.uniform() * Eigen::Vector2d(std::cos(ang), std::sin(ang));
    auto sel = select_velocity(v_pref, obstacles, 0.22, 5.0);
    CHECK(sel.v.norm() <= 0.22 + 1e-12);
    if (!sel.blocked)
      for (const auto& vo : obstacles) CHECK(!in_vo_sampled(sel.v, vo, 5.0, 2000));
  }
}

TEST_CASE("PdGains stability condition") {
  CHECK_NOTHROW(PdGains(1.0, 3.0));  // 3 > 2*sqrt(1)
  CHECK_THROWS_AS(PdGains(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PdGains(0.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(PdGains(4.0, 4.0), std::invalid_argument);  // needs > 4
}

TEST_CASE("pd_control law") {
  PdGains gains(1.0, 3.0);
  Eigen::Vector3d q(1, 2, 0.5);
  CHECK(pd_control(q, Eigen::Vector3d::Zero(), q, gains).norm() == doctest::Approx(0.0));

  // wrapped angle error: q_theta = 3, desired -3 -> error wraps to 6 - 2*pi
  Eigen::Vector3d u = pd_control({0, 0, 3.0}, Eigen::Vector3d::Zero(), {0, 0, -3.0}, gains);
  CHECK(u.z() == doctest::Approx(-(6.0 - 2 * M_PI)));

  // linearity in (q - q_d, q_dot)
  Eigen::Vector3d dq(0.3, -0.1, 0.2), qd(0.05, 0.02, -0.1);
  Eigen::Vector3d u1 = pd_control(dq, qd, Eigen::Vector3d::Zero(), gains);
  Eigen::Vector3d u2 = pd_control(2 * dq, 2 * qd, Eigen::Vector3d::Zero(), gains);
  CHECK(u2.isApprox(2 * u1, 1e-12));
}

TEST_CASE("consensus_step examples") {
  CommGraph pair(2);
  pair.set_edge(0, 1);
  auto r = consensus_step({0.0, 1.0}, pair, 0.5);
  CHECK(r.values[0] == doctest::Approx(0.5));
  CHECK(r.values[1] == doctest::Approx(0.5));
  CHECK(!r.step_size_warning);  // eps = 0.5 < 1/d_max = 1
  CHECK(consensus_step({0.0, 1.0}, pair, 1.0).step_size_warning);

  CommGraph isolated(2);
  r = consensus_step({0.0, 1.0}, isolated, 0.25);
  CHECK(r.values[0] == doctest::Approx(0.0));
  CHECK(r.values[1] == doctest::Approx(1.0));

  CommGraph path(3);
  path.set_edge(0, 1);
  path.set_edge(1, 2);
  r = consensus_step({0.0, 3.0, 6.0}, path, 0.25);
  CHECK(r.values[0] == doctest::Approx(0.75));
  CHECK(r.values[1] == doctest::Approx(3.0));
  CHECK(r.values[2] == doctest::Approx(5.25));
  CHECK(!r.step_size_warning);  // 0.25 < 1/2

  // long-run limit is the mean
  std::vector<double> x{0.0, 3.0, 6.0};
  for (int i = 0; i < 1000; ++i) x = consensus_step(x, path, 0.25).values;
  for (double v : x) CHECK(std::fabs(v - 3.0) < 1e-6);
}

TEST_CASE("consensus preserves the mean exactly") {
  RngStream rng(23);
  CommGraph g(6);
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  g.set_edge(2, 3);
  g.set_edge(3, 4);
  g.set_edge(4, 5);
  g.set_edge(0, 5);
  g.set_edge(1, 4);
  std::vector<double> x;
  for (int i = 0; i < 6; ++i) x.push_back(rng.gaussian(2.0));
  double mean0 = 0;
  for (double v : x) mean0 += v;
  mean0 /= 6.0;
  for (int step = 0; step < 300; ++step) {
    x = consensus_step(x, g, 0.2).values;
    double m = 0;
    for (double v : x) m += v;
    m /= 6.0;
    CHECK(std::fabs(m - mean0) < 1e-12);
  }
}
