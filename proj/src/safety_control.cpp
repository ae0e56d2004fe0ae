#include "swarmform/safety_control.hpp"

#include <algorithm>
#include <cmath>

namespace swarmform {

bool in_velocity_obstacle(const Eigen::Vector2d& v, const VelocityObstacle& vo, double tau) {
  if (!(tau > 0)) throw std::domain_error("in_velocity_obstacle: tau must be > 0");
  // relative position a + t*w with w = v_j - v
  Eigen::Vector2d a = vo.apex;
  Eigen::Vector2d w = vo.obstacle_velocity - v;
  double r = vo.combined_radius;
  double w2 = w.squaredNorm();
  if (w2 < 1e-18) return a.norm() <= r;  // constant separation
  double t_star = -a.dot(w) / w2;
  if (t_star <= 0.0) {
    // separation non-decreasing on t > 0; only an initial overlap collides
    return a.norm() < r;
  }
  double t = std::min(t_star, tau);
  return (a + t * w).norm() <= r;
}

VelocitySelection select_velocity(const Eigen::Vector2d& v_pref,
                                  const std::vector<VelocityObstacle>& obstacles, double v_max,
                                  double tau) {
  auto free = [&](const Eigen::Vector2d& v) {
    for (const auto& vo : obstacles)
      if (in_velocity_obstacle(v, vo, tau)) return false;
    return true;
  };

  if (free(v_pref)) return {v_pref, false};

  constexpr int kHeadings = 36;
  constexpr int kSpeeds = 8;
  bool found = false;
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_dist = 0.0;
  auto consider = [&](const Eigen::Vector2d& v) {
    if (!free(v)) return;
    double d = (v - v_pref).norm();
    if (!found || d < best_dist) {
      found = true;
      best = v;
      best_dist = d;
    }
  };

  consider(Eigen::Vector2d::Zero());
  for (int h = 0; h < kHeadings; ++h) {
    double ang = 2.0 * M_PI * h / kHeadings;
    Eigen::Vector2d dir(std::cos(ang), std::sin(ang));
    for (int s = 1; s <= kSpeeds; ++s) {
      consider(dir * (v_max * s / kSpeeds));
    }
  }

  if (!found) return {Eigen::Vector2d::Zero(), true};
  return {best, false};
}

PdGains::PdGains(double kp, double kd) : kp_(kp), kd_(kd) {
  if (!(kp > 0.0)) throw std::invalid_argument("PdGains: K_p must be > 0");
  if (!(kd > 2.0 * std::sqrt(kp)))
    throw std::invalid_argument("PdGains: K_d must exceed 2*sqrt(K_p)");
}

Eigen::Vector3d pd_control(const Eigen::Vector3d& q, const Eigen::Vector3d& q_dot,
                           const Eigen::Vector3d& q_d, const PdGains& gains) {
  Eigen::Vector3d err = q - q_d;
  err.z() = wrap_angle(err.z());
  return -gains.kp() * err - gains.kd() * q_dot;
}

ConsensusResult consensus_step(const std::vector<double>& values, const CommGraph& graph,
                               double epsilon_step) {
  if (!(epsilon_step > 0)) throw std::domain_error("consensus_step: epsilon_step must be > 0");
  std::size_t n = values.size();
  std::size_t d_max = 0;
  for (std::size_t i = 0; i < n; ++i) d_max = std::max(d_max, graph.neighbors(i).size());

  ConsensusResult out;
  out.step_size_warning = d_max > 0 && epsilon_step >= 1.0 / static_cast<double>(d_max);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : graph.neighbors(i)) acc += values[static_cast<std::size_t>(j)] - values[i];
    out.values[i] = values[i] + epsilon_step * acc;
  }
  return out;
}

}  // namespace swarmform
