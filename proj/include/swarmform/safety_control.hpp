#pragma once

#include "swarmform/network.hpp"
#include "swarmform/world_model.hpp"

#include <Eigen/Core>
#include <vector>

namespace swarmform {

/// Collision cone of robot i against robot j in velocity space.
struct VelocityObstacle {
  Eigen::Vector2d apex;               // p_j - p_i
  double combined_radius{0.0};        // r_i + r_j (> 0)
  Eigen::Vector2d obstacle_velocity;  // v_j
};

/// True iff some t in (0, tau] brings the relative position within the
/// combined radius; closed form via the quadratic minimum over t.
bool in_velocity_obstacle(const Eigen::Vector2d& v, const VelocityObstacle& vo, double tau);

struct VelocitySelection {
  Eigen::Vector2d v{0.0, 0.0};
  bool blocked{false};
};

/// Deterministic candidate-grid argmin of ||v - v_pref|| outside every VO:
/// v_pref, the zero vector, and a 36-heading x 8-speed polar grid. All
/// candidates covered -> zero vector with the blocked flag set.
VelocitySelection select_velocity(const Eigen::Vector2d& v_pref,
                                  const std::vector<VelocityObstacle>& obstacles, double v_max,
                                  double tau);

/// PD gains with the stability condition K_p > 0, K_d > 2*sqrt(K_p)
/// enforced at construction (std::invalid_argument otherwise).
class PdGains {
 public:
  PdGains(double kp, double kd);
  double kp() const { return kp_; }
  double kd() const { return kd_; }

 private:
  double kp_;
  double kd_;
};

/// u = -K_p (q - q_d) - K_d q_dot componentwise; the third (angle)
/// component uses the wrapped difference.
Eigen::Vector3d pd_control(const Eigen::Vector3d& q, const Eigen::Vector3d& q_dot,
                           const Eigen::Vector3d& q_d, const PdGains& gains);

struct ConsensusResult {
  std::vector<double> values;
  bool step_size_warning{false};  // epsilon >= 1/d_max
};

/// Synchronous x_i += eps * sum_j (x_j - x_i) over the pre-step snapshot.
ConsensusResult consensus_step(const std::vector<double>& values, const CommGraph& graph,
                               double epsilon_step);

}  // namespace swarmform
