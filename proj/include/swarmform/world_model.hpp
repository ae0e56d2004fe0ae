#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmform {

/// Wrap an angle into [-pi, pi). Throws std::domain_error on non-finite input.
double wrap_angle(double theta);

/// Robot configuration (x, y, theta) in the world frame.
/// theta is kept wrapped in [-pi, pi) at all times.
struct Pose {
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Pose() = default;
  Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

  Eigen::Vector2d position() const { return {x, y}; }
};

/// Grid-cell target set with derived centroid.
struct TargetShape {
  std::vector<Eigen::Vector2d> cells;  // ordered, pairwise distinct, grid-snapped
  double cell_size{0.25};

  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
};

/// Arithmetic mean of the cell coordinates. Throws std::domain_error if empty.
Eigen::Vector2d shape_centroid(const TargetShape& shape);

struct RobotParams {
  double v_max{0.22};        // m/s
  double omega_max{2.84};    // rad/s
  double wheel_radius{0.033};// m
  double wheelbase{0.16};    // m
  double body_radius{0.07};  // m
  double k_v{1.0};           // approach gain, 1/s
  double k_omega{3.0};       // heading P gain
  double angular_tol{0.05};  // rad, rotate-then-translate gate
};

struct SensingParams {
  double sigma_gps{0.05};    // m, per axis
  double alpha{0.7};         // complementary filter GPS weight
  double k1{0.01};           // m^2/m, odometry drift per distance
  double k2{0.005};          // m^2/rad, odometry drift per turn
  int gps_period_ticks{2};   // 10 Hz at dt = 0.05; first fix after tick 0
};

struct CommsParams {
  double r_comm_local{0.2};      // m
  double loss_probability{0.0};  // per-recipient Bernoulli drop
};

struct ProtocolParams {
  int k_row_size{6};
  double epsilon_pos{0.05};      // m
  double start_offset{0.25};     // m, starting line offset beyond shape edge
  double delay_base{1.0};        // s
  double delay_step{3.0};        // s
  double reverify_period{1.0};   // s
  double cell_size{0.25};        // m, target grid pitch
  int settle_fixes{50};          // GPS fixes averaged before declaring final arrival
  double settle_tolerance{0.02}; // m, accepted offset of the averaged position
  int line_settle_fixes{15};     // same at the starting line
  double line_settle_tolerance{0.03};
  double vo_tau{5.0};            // s, velocity-obstacle horizon
  double vo_margin{0.02};        // m, added to combined radii
};

struct SimParams {
  double dt{0.05};          // s
  std::uint64_t seed{1};
  long max_ticks{40000};
};

struct ScenarioConfig {
  RobotParams robot;
  SensingParams sensing;
  CommsParams comms;
  ProtocolParams protocol;
  SimParams sim;
  std::vector<Pose> initial_poses;
  TargetShape targets;
};

/// Scenario parse/validation failure, message names the offending field.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse and fully validate a scenario JSON document. Missing optional
/// fields take the documented defaults; unknown keys are an error.
ScenarioConfig load_scenario(const std::string& text);

/// Inverse of load_scenario on valid configs (round-trip identity).
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace swarmform
