#pragma once

#include "swarmform/localization.hpp"
#include "swarmform/locomotion.hpp"
#include "swarmform/network.hpp"
#include "swarmform/row_protocol.hpp"
#include "swarmform/rng.hpp"
#include "swarmform/safety_control.hpp"
#include "swarmform/world_model.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace swarmform {

enum class EstimatorKind { Complementary, Ekf };

/// One per-tick record per robot.
struct TraceEvent {
  long tick{0};
  int robot{-1};
  Pose true_pose;
  Pose est_pose;
  Phase phase{Phase::Phase0Check};
  WheelCommand cmd;
  std::vector<std::string> sent;      // wire records
  std::vector<std::string> received;  // wire records
  std::vector<int> collisions;        // ids of robots overlapping this one
};

/// Exact pairwise overlap check: (i,j) collide iff distance < 2*body_radius.
std::vector<std::pair<int, int>> detect_collisions(const std::vector<Eigen::Vector2d>& positions,
                                                   double body_radius);

struct RobotReport {
  int row{0};
  Side side{Side::Right};
  int order{0};
  Eigen::Vector2d target{0, 0};
  std::optional<long> first_phase1_tick;
  std::optional<long> claim_tick;    // staged at the starting line
  std::optional<long> release_tick;  // left the starting line
  std::optional<long> done_tick;
  double terminal_error_m{0.0};      // true distance to the assigned target
  double distance_traveled_m{0.0};
};

struct RunReport {
  bool timeout{false};
  long completion_tick{0};
  long ticks_executed{0};
  int collision_events{0};
  long messages_sent{0};
  long messages_lost{0};
  std::map<std::string, long> messages_by_type;
  double max_terminal_error_m{0.0};
  std::vector<RobotReport> robots;
  std::vector<TraceEvent> trace;
  ScenarioConfig config;
  EstimatorKind estimator{EstimatorKind::Complementary};
};

/// Deterministic fixed-timestep engine. Sub-phase order per tick:
/// deliver -> sense -> estimate -> protocol -> control (VO-filtered) ->
/// integrate -> collisions -> trace; robots iterate by ascending id.
class SimEngine {
 public:
  explicit SimEngine(ScenarioConfig cfg, EstimatorKind estimator = EstimatorKind::Complementary);

  void step();
  bool all_done() const;
  long tick() const { return tick_; }
  double clock() const { return static_cast<double>(tick_) * cfg_.sim.dt; }

  /// Step until every robot is Done or max_ticks is hit, then report.
  RunReport run();

  const std::vector<Assignment>& assignments() const { return assignments_; }

 private:
  enum class ParkMode { Approach, Measure, Nudge };

  struct Robot {
    int id{-1};
    std::string name;
    Assignment assignment;
    Pose true_pose;
    WheelCommand cmd;                      // command applied this tick
    WheelCommand last_cmd;                 // command applied previous tick (VO input)
    std::pair<double, double> pending_dphi{0.0, 0.0};
    ComplementaryEstimator comp;
    EkfEstimator ekf;
    RobotProtocolState protocol;
    ParkMode park{ParkMode::Approach};
    int park_fix_count{0};
    Eigen::Vector2d park_sum{0, 0};
    OdometryState nudge_odom;              // displacement odometer during a nudge
    Eigen::Vector2d nudge_delta{0, 0};
    int nudge_rounds{0};
    AxisControlState approach_axis;
    AxisControlState nudge_axis;
    int escape_ticks{0};        // committed VO redirect/retreat window
    double escape_heading{0.0};
    double escape_speed{0.0};
    double next_claim_resend{-1.0};
    double next_done_resend{-1.0};
    double next_completion_check{-1.0};
    double distance_traveled{0.0};
    RngStream rng_encoder;
    RngStream rng_gps;
    RngStream rng_comms;
    RobotReport report;
    std::vector<std::string> sent_this_tick;
    std::vector<std::string> recv_this_tick;
    std::vector<int> collisions_this_tick;

    Pose estimate(EstimatorKind kind) const {
      return kind == EstimatorKind::Ekf ? ekf.estimate() : comp.estimate();
    }
  };

  void protocol_step(Robot& r);
  void control_step(Robot& r, const std::vector<Eigen::Vector2d>& positions);
  void begin_park(Robot& r);
  Eigen::Vector2d park_goal(const Robot& r) const;
  bool row_staged(const Robot& r) const;
  int row_population(int row) const;
  int row_last_order(int row) const;
  void send(Robot& r, const ProtocolMessage& msg, const std::vector<Eigen::Vector2d>& positions);

  ScenarioConfig cfg_;
  EstimatorKind estimator_;
  std::vector<Assignment> assignments_;
  std::vector<Robot> robots_;
  MessageHub hub_;
  long tick_{0};
  int collision_events_{0};
  std::map<std::string, long> messages_by_type_;
  std::vector<TraceEvent> trace_;
  std::vector<Eigen::Vector2d> positions_snapshot_;
};

/// Trace serialization (JSONL): header line with the resolved config and
/// seed, then one line per TraceEvent, byte-deterministic.
std::string trace_header_line(const ScenarioConfig& cfg, EstimatorKind estimator);
std::string trace_event_line(const TraceEvent& ev);
std::string trace_to_jsonl(const RunReport& report);

/// Metrics CSV: header plus a single named-column row.
std::string metrics_csv_header();
std::string metrics_csv_row(const RunReport& report);

/// FNV-1a 64-bit digest, used to compare traces cheaply.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace swarmform
