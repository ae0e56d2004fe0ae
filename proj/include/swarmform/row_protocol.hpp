#pragma once

#include "swarmform/world_model.hpp"

#include <Eigen/Core>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace swarmform {

enum class Side { Left, Right };

/// Planned task of one robot: target cell, row, side, within-row order and
/// the staging point on the side's starting line.
struct Assignment {
  int robot{-1};
  Eigen::Vector2d target{0.0, 0.0};
  int row{0};  // 1-based; odd rows fill from the RIGHT, even from the LEFT
  Side side{Side::Right};
  int order{0};  // center-out order within the row, in [0, k-1]
  Eigen::Vector2d start_point{0.0, 0.0};
};

/// Starting lines: x_right = max cell x + offset, x_left = min cell x - offset.
std::pair<double, double> starting_lines(const TargetShape& shape, double offset);

/// Side/row partition and deterministic robot-to-target matching:
///  1. cells split LEFT/RIGHT of the centroid x (ties RIGHT);
///  2. per side, sorted by distance from the centroid, (y, x) tie-break;
///  3. chunked into rows of k; RIGHT rows get n = 1,3,5..., LEFT n = 2,4,6...;
///  4. order o = index in the center-out sort;
///  5. rows in increasing n, each target takes the nearest unassigned robot
///     (tie-break: lower robot id).
std::vector<Assignment> partition_and_assign(const TargetShape& shape,
                                             const std::vector<Pose>& robots, int k,
                                             double start_offset);

enum class MsgType { Occupied, RowRobotDone, RowMoving, Claim };

/// Flat-record protocol message, wire format `TYPE|field|...` with
/// coordinates at fixed 4-decimal precision.
struct ProtocolMessage {
  MsgType type{MsgType::Occupied};
  double x{0.0};          // Occupied, Claim
  double y{0.0};          // Occupied, Claim
  int robot{-1};          // Occupied, Claim
  int row{0};             // RowRobotDone, RowMoving
  std::string name;       // RowRobotDone

  static ProtocolMessage occupied(double x, double y, int robot);
  static ProtocolMessage row_robot_done(int row, const std::string& name);
  static ProtocolMessage row_moving(int row);
  static ProtocolMessage claim(double x, double y, int robot);
};

std::string serialize_message(const ProtocolMessage& msg);
/// Parse a wire record; malformed input yields nullopt (callers drop and count).
std::optional<ProtocolMessage> parse_message(const std::string& wire);

enum class Phase { Phase0Check, WaitRowUnlock, Phase1ToStart, StagedDelay, Phase2ToTarget, Done };

const char* phase_name(Phase p);

/// Per-robot protocol bookkeeping (state variables of the completion
/// tracking plus the phase machine).
struct RobotProtocolState {
  Phase phase{Phase::Phase0Check};
  std::map<int, std::set<std::string>> completed_robots;  // row -> names
  std::map<std::pair<long, long>, int> claims;            // snapped cell -> robot id
  std::set<int> claimed_robots;                           // ids whose CLAIM has been seen
  std::set<std::pair<long, long>> occupied_cells;         // snapped cells
  bool can_my_row_move{false};
  bool row_start_broadcast{false};
  bool heard_own_row_moving{false};
  long malformed_dropped{0};
  long claim_conflicts{0};
  long occupied_conflicts{0};
  std::optional<double> delay_deadline;  // s, set once the row is staged
  std::optional<double> anchor_time;     // s, tick the row was observed staged
};

/// Row gate: true iff n <= 2 (no row n-2 exists) or ROW_MOVING(n-2) was heard.
bool row_gate(const RobotProtocolState& state, int my_row);

/// Nearest shape cell within epsilon_pos of the estimate, or nullopt.
std::optional<Eigen::Vector2d> phase0_check(const Pose& est_pose, const TargetShape& shape,
                                            double epsilon_pos);

/// Staggered-release delay: delay_base + delay_step * o.
double staggered_delay(int order, double delay_base = 1.0, double delay_step = 3.0);

/// Snap a coordinate pair onto integer grid keys for claim/occupancy maps.
std::pair<long, long> grid_key(double x, double y, double cell_size);

struct HandleResult {
  bool conflict_lost_claim{false};  // our own claim was displaced by a lower id
};

/// Apply one received message to the protocol state.
///  ROW_ROBOT_DONE(n, name) -> completed_robots[n] gains name;
///  ROW_MOVING(n)           -> robots in row n+2 set can_my_row_move;
///  OCCUPIED(x, y)          -> cell marked occupied, conflicts counted;
///  CLAIM(x, y, id)         -> reservation recorded, lower id wins conflicts.
HandleResult handle_message(RobotProtocolState& state, const ProtocolMessage& msg, int my_id,
                            int my_row, const Eigen::Vector2d& my_target, double cell_size);

/// Completion check run by the row's last robot every reverify period:
/// returns the ROW_MOVING(row) broadcast when |completed_robots[row]| has
/// reached the row population.
std::optional<ProtocolMessage> completion_tick(RobotProtocolState& state, int my_row,
                                               int row_population);

}  // namespace swarmform
