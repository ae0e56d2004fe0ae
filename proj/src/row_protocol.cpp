#include "swarmform/row_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace swarmform {

std::pair<double, double> starting_lines(const TargetShape& shape, double offset) {
  if (shape.empty()) throw std::domain_error("starting_lines: empty shape");
  double min_x = shape.cells[0].x(), max_x = shape.cells[0].x();
  for (const auto& c : shape.cells) {
    min_x = std::min(min_x, c.x());
    max_x = std::max(max_x, c.x());
  }
  return {max_x + offset, min_x - offset};
}

std::vector<Assignment> partition_and_assign(const TargetShape& shape,
                                             const std::vector<Pose>& robots, int k,
                                             double start_offset) {
  if (robots.size() != shape.size())
    throw std::invalid_argument("partition_and_assign: robot count must equal cell count");
  if (k < 1) throw std::invalid_argument("partition_and_assign: k must be >= 1");

  Eigen::Vector2d centroid = shape_centroid(shape);
  auto [x_right, x_left] = starting_lines(shape, start_offset);

  std::vector<Eigen::Vector2d> right_cells, left_cells;
  for (const auto& c : shape.cells) {
    (c.x() >= centroid.x() ? right_cells : left_cells).push_back(c);  // ties to RIGHT
  }
  auto center_out = [&](std::vector<Eigen::Vector2d>& cells) {
    std::sort(cells.begin(), cells.end(), [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
      double da = (a - centroid).norm(), db = (b - centroid).norm();
      if (std::fabs(da - db) > 1e-12) return da < db;
      if (std::fabs(a.y() - b.y()) > 1e-12) return a.y() < b.y();
      return a.x() < b.x();
    });
  };
  center_out(right_cells);
  center_out(left_cells);

  struct Slot {
    Eigen::Vector2d target;
    int row;
    Side side;
    int order;
  };
  std::vector<Slot> slots;
  auto chunk = [&](const std::vector<Eigen::Vector2d>& cells, Side side, int first_row) {
    int row = first_row;
    for (std::size_t i = 0; i < cells.size(); i += static_cast<std::size_t>(k), row += 2) {
      for (std::size_t j = i; j < std::min(cells.size(), i + static_cast<std::size_t>(k)); ++j) {
        slots.push_back({cells[j], row, side, static_cast<int>(j - i)});
      }
    }
  };
  chunk(right_cells, Side::Right, 1);
  chunk(left_cells, Side::Left, 2);

  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.order < b.order;
  });

  // greedy matching: rows in increasing n, each target takes the nearest
  // unassigned robot (tie-break by robot id)
  std::vector<bool> taken(robots.size(), false);
  std::vector<Assignment> out;
  for (const auto& slot : slots) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < robots.size(); ++r) {
      if (taken[r]) continue;
      double d = (robots[r].position() - slot.target).norm();
      if (d < best_d - 1e-12) {
        best_d = d;
        best = static_cast<int>(r);
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    Assignment a;
    a.robot = best;
    a.target = slot.target;
    a.row = slot.row;
    a.side = slot.side;
    a.order = slot.order;
    a.start_point = {slot.side == Side::Right ? x_right : x_left, slot.target.y()};
    out.push_back(a);
  }
  std::sort(out.begin(), out.end(),
            [](const Assignment& a, const Assignment& b) { return a.robot < b.robot; });
  return out;
}

ProtocolMessage ProtocolMessage::occupied(double x, double y, int robot) {
  ProtocolMessage m;
  m.type = MsgType::Occupied;
  m.x = x;
  m.y = y;
  m.robot = robot;
  return m;
}
ProtocolMessage ProtocolMessage::row_robot_done(int row, const std::string& name) {
  ProtocolMessage m;
  m.type = MsgType::RowRobotDone;
  m.row = row;
  m.name = name;
  return m;
}
ProtocolMessage ProtocolMessage::row_moving(int row) {
  ProtocolMessage m;
  m.type = MsgType::RowMoving;
  m.row = row;
  return m;
}
ProtocolMessage ProtocolMessage::claim(double x, double y, int robot) {
  ProtocolMessage m;
  m.type = MsgType::Claim;
  m.x = x;
  m.y = y;
  m.robot = robot;
  return m;
}

std::string serialize_message(const ProtocolMessage& msg) {
  char buf[128];
  switch (msg.type) {
    case MsgType::Occupied:
      std::snprintf(buf, sizeof(buf), "OCCUPIED|%.4f|%.4f|%d", msg.x, msg.y, msg.robot);
      return buf;
    case MsgType::RowRobotDone:
      std::snprintf(buf, sizeof(buf), "ROW_ROBOT_DONE|%d|%s", msg.row, msg.name.c_str());
      return buf;
    case MsgType::RowMoving:
      std::snprintf(buf, sizeof(buf), "ROW_MOVING|%d", msg.row);
      return buf;
    case MsgType::Claim:
      std::snprintf(buf, sizeof(buf), "CLAIM|%.4f|%.4f|%d", msg.x, msg.y, msg.robot);
      return buf;
  }
  return {};
}

namespace {

std::vector<std::string> split_fields(const std::string& wire) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = wire.find('|', start);
    if (pos == std::string::npos) {
      out.push_back(wire.substr(start));
      break;
    }
    out.push_back(wire.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int& out) {
  try {
    std::size_t used = 0;
    out = std::stoi(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

std::optional<ProtocolMessage> parse_message(const std::string& wire) {
  auto f = split_fields(wire);
  if (f.empty()) return std::nullopt;
  ProtocolMessage m;
  if (f[0] == "OCCUPIED" || f[0] == "CLAIM") {
    if (f.size() != 4) return std::nullopt;
    if (!parse_double(f[1], m.x) || !parse_double(f[2], m.y) || !parse_int(f[3], m.robot))
      return std::nullopt;
    m.type = f[0] == "OCCUPIED" ? MsgType::Occupied : MsgType::Claim;
    return m;
  }
  if (f[0] == "ROW_ROBOT_DONE") {
    if (f.size() != 3 || f[2].empty()) return std::nullopt;
    if (!parse_int(f[1], m.row) || m.row < 1) return std::nullopt;
    m.type = MsgType::RowRobotDone;
    m.name = f[2];
    return m;
  }
  if (f[0] == "ROW_MOVING") {
    if (f.size() != 2) return std::nullopt;
    if (!parse_int(f[1], m.row) || m.row < 1) return std::nullopt;
    m.type = MsgType::RowMoving;
    return m;
  }
  return std::nullopt;
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Phase0Check: return "phase0";
    case Phase::WaitRowUnlock: return "wait_unlock";
    case Phase::Phase1ToStart: return "to_start";
    case Phase::StagedDelay: return "staged_delay";
    case Phase::Phase2ToTarget: return "to_target";
    case Phase::Done: return "done";
  }
  return "?";
}

bool row_gate(const RobotProtocolState& state, int my_row) {
  return my_row <= 2 || state.can_my_row_move;
}

std::optional<Eigen::Vector2d> phase0_check(const Pose& est_pose, const TargetShape& shape,
                                            double epsilon_pos) {
  std::optional<Eigen::Vector2d> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : shape.cells) {
    double d = (est_pose.position() - c).norm();
    if (d <= epsilon_pos && d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

double staggered_delay(int order, double delay_base, double delay_step) {
  if (order < 0) throw std::domain_error("staggered_delay: order must be >= 0");
  return delay_base + delay_step * order;
}

std::pair<long, long> grid_key(double x, double y, double cell_size) {
  return {static_cast<long>(std::llround(x / cell_size)),
          static_cast<long>(std::llround(y / cell_size))};
}

HandleResult handle_message(RobotProtocolState& state, const ProtocolMessage& msg, int my_id,
                            int my_row, const Eigen::Vector2d& my_target, double cell_size) {
  HandleResult res;
  switch (msg.type) {
    case MsgType::RowRobotDone:
      state.completed_robots[msg.row].insert(msg.name);
      break;
    case MsgType::RowMoving:
      if (my_row == msg.row + 2) state.can_my_row_move = true;
      if (my_row == msg.row) state.heard_own_row_moving = true;
      break;
    case MsgType::Occupied: {
      auto key = grid_key(msg.x, msg.y, cell_size);
      state.occupied_cells.insert(key);
      if (key == grid_key(my_target.x(), my_target.y(), cell_size) && msg.robot != my_id)
        ++state.occupied_conflicts;
      break;
    }
    case MsgType::Claim: {
      auto key = grid_key(msg.x, msg.y, cell_size);
      auto it = state.claims.find(key);
      if (it == state.claims.end()) {
        state.claims[key] = msg.robot;
      } else if (msg.robot < it->second) {
        // conflicting claims resolve in favor of the lower robot id
        if (it->second == my_id) res.conflict_lost_claim = true;
        ++state.claim_conflicts;
        it->second = msg.robot;
      } else if (msg.robot != it->second) {
        ++state.claim_conflicts;
      }
      state.claimed_robots.insert(msg.robot);
      break;
    }
  }
  return res;
}

std::optional<ProtocolMessage> completion_tick(RobotProtocolState& state, int my_row,
                                               int row_population) {
  if (state.row_start_broadcast) return std::nullopt;
  auto it = state.completed_robots.find(my_row);
  int done = it == state.completed_robots.end() ? 0 : static_cast<int>(it->second.size());
  if (done < row_population) return std::nullopt;
  state.row_start_broadcast = true;
  return ProtocolMessage::row_moving(my_row);
}

}  // namespace swarmform
