#include "swarmform/sim_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace swarmform {

namespace {

const char* msg_type_name(MsgType t) {
  switch (t) {
    case MsgType::Occupied: return "OCCUPIED";
    case MsgType::RowRobotDone: return "ROW_ROBOT_DONE";
    case MsgType::RowMoving: return "ROW_MOVING";
    case MsgType::Claim: return "CLAIM";
  }
  return "?";
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::vector<std::pair<int, int>> detect_collisions(const std::vector<Eigen::Vector2d>& positions,
                                                   double body_radius) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if ((positions[i] - positions[j]).norm() < 2.0 * body_radius)
        out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return out;
}

SimEngine::SimEngine(ScenarioConfig cfg, EstimatorKind estimator)
    : cfg_(std::move(cfg)), estimator_(estimator), hub_(cfg_.initial_poses.size()) {
  if (!cfg_.initial_poses.empty())
    assignments_ = partition_and_assign(cfg_.targets, cfg_.initial_poses,
                                        cfg_.protocol.k_row_size, cfg_.protocol.start_offset);
  robots_.resize(cfg_.initial_poses.size());
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    Robot& r = robots_[i];
    r.id = static_cast<int>(i);
    r.name = "r" + std::to_string(i);
    r.assignment = assignments_[i];
    r.true_pose = cfg_.initial_poses[i];
    r.comp = ComplementaryEstimator(r.true_pose, cfg_.sensing.alpha, cfg_.sensing.k1,
                                    cfg_.sensing.k2);
    r.ekf = EkfEstimator(r.true_pose, cfg_.sensing.k1, cfg_.sensing.k2, cfg_.sensing.sigma_gps);
    r.rng_encoder = RngStream::derive(cfg_.sim.seed, i, static_cast<std::uint64_t>(Subsystem::Encoder));
    r.rng_gps = RngStream::derive(cfg_.sim.seed, i, static_cast<std::uint64_t>(Subsystem::Gps));
    r.rng_comms = RngStream::derive(cfg_.sim.seed, i, static_cast<std::uint64_t>(Subsystem::Comms));
    r.report.row = r.assignment.row;
    r.report.side = r.assignment.side;
    r.report.order = r.assignment.order;
    r.report.target = r.assignment.target;
  }
}

bool SimEngine::all_done() const {
  for (const auto& r : robots_)
    if (r.protocol.phase != Phase::Done) return false;
  return true;
}

int SimEngine::row_population(int row) const {
  int n = 0;
  for (const auto& a : assignments_)
    if (a.row == row) ++n;
  return n;
}

int SimEngine::row_last_order(int row) const {
  int best = -1;
  for (const auto& a : assignments_)
    if (a.row == row) best = std::max(best, a.order);
  return best;
}

bool SimEngine::row_staged(const Robot& r) const {
  for (const auto& a : assignments_) {
    if (a.row != r.assignment.row) continue;
    if (r.protocol.claimed_robots.count(a.robot)) continue;
    auto it = r.protocol.completed_robots.find(a.row);
    if (it != r.protocol.completed_robots.end() &&
        it->second.count("r" + std::to_string(a.robot)))
      continue;
    return false;
  }
  return true;
}

Eigen::Vector2d SimEngine::park_goal(const Robot& r) const {
  return r.protocol.phase == Phase::Phase1ToStart ? r.assignment.start_point
                                                  : r.assignment.target;
}

void SimEngine::send(Robot& r, const ProtocolMessage& msg,
                     const std::vector<Eigen::Vector2d>& positions) {
  Envelope env;
  env.sender = r.id;
  env.channel = Channel::Global;
  env.payload = serialize_message(msg);
  env.sent_tick = tick_;
  hub_.send(env, positions, cfg_.comms.r_comm_local, cfg_.comms.loss_probability, r.rng_comms);
  r.sent_this_tick.push_back(env.payload);
  ++messages_by_type_[msg_type_name(msg.type)];
}

void SimEngine::begin_park(Robot& r) {
  r.park = ParkMode::Approach;
  r.park_fix_count = 0;
  r.park_sum.setZero();
  r.nudge_rounds = 0;
  r.approach_axis = AxisControlState{};
}

void SimEngine::protocol_step(Robot& r) {
  const double clock_now = clock();
  const double dt = cfg_.sim.dt;
  const double reverify = cfg_.protocol.reverify_period;
  const auto& positions = positions_snapshot_;

  // inbox
  for (const Envelope& env : hub_.inbox(static_cast<std::size_t>(r.id))) {
    r.recv_this_tick.push_back(env.payload);
    auto msg = parse_message(env.payload);
    if (!msg) {
      ++r.protocol.malformed_dropped;
      continue;
    }
    handle_message(r.protocol, *msg, r.id, r.assignment.row, r.assignment.target,
                   cfg_.protocol.cell_size);
  }

  auto mark_done = [&]() {
    r.protocol.phase = Phase::Done;
    r.report.done_tick = tick_;
    r.next_done_resend = clock_now + reverify;
    r.next_completion_check = clock_now + reverify;
  };
  auto broadcast_done = [&](const Eigen::Vector2d& cell) {
    send(r, ProtocolMessage::occupied(cell.x(), cell.y(), r.id), positions);
    send(r, ProtocolMessage::row_robot_done(r.assignment.row, r.name), positions);
    r.protocol.completed_robots[r.assignment.row].insert(r.name);
    r.protocol.occupied_cells.insert(grid_key(cell.x(), cell.y(), cfg_.protocol.cell_size));
  };

  // park sub-machine: Approach -> Measure -> (Nudge -> Measure)* -> parked.
  // The Measure window averages fused estimates collected at GPS ticks; a
  // nudge executes the measured offset on the displacement odometer.
  auto park_update = [&](int fixes, double tol) -> bool {
    const ControllerConfig cc{cfg_.protocol.epsilon_pos, cfg_.robot.angular_tol, cfg_.robot.k_v,
                              cfg_.robot.k_omega, cfg_.robot.v_max, cfg_.robot.omega_max};
    Pose est = r.estimate(estimator_);
    switch (r.park) {
      case ParkMode::Approach: {
        AxisControlState probe = r.approach_axis;  // control_step owns the update
        auto ctrl = axis_aligned_controller(est, park_goal(r), cc, probe);
        if (ctrl.arrived) {
          r.park = ParkMode::Measure;
          r.park_fix_count = 0;
          r.park_sum.setZero();
          r.escape_ticks = 0;  // measuring requires standing still
        }
        return false;
      }
      case ParkMode::Measure: {
        if (cfg_.sensing.sigma_gps == 0.0 && r.park_fix_count == 0) {
          // noiseless sensing: the estimate is exact, no averaging needed
          return true;
        }
        if (r.park_fix_count < fixes) return false;
        Eigen::Vector2d mean = r.park_sum / static_cast<double>(r.park_fix_count);
        r.park_fix_count = 0;
        r.park_sum.setZero();
        Eigen::Vector2d offset = park_goal(r) - mean;
        if (offset.norm() <= tol || r.nudge_rounds >= 12) return true;
        ++r.nudge_rounds;
        r.nudge_delta = offset;
        r.nudge_odom = OdometryState{};
        r.nudge_odom.pose = Pose(0.0, 0.0, est.theta);
        r.nudge_odom.k1 = cfg_.sensing.k1;
        r.nudge_odom.k2 = cfg_.sensing.k2;
        r.nudge_axis = AxisControlState{};
        r.park = ParkMode::Nudge;
        return false;
      }
      case ParkMode::Nudge: {
        ControllerConfig nc = cc;
        nc.epsilon_pos = std::max(0.4 * tol, 0.008);
        AxisControlState probe = r.nudge_axis;
        auto ctrl = axis_aligned_controller(r.nudge_odom.pose, r.nudge_delta, nc, probe);
        if (ctrl.arrived) {
          r.park = ParkMode::Measure;
          r.park_fix_count = 0;
          r.park_sum.setZero();
          r.escape_ticks = 0;  // measuring requires standing still
        }
        return false;
      }
    }
    return false;
  };

  switch (r.protocol.phase) {
    case Phase::Phase0Check: {
      auto match = phase0_check(r.estimate(estimator_), cfg_.targets, cfg_.protocol.epsilon_pos);
      if (match) {
        broadcast_done(*match);
        r.report.target = *match;  // parked cell, may differ from the planned one
        mark_done();
      } else {
        r.protocol.phase = Phase::WaitRowUnlock;
      }
      break;
    }
    case Phase::WaitRowUnlock: {
      if (row_gate(r.protocol, r.assignment.row)) {
        r.protocol.phase = Phase::Phase1ToStart;
        r.report.first_phase1_tick = tick_;
        begin_park(r);
      }
      break;
    }
    case Phase::Phase1ToStart: {
      if (park_update(cfg_.protocol.line_settle_fixes, cfg_.protocol.line_settle_tolerance)) {
        send(r,
             ProtocolMessage::claim(r.assignment.target.x(), r.assignment.target.y(), r.id),
             positions);
        r.protocol.claimed_robots.insert(r.id);
        r.protocol.claims[grid_key(r.assignment.target.x(), r.assignment.target.y(),
                                   cfg_.protocol.cell_size)] = r.id;
        r.report.claim_tick = tick_;
        r.next_claim_resend = clock_now + reverify;
        r.protocol.phase = Phase::StagedDelay;
      }
      break;
    }
    case Phase::StagedDelay: {
      if (clock_now >= r.next_claim_resend - 1e-9) {
        send(r,
             ProtocolMessage::claim(r.assignment.target.x(), r.assignment.target.y(), r.id),
             positions);
        r.next_claim_resend += reverify;
      }
      if (!r.protocol.anchor_time && row_staged(r)) {
        r.protocol.anchor_time = clock_now;
        r.protocol.delay_deadline =
            clock_now + staggered_delay(r.assignment.order, cfg_.protocol.delay_base,
                                        cfg_.protocol.delay_step);
      }
      if (r.protocol.delay_deadline && clock_now >= *r.protocol.delay_deadline - 1e-9) {
        // late position check before final approach
        auto match = phase0_check(r.estimate(estimator_), cfg_.targets, cfg_.protocol.epsilon_pos);
        if (match) {
          broadcast_done(*match);
          r.report.target = *match;
          mark_done();
        } else {
          r.protocol.phase = Phase::Phase2ToTarget;
          r.report.release_tick = tick_;
          begin_park(r);
        }
      }
      break;
    }
    case Phase::Phase2ToTarget: {
      if (clock_now >= r.next_claim_resend - 1e-9) {
        send(r,
             ProtocolMessage::claim(r.assignment.target.x(), r.assignment.target.y(), r.id),
             positions);
        r.next_claim_resend += reverify;
      }
      if (park_update(cfg_.protocol.settle_fixes, cfg_.protocol.settle_tolerance)) {
        broadcast_done(r.assignment.target);
        mark_done();
      }
      break;
    }
    case Phase::Done: {
      // resend DONE each reverify period until the row's ROW_MOVING is heard
      if (!r.protocol.heard_own_row_moving && !r.protocol.row_start_broadcast &&
          clock_now >= r.next_done_resend - 1e-9) {
        send(r, ProtocolMessage::row_robot_done(r.assignment.row, r.name), positions);
        r.next_done_resend += reverify;
      }
      if (r.assignment.order == row_last_order(r.assignment.row) &&
          clock_now >= r.next_completion_check - 1e-9) {
        int downstream = r.assignment.row + 2;
        int downstream_pop = row_population(downstream);
        if (r.protocol.row_start_broadcast && downstream_pop > 0) {
          auto it = r.protocol.completed_robots.find(downstream);
          int downstream_done = it == r.protocol.completed_robots.end()
                                    ? 0
                                    : static_cast<int>(it->second.size());
          // downstream row shows no completion yet: re-arm the broadcast
          if (downstream_done < downstream_pop) r.protocol.row_start_broadcast = false;
        }
        if (!r.protocol.row_start_broadcast) {
          auto msg =
              completion_tick(r.protocol, r.assignment.row, row_population(r.assignment.row));
          if (msg) send(r, *msg, positions);
        }
        r.next_completion_check += reverify;
      }
      break;
    }
  }
  (void)dt;
}

void SimEngine::control_step(Robot& r, const std::vector<Eigen::Vector2d>& positions) {
  r.cmd = WheelCommand{0.0, 0.0};
  if (r.protocol.phase != Phase::Phase1ToStart && r.protocol.phase != Phase::Phase2ToTarget)
    return;

  const ControllerConfig cc{cfg_.protocol.epsilon_pos, cfg_.robot.angular_tol, cfg_.robot.k_v,
                            cfg_.robot.k_omega, cfg_.robot.v_max, cfg_.robot.omega_max};
  const double th = r.true_pose.theta;

  WheelCommand cmd{0.0, 0.0};
  switch (r.park) {
    case ParkMode::Approach:
      cmd = axis_aligned_controller(r.estimate(estimator_), park_goal(r), cc, r.approach_axis).cmd;
      break;
    case ParkMode::Measure:
      break;
    case ParkMode::Nudge: {
      ControllerConfig nc = cc;
      double tol = r.protocol.phase == Phase::Phase1ToStart ? cfg_.protocol.line_settle_tolerance
                                                            : cfg_.protocol.settle_tolerance;
      nc.epsilon_pos = std::max(0.4 * tol, 0.008);
      cmd = axis_aligned_controller(r.nudge_odom.pose, r.nudge_delta, nc, r.nudge_axis).cmd;
      break;
    }
  }

  // The VO filter steers in the true frame while the goal controller steers
  // in the estimated frame; whenever the filter redirects the robot, the
  // redirected heading is committed for a short window so the two layers
  // cannot rotate against each other forever at a cone edge.
  Eigen::Vector2d v_pref;
  if (r.escape_ticks > 0) {
    --r.escape_ticks;
    v_pref = r.escape_speed * Eigen::Vector2d(std::cos(r.escape_heading),
                                              std::sin(r.escape_heading));
  } else if (std::fabs(cmd.v) > 1e-12) {
    v_pref = cmd.v * Eigen::Vector2d(std::cos(th), std::sin(th));
  } else {
    r.cmd = saturate(cmd, cfg_.robot.v_max, cfg_.robot.omega_max);  // pure rotation or hold
    return;
  }

  // velocity obstacles from true relative geometry (proximity sensing is
  // separate from GPS)
  double radius = 2.0 * cfg_.robot.body_radius + cfg_.protocol.vo_margin;
  std::vector<VelocityObstacle> obstacles;
  for (const Robot& other : robots_) {
    if (other.id == r.id) continue;
    Eigen::Vector2d apex = positions[static_cast<std::size_t>(other.id)] -
                           positions[static_cast<std::size_t>(r.id)];
    double vj = std::fabs(other.last_cmd.v);
    double reach = radius + cfg_.protocol.vo_tau * (cfg_.robot.v_max + vj) + 0.1;
    if (apex.norm() > reach) continue;
    double oth = other.true_pose.theta;
    obstacles.push_back(VelocityObstacle{
        apex, radius, other.last_cmd.v * Eigen::Vector2d(std::cos(oth), std::sin(oth))});
  }

  auto follow = [&](const Eigen::Vector2d& v) {
    double speed = v.norm();
    if (speed < 1e-9) return WheelCommand{0.0, 0.0};
    double herr = wrap_angle(std::atan2(v.y(), v.x()) - th);
    double omega =
        std::clamp(cfg_.robot.k_omega * herr, -cfg_.robot.omega_max, cfg_.robot.omega_max);
    return std::fabs(herr) > cfg_.robot.angular_tol
               ? WheelCommand{0.0, omega}
               : WheelCommand{std::min(speed, cfg_.robot.v_max), omega};
  };

  if (obstacles.empty()) {
    cmd = r.escape_ticks > 0 ? follow(v_pref) : cmd;
    r.cmd = saturate(cmd, cfg_.robot.v_max, cfg_.robot.omega_max);
    return;
  }

  auto sel = select_velocity(v_pref, obstacles, cfg_.robot.v_max, cfg_.protocol.vo_tau);
  if (sel.blocked) {
    // Inside another robot's inflated disk every candidate is covered and
    // waiting never clears the overlap: commit to backing away from the
    // nearest obstacle. Otherwise hold still until traffic clears.
    const VelocityObstacle* nearest = &obstacles.front();
    for (const auto& vo : obstacles)
      if (vo.apex.norm() < nearest->apex.norm()) nearest = &vo;
    cmd = WheelCommand{0.0, 0.0};
    if (nearest->apex.norm() <= radius) {
      r.escape_heading = wrap_angle(std::atan2(-nearest->apex.y(), -nearest->apex.x()));
      r.escape_speed = 0.25 * cfg_.robot.v_max;
      r.escape_ticks = 40;  // 2 s: turn away plus a few cm of clearance
      cmd = follow(r.escape_speed * Eigen::Vector2d(std::cos(r.escape_heading),
                                                    std::sin(r.escape_heading)));
    }
  } else {
    cmd = follow(sel.v);
    if ((sel.v - v_pref).norm() > 1e-12 && sel.v.norm() > 1e-9) {
      // redirected: hold the filter's choice for a moment
      r.escape_heading = std::atan2(sel.v.y(), sel.v.x());
      r.escape_speed = sel.v.norm();
      r.escape_ticks = std::max(r.escape_ticks, 20);
    }
  }
  r.cmd = saturate(cmd, cfg_.robot.v_max, cfg_.robot.omega_max);
}

void SimEngine::step() {
  const double dt = cfg_.sim.dt;
  positions_snapshot_.clear();
  for (const auto& r : robots_) positions_snapshot_.push_back(r.true_pose.position());

  for (auto& r : robots_) {
    r.sent_this_tick.clear();
    r.recv_this_tick.clear();
    r.collisions_this_tick.clear();
  }

  // (1) deliver messages sent at tick-1
  hub_.clear_inboxes();
  if (tick_ >= 1) hub_.deliver(tick_);

  // (2)(3) sensing and estimation
  bool gps_tick = tick_ > 0 && tick_ % cfg_.sensing.gps_period_ticks == 0;
  for (auto& r : robots_) {
    auto [dphi_r, dphi_l] = r.pending_dphi;
    r.pending_dphi = {0.0, 0.0};
    if (estimator_ == EstimatorKind::Ekf)
      r.ekf.predict(dphi_r, dphi_l, cfg_.robot.wheel_radius, cfg_.robot.wheelbase, dt);
    else
      r.comp.predict(dphi_r, dphi_l, cfg_.robot.wheel_radius, cfg_.robot.wheelbase);
    if (r.park == ParkMode::Nudge)
      r.nudge_odom =
          odometry_step(r.nudge_odom, dphi_r, dphi_l, cfg_.robot.wheel_radius, cfg_.robot.wheelbase);
    if (gps_tick) {
      GpsFix fix = sample_gps(r.true_pose.position(), cfg_.sensing.sigma_gps, r.rng_gps, clock());
      if (estimator_ == EstimatorKind::Ekf)
        r.ekf.fuse(fix);
      else
        r.comp.fuse(fix);
      if (r.park == ParkMode::Measure) {
        r.park_sum += r.estimate(estimator_).position();
        ++r.park_fix_count;
      }
    }
  }

  // (4) protocol state machines
  for (auto& r : robots_) protocol_step(r);

  // (5) controller commands filtered through velocity obstacles
  for (auto& r : robots_) control_step(r, positions_snapshot_);

  // (6) actuate and integrate true poses
  for (auto& r : robots_) {
    r.true_pose = integrate_pose(r.true_pose, r.cmd, dt);
    r.distance_traveled += std::fabs(r.cmd.v) * dt;
    r.pending_dphi =
        simulate_encoders(r.cmd, dt, cfg_.robot.wheel_radius, cfg_.robot.wheelbase,
                          cfg_.sensing.k1, cfg_.sensing.k2, r.rng_encoder);
    r.last_cmd = r.cmd;
  }

  // (7) collision detection on true poses
  std::vector<Eigen::Vector2d> new_positions;
  for (const auto& r : robots_) new_positions.push_back(r.true_pose.position());
  auto pairs = detect_collisions(new_positions, cfg_.robot.body_radius);
  collision_events_ += static_cast<int>(pairs.size());
  for (auto [i, j] : pairs) {
    robots_[static_cast<std::size_t>(i)].collisions_this_tick.push_back(j);
    robots_[static_cast<std::size_t>(j)].collisions_this_tick.push_back(i);
  }

  // (8) trace
  for (const auto& r : robots_) {
    TraceEvent ev;
    ev.tick = tick_;
    ev.robot = r.id;
    ev.true_pose = r.true_pose;
    ev.est_pose = r.estimate(estimator_);
    ev.phase = r.protocol.phase;
    ev.cmd = r.cmd;
    ev.sent = r.sent_this_tick;
    ev.received = r.recv_this_tick;
    ev.collisions = r.collisions_this_tick;
    trace_.push_back(std::move(ev));
  }

  ++tick_;
}

RunReport SimEngine::run() {
  while (!all_done() && tick_ < cfg_.sim.max_ticks) step();

  RunReport rep;
  rep.timeout = !all_done();
  rep.completion_tick = tick_;
  rep.ticks_executed = tick_;
  rep.collision_events = collision_events_;
  rep.messages_sent = hub_.messages_sent();
  rep.messages_lost = hub_.deliveries_lost();
  rep.messages_by_type = messages_by_type_;
  rep.config = cfg_;
  rep.estimator = estimator_;
  for (auto& r : robots_) {
    r.report.terminal_error_m = (r.true_pose.position() - r.report.target).norm();
    r.report.distance_traveled_m = r.distance_traveled;
    rep.max_terminal_error_m = std::max(rep.max_terminal_error_m, r.report.terminal_error_m);
    rep.robots.push_back(r.report);
  }
  rep.trace = std::move(trace_);
  return rep;
}

std::string trace_header_line(const ScenarioConfig& cfg, EstimatorKind estimator) {
  nlohmann::json header;
  header["type"] = "header";
  header["estimator"] = estimator == EstimatorKind::Ekf ? "ekf" : "complementary";
  header["config"] = nlohmann::json::parse(serialize_scenario(cfg));
  return header.dump();
}

std::string trace_event_line(const TraceEvent& ev) {
  std::string s = "{\"t\":" + std::to_string(ev.tick) + ",\"id\":" + std::to_string(ev.robot);
  s += ",\"tp\":[" + fmt_double(ev.true_pose.x) + "," + fmt_double(ev.true_pose.y) + "," +
       fmt_double(ev.true_pose.theta) + "]";
  s += ",\"ep\":[" + fmt_double(ev.est_pose.x) + "," + fmt_double(ev.est_pose.y) + "," +
       fmt_double(ev.est_pose.theta) + "]";
  s += ",\"ph\":\"" + std::string(phase_name(ev.phase)) + "\"";
  s += ",\"cmd\":[" + fmt_double(ev.cmd.v) + "," + fmt_double(ev.cmd.omega) + "]";
  auto str_list = [](const std::vector<std::string>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += "\"" + v[i] + "\"";
      if (i + 1 < v.size()) out += ",";
    }
    return out + "]";
  };
  s += ",\"tx\":" + str_list(ev.sent);
  s += ",\"rx\":" + str_list(ev.received);
  s += ",\"col\":[";
  for (std::size_t i = 0; i < ev.collisions.size(); ++i) {
    s += std::to_string(ev.collisions[i]);
    if (i + 1 < ev.collisions.size()) s += ",";
  }
  s += "]}";
  return s;
}

std::string trace_to_jsonl(const RunReport& report) {
  std::string out = trace_header_line(report.config, report.estimator) + "\n";
  for (const auto& ev : report.trace) out += trace_event_line(ev) + "\n";
  return out;
}

std::string metrics_csv_header() {
  return "completion_tick,collisions,messages_sent,messages_lost,max_terminal_error_m,timeout_flag";
}

std::string metrics_csv_row(const RunReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%ld,%d,%ld,%ld,%.6f,%d", report.completion_tick,
                report.collision_events, report.messages_sent, report.messages_lost,
                report.max_terminal_error_m, report.timeout ? 1 : 0);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace swarmform
