#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swarmform/row_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace swarmform;

namespace {

TargetShape rectangle36() {
  TargetShape s;
  s.cell_size = 0.25;
  for (int row = 0; row < 6; ++row)
    for (int col = 0; col < 6; ++col) s.cells.emplace_back(col * 0.25, row * 0.25);
  return s;
}

}  // namespace

TEST_CASE("starting_lines") {
  TargetShape s;
  s.cells = {{0.0, 0.0}, {2.0, 0.0}};
  auto [right, left] = starting_lines(s, 0.25);
  CHECK(right == doctest::Approx(2.25));
  CHECK(left == doctest::Approx(-0.25));
  auto [r0, l0] = starting_lines(s, 0.0);
  CHECK(r0 == doctest::Approx(2.0));
  CHECK(l0 == doctest::Approx(0.0));
  TargetShape empty;
  CHECK_THROWS_AS(starting_lines(empty, 0.25), std::domain_error);
}

TEST_CASE("partition: sides, parity and center-out order") {
  TargetShape s;
  s.cells = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  std::vector<Pose> robots{{0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {2.0, 1.0, 0.0}};
  auto a = partition_and_assign(s, robots, 3, 0.25);
  REQUIRE(a.size() == 3);
  // centroid (1,0): cells at x >= 1 go RIGHT (row 1), x < 1 LEFT (row 2)
  for (const auto& as : a) {
    if (as.target.x() >= 1.0) {
      CHECK(as.row == 1);
      CHECK(as.side == Side::Right);
      CHECK(as.start_point.x() == doctest::Approx(2.25));
    } else {
      CHECK(as.row == 2);
      CHECK(as.side == Side::Left);
      CHECK(as.start_point.x() == doctest::Approx(-0.25));
    }
    CHECK(as.start_point.y() == doctest::Approx(as.target.y()));
  }
  // center-out: (1,0) is distance 0 from the centroid -> order 0 in row 1
  auto center = std::find_if(a.begin(), a.end(), [](const Assignment& x) {
    return x.target.isApprox(Eigen::Vector2d(1.0, 0.0));
  });
  REQUIRE(center != a.end());
  CHECK(center->order == 0);
}

TEST_CASE("partition of a 36-cell rectangle is a bijection with parity discipline") {
  TargetShape s = rectangle36();
  std::vector<Pose> robots;
  for (int i = 0; i < 36; ++i) robots.emplace_back(-2.0 + 0.3 * i, 3.0, 0.0);
  auto a = partition_and_assign(s, robots, 6, 0.25);
  REQUIRE(a.size() == 36);

  std::set<int> ids;
  std::set<std::pair<double, double>> targets;
  std::set<int> rows;
  for (const auto& as : a) {
    ids.insert(as.robot);
    targets.insert({as.target.x(), as.target.y()});
    rows.insert(as.row);
    CHECK((as.row % 2 == 1) == (as.side == Side::Right));
    CHECK(as.order >= 0);
    CHECK(as.order < 6);
  }
  CHECK(ids.size() == 36);      // each robot exactly once
  CHECK(targets.size() == 36);  // onto the target set
  CHECK(rows == std::set<int>{1, 2, 3, 4, 5, 6});
  for (int row = 1; row <= 6; ++row) {
    int n = 0;
    for (const auto& as : a)
      if (as.row == row) ++n;
    CHECK(n == 6);
  }
  CHECK_THROWS_AS(partition_and_assign(s, std::vector<Pose>(35), 6, 0.25),
                  std::invalid_argument);
}

TEST_CASE("message serialization round trip") {
  auto check_rt = [](const ProtocolMessage& m) {
    auto p = parse_message(serialize_message(m));
    REQUIRE(p);
    CHECK(p->type == m.type);
    CHECK(p->x == doctest::Approx(m.x));
    CHECK(p->y == doctest::Approx(m.y));
    CHECK(p->robot == m.robot);
    CHECK(p->row == m.row);
    CHECK(p->name == m.name);
  };
  check_rt(ProtocolMessage::occupied(1.25, -0.5, 7));
  check_rt(ProtocolMessage::row_robot_done(3, "r12"));
  check_rt(ProtocolMessage::row_moving(4));
  check_rt(ProtocolMessage::claim(-2.25, 0.75, 11));
  CHECK(serialize_message(ProtocolMessage::occupied(1.25, -0.5, 7)) == "OCCUPIED|1.2500|-0.5000|7");
}

TEST_CASE("malformed messages parse to nullopt") {
  CHECK(!parse_message(""));
  CHECK(!parse_message("BOGUS|1"));
  CHECK(!parse_message("ROW_MOVING"));
  CHECK(!parse_message("ROW_MOVING|0"));
  CHECK(!parse_message("ROW_MOVING|x"));
  CHECK(!parse_message("OCCUPIED|a|b|c"));
  CHECK(!parse_message("OCCUPIED|1.0|2.0"));
  CHECK(!parse_message("ROW_ROBOT_DONE|2|"));
  CHECK(!parse_message("CLAIM|1|2|3|4"));
}

TEST_CASE("phase0_check") {
  TargetShape s = rectangle36();
  auto hit = phase0_check(Pose(0.25, 0.25, 0.0), s, 0.05);
  REQUIRE(hit);
  CHECK(hit->isApprox(Eigen::Vector2d(0.25, 0.25)));
  CHECK(phase0_check(Pose(0.25, 0.29, 0.0), s, 0.05));     // 0.04 m away
  CHECK(!phase0_check(Pose(0.25, 0.31, 0.0), s, 0.05));    // 0.06 m away
}

TEST_CASE("staggered_delay") {
  CHECK(staggered_delay(0) == doctest::Approx(1.0));
  CHECK(staggered_delay(2) == doctest::Approx(7.0));
  CHECK(staggered_delay(5) == doctest::Approx(16.0));
  CHECK_THROWS_AS(staggered_delay(-1), std::domain_error);
}

TEST_CASE("row_gate") {
  RobotProtocolState st;
  CHECK(row_gate(st, 1));
  CHECK(row_gate(st, 2));
  CHECK(!row_gate(st, 3));
  handle_message(st, ProtocolMessage::row_moving(1), 9, 3, {0, 0}, 0.25);
  CHECK(row_gate(st, 3));
  CHECK(st.can_my_row_move);
}

TEST_CASE("handle_message semantics") {
  RobotProtocolState st;
  // idempotent DONE
  handle_message(st, ProtocolMessage::row_robot_done(1, "r4"), 0, 5, {0, 0}, 0.25);
  handle_message(st, ProtocolMessage::row_robot_done(1, "r4"), 0, 5, {0, 0}, 0.25);
  CHECK(st.completed_robots[1].size() == 1);

  // ROW_MOVING(3) unlocks row 5
  handle_message(st, ProtocolMessage::row_moving(3), 0, 5, {0, 0}, 0.25);
  CHECK(st.can_my_row_move);

  // CLAIM conflict: lower id wins, regardless of arrival order
  for (auto order : {std::pair{2, 7}, std::pair{7, 2}}) {
    RobotProtocolState c;
    handle_message(c, ProtocolMessage::claim(0.5, 0.5, order.first), 0, 1, {9, 9}, 0.25);
    handle_message(c, ProtocolMessage::claim(0.5, 0.5, order.second), 0, 1, {9, 9}, 0.25);
    CHECK(c.claims[grid_key(0.5, 0.5, 0.25)] == 2);
  }
}

TEST_CASE("completion_tick thresholds") {
  RobotProtocolState st;
  for (int i = 0; i < 5; ++i)
    st.completed_robots[2].insert("r" + std::to_string(i));
  CHECK(!completion_tick(st, 2, 6));  // 5 of 6
  st.completed_robots[2].insert("r5");
  auto msg = completion_tick(st, 2, 6);
  REQUIRE(msg);
  CHECK(msg->type == MsgType::RowMoving);
  CHECK(msg->row == 2);
  CHECK(st.row_start_broadcast);
  // re-broadcast only after the flag is reset by the resend policy
  bool no_rebroadcast = !completion_tick(st, 2, 6) || !st.row_start_broadcast;
  CHECK(no_rebroadcast);
}

TEST_CASE("completion liveness under every single-message loss pattern") {
  // miniature: row 1 robot "a" (last of its row), row 3 robot "b".
  // Enumerate which of a's first ROW_MOVING broadcasts get lost; with
  // resend-on-check, b always unlocks as soon as one gets through.
  for (int losses = 0; losses < 4; ++losses) {
    RobotProtocolState a, b;
    a.completed_robots[1].insert("ra");
    bool unlocked = false;
    int attempts = 0;
    for (int check = 0; check < 10 && !unlocked; ++check) {
      if (a.row_start_broadcast && !unlocked) a.row_start_broadcast = false;  // engine resend policy
      auto msg = completion_tick(a, 1, 1);
      if (!msg) continue;
      ++attempts;
      if (attempts <= losses) continue;  // message lost in transit
      handle_message(b, *msg, 1, 3, {0, 0}, 0.25);
      unlocked = row_gate(b, 3);
    }
    CHECK(unlocked);
    CHECK(attempts == losses + 1);
  }
}
