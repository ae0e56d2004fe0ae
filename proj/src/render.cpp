#include "swarmform/render.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace swarmform {

namespace {

Phase phase_from_name(const std::string& s) {
  for (Phase p : {Phase::Phase0Check, Phase::WaitRowUnlock, Phase::Phase1ToStart,
                  Phase::StagedDelay, Phase::Phase2ToTarget, Phase::Done})
    if (s == phase_name(p)) return p;
  throw std::runtime_error("unknown phase name: " + s);
}

const char* phase_color(Phase p) {
  switch (p) {
    case Phase::Phase0Check: return "#9e9e9e";
    case Phase::WaitRowUnlock: return "#607d8b";
    case Phase::Phase1ToStart: return "#1e88e5";
    case Phase::StagedDelay: return "#fbc02d";
    case Phase::Phase2ToTarget: return "#e53935";
    case Phase::Done: return "#43a047";
  }
  return "#000000";
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

ParsedTrace parse_trace(const std::string& jsonl) {
  ParsedTrace out;
  std::istringstream in(jsonl);
  std::string line;
  long lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      if (!have_header) {
        if (j.value("type", "") != "header") throw std::runtime_error("missing header");
        out.config = load_scenario(j.at("config").dump());
        out.estimator = j.at("estimator").get<std::string>() == "ekf"
                            ? EstimatorKind::Ekf
                            : EstimatorKind::Complementary;
        have_header = true;
        continue;
      }
      TraceEvent ev;
      ev.tick = j.at("t").get<long>();
      ev.robot = j.at("id").get<int>();
      auto tp = j.at("tp");
      ev.true_pose = Pose(tp.at(0).get<double>(), tp.at(1).get<double>(), tp.at(2).get<double>());
      auto ep = j.at("ep");
      ev.est_pose = Pose(ep.at(0).get<double>(), ep.at(1).get<double>(), ep.at(2).get<double>());
      ev.phase = phase_from_name(j.at("ph").get<std::string>());
      ev.cmd = WheelCommand{j.at("cmd").at(0).get<double>(), j.at("cmd").at(1).get<double>()};
      for (const auto& s : j.at("tx")) ev.sent.push_back(s.get<std::string>());
      for (const auto& s : j.at("rx")) ev.received.push_back(s.get<std::string>());
      for (const auto& c : j.at("col")) ev.collisions.push_back(c.get<int>());
      out.last_tick = std::max(out.last_tick, ev.tick);
      out.events.push_back(std::move(ev));
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw std::runtime_error("trace is empty: no header line");
  if (out.events.empty()) throw std::runtime_error("trace is empty: no event lines");
  return out;
}

std::vector<Frame> render_frames(const ParsedTrace& trace, long stride,
                                 const RenderOptions& opts) {
  if (stride <= 0) throw std::runtime_error("stride must be positive");

  const double cell = trace.config.protocol.cell_size;
  auto [line_left, line_right] =
      starting_lines(trace.config.targets, trace.config.protocol.start_offset);

  // scene bounds over targets, starting lines, and every traced position
  double min_x = line_left, max_x = line_right;
  double min_y = 1e300, max_y = -1e300;
  for (const auto& c : trace.config.targets.cells) {
    min_x = std::min(min_x, c.x() - cell / 2);
    max_x = std::max(max_x, c.x() + cell / 2);
    min_y = std::min(min_y, c.y() - cell / 2);
    max_y = std::max(max_y, c.y() + cell / 2);
  }
  for (const auto& ev : trace.events) {
    min_x = std::min(min_x, ev.true_pose.x);
    max_x = std::max(max_x, ev.true_pose.x);
    min_y = std::min(min_y, ev.true_pose.y);
    max_y = std::max(max_y, ev.true_pose.y);
  }

  const double s = opts.scale;
  const double m = opts.margin;
  auto X = [&](double wx) { return (wx - min_x + m) * s; };
  auto Y = [&](double wy) { return (max_y + m - wy) * s; };
  const double width = (max_x - min_x + 2 * m) * s;
  const double height = (max_y - min_y + 2 * m) * s;
  const double body_r = trace.config.robot.body_radius * s;

  std::map<long, std::vector<const TraceEvent*>> by_tick;
  for (const auto& ev : trace.events) by_tick[ev.tick].push_back(&ev);

  std::vector<Frame> frames;
  for (const auto& [tick, events] : by_tick) {
    if (tick % stride != 0) continue;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& c : trace.config.targets.cells) {
      svg += "<rect x=\"" + px(X(c.x() - cell / 2)) + "\" y=\"" + px(Y(c.y() + cell / 2)) +
             "\" width=\"" + px(cell * s) + "\" height=\"" + px(cell * s) +
             "\" fill=\"none\" stroke=\"#bdbdbd\" stroke-width=\"1\"/>\n";
    }
    for (double lx : {line_left, line_right}) {
      svg += "<line x1=\"" + px(X(lx)) + "\" y1=\"" + px(Y(max_y + m)) + "\" x2=\"" + px(X(lx)) +
             "\" y2=\"" + px(Y(min_y - m)) +
             "\" stroke=\"#757575\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    }
    for (const TraceEvent* ev : events) {
      double cx = X(ev->true_pose.x), cy = Y(ev->true_pose.y);
      svg += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(body_r) +
             "\" fill=\"" + phase_color(ev->phase) + "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
      // heading tick
      double hx = cx + body_r * std::cos(ev->true_pose.theta);
      double hy = cy - body_r * std::sin(ev->true_pose.theta);
      svg += "<line x1=\"" + px(cx) + "\" y1=\"" + px(cy) + "\" x2=\"" + px(hx) + "\" y2=\"" +
             px(hy) + "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
    svg += "<text x=\"8\" y=\"16\" font-family=\"monospace\" font-size=\"12\">tick " +
           std::to_string(tick) + "</text>\n";
    svg += "</svg>\n";
    frames.push_back(Frame{tick, std::move(svg)});
  }
  return frames;
}

}  // namespace swarmform
