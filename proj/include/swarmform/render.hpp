#pragma once

#include "swarmform/sim_engine.hpp"

#include <string>
#include <vector>

namespace swarmform {

/// Trace parsed back from its JSONL form.
struct ParsedTrace {
  ScenarioConfig config;
  EstimatorKind estimator{EstimatorKind::Complementary};
  std::vector<TraceEvent> events;  // in file order
  long last_tick{0};
};

/// Parses a trace produced by trace_to_jsonl. Throws std::runtime_error
/// naming the 1-based line number on a malformed line.
ParsedTrace parse_trace(const std::string& jsonl);

struct RenderOptions {
  double scale{400.0};   // pixels per meter
  double margin{0.25};   // meters of padding around the scene bounds
};

struct Frame {
  long tick{0};
  std::string svg;
};

/// One SVG per tick divisible by stride: robots as phase-colored circles,
/// target cells as outlined squares, starting lines as dashed verticals.
/// World coordinates map to pixels by px = (x - min_x + margin) * scale,
/// py = (max_y + margin - y) * scale (y axis flipped for screen space).
std::vector<Frame> render_frames(const ParsedTrace& trace, long stride,
                                 const RenderOptions& opts = {});

}  // namespace swarmform
