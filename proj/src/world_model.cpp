#include "swarmform/world_model.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace swarmform {

using nlohmann::json;

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw std::domain_error("wrap_angle: non-finite input");
  double two_pi = 2.0 * M_PI;
  double w = std::fmod(theta + M_PI, two_pi);
  if (w < 0) w += two_pi;
  return w - M_PI;
}

Eigen::Vector2d shape_centroid(const TargetShape& shape) {
  if (shape.empty()) throw std::domain_error("shape_centroid: empty shape");
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const auto& c : shape.cells) sum += c;
  return sum / static_cast<double>(shape.cells.size());
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
  }
}

double get_num(const json& obj, const std::string& path, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

long get_int(const json& obj, const std::string& path, const char* key, long dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long>();
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be > 0");
}

}  // namespace

ScenarioConfig load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario: top level must be an object");
  check_keys(doc, "scenario",
             {"robot", "sensing", "comms", "protocol", "sim", "initial_poses", "targets"});

  ScenarioConfig cfg;

  json robot = doc.value("robot", json::object());
  check_keys(robot, "robot",
             {"v_max", "omega_max", "wheel_radius", "wheelbase", "body_radius", "k_v", "k_omega",
              "angular_tol"});
  cfg.robot.v_max = get_num(robot, "robot", "v_max", cfg.robot.v_max);
  cfg.robot.omega_max = get_num(robot, "robot", "omega_max", cfg.robot.omega_max);
  cfg.robot.wheel_radius = get_num(robot, "robot", "wheel_radius", cfg.robot.wheel_radius);
  cfg.robot.wheelbase = get_num(robot, "robot", "wheelbase", cfg.robot.wheelbase);
  cfg.robot.body_radius = get_num(robot, "robot", "body_radius", cfg.robot.body_radius);
  cfg.robot.k_v = get_num(robot, "robot", "k_v", cfg.robot.k_v);
  cfg.robot.k_omega = get_num(robot, "robot", "k_omega", cfg.robot.k_omega);
  cfg.robot.angular_tol = get_num(robot, "robot", "angular_tol", cfg.robot.angular_tol);
  require_positive(cfg.robot.v_max, "robot.v_max");
  require_positive(cfg.robot.omega_max, "robot.omega_max");
  require_positive(cfg.robot.wheel_radius, "robot.wheel_radius");
  require_positive(cfg.robot.wheelbase, "robot.wheelbase");
  require_positive(cfg.robot.body_radius, "robot.body_radius");

  json sensing = doc.value("sensing", json::object());
  check_keys(sensing, "sensing", {"sigma_gps", "alpha", "k1", "k2", "gps_period_ticks"});
  cfg.sensing.sigma_gps = get_num(sensing, "sensing", "sigma_gps", cfg.sensing.sigma_gps);
  cfg.sensing.alpha = get_num(sensing, "sensing", "alpha", cfg.sensing.alpha);
  cfg.sensing.k1 = get_num(sensing, "sensing", "k1", cfg.sensing.k1);
  cfg.sensing.k2 = get_num(sensing, "sensing", "k2", cfg.sensing.k2);
  cfg.sensing.gps_period_ticks =
      static_cast<int>(get_int(sensing, "sensing", "gps_period_ticks", cfg.sensing.gps_period_ticks));
  if (cfg.sensing.sigma_gps < 0) fail("sensing.sigma_gps", "must be >= 0");
  if (cfg.sensing.alpha < 0 || cfg.sensing.alpha > 1) fail("sensing.alpha", "must be in [0,1]");
  if (cfg.sensing.k1 < 0) fail("sensing.k1", "must be >= 0");
  if (cfg.sensing.k2 < 0) fail("sensing.k2", "must be >= 0");
  if (cfg.sensing.gps_period_ticks < 1) fail("sensing.gps_period_ticks", "must be >= 1");

  json comms = doc.value("comms", json::object());
  check_keys(comms, "comms", {"r_comm_local", "loss_probability"});
  cfg.comms.r_comm_local = get_num(comms, "comms", "r_comm_local", cfg.comms.r_comm_local);
  cfg.comms.loss_probability =
      get_num(comms, "comms", "loss_probability", cfg.comms.loss_probability);
  if (cfg.comms.r_comm_local < 0) fail("comms.r_comm_local", "must be >= 0");
  if (cfg.comms.loss_probability < 0 || cfg.comms.loss_probability >= 1)
    fail("comms.loss_probability", "must be in [0,1)");

  json protocol = doc.value("protocol", json::object());
  check_keys(protocol, "protocol",
             {"k_row_size", "epsilon_pos", "start_offset", "delay_base", "delay_step",
              "reverify_period", "cell_size", "settle_fixes", "settle_tolerance",
              "line_settle_fixes", "line_settle_tolerance", "vo_tau", "vo_margin"});
  cfg.protocol.k_row_size =
      static_cast<int>(get_int(protocol, "protocol", "k_row_size", cfg.protocol.k_row_size));
  cfg.protocol.epsilon_pos = get_num(protocol, "protocol", "epsilon_pos", cfg.protocol.epsilon_pos);
  cfg.protocol.start_offset =
      get_num(protocol, "protocol", "start_offset", cfg.protocol.start_offset);
  cfg.protocol.delay_base = get_num(protocol, "protocol", "delay_base", cfg.protocol.delay_base);
  cfg.protocol.delay_step = get_num(protocol, "protocol", "delay_step", cfg.protocol.delay_step);
  cfg.protocol.reverify_period =
      get_num(protocol, "protocol", "reverify_period", cfg.protocol.reverify_period);
  cfg.protocol.cell_size = get_num(protocol, "protocol", "cell_size", cfg.protocol.cell_size);
  cfg.protocol.settle_fixes =
      static_cast<int>(get_int(protocol, "protocol", "settle_fixes", cfg.protocol.settle_fixes));
  cfg.protocol.settle_tolerance =
      get_num(protocol, "protocol", "settle_tolerance", cfg.protocol.settle_tolerance);
  cfg.protocol.line_settle_fixes = static_cast<int>(
      get_int(protocol, "protocol", "line_settle_fixes", cfg.protocol.line_settle_fixes));
  cfg.protocol.line_settle_tolerance =
      get_num(protocol, "protocol", "line_settle_tolerance", cfg.protocol.line_settle_tolerance);
  cfg.protocol.vo_tau = get_num(protocol, "protocol", "vo_tau", cfg.protocol.vo_tau);
  cfg.protocol.vo_margin = get_num(protocol, "protocol", "vo_margin", cfg.protocol.vo_margin);
  if (cfg.protocol.k_row_size < 1) fail("protocol.k_row_size", "must be >= 1");
  require_positive(cfg.protocol.epsilon_pos, "protocol.epsilon_pos");
  require_positive(cfg.protocol.cell_size, "protocol.cell_size");
  require_positive(cfg.protocol.reverify_period, "protocol.reverify_period");
  require_positive(cfg.protocol.vo_tau, "protocol.vo_tau");

  json sim = doc.value("sim", json::object());
  check_keys(sim, "sim", {"dt", "seed", "max_ticks"});
  cfg.sim.dt = get_num(sim, "sim", "dt", cfg.sim.dt);
  if (sim.contains("seed")) {
    if (!sim.at("seed").is_number_integer() && !sim.at("seed").is_number_unsigned())
      fail("sim.seed", "expected an integer");
    cfg.sim.seed = sim.at("seed").get<std::uint64_t>();
  }
  cfg.sim.max_ticks = get_int(sim, "sim", "max_ticks", cfg.sim.max_ticks);
  require_positive(cfg.sim.dt, "sim.dt");
  if (cfg.sim.max_ticks < 1) fail("sim.max_ticks", "must be >= 1");

  if (!doc.contains("initial_poses")) fail("initial_poses", "missing");
  if (!doc.at("initial_poses").is_array()) fail("initial_poses", "expected an array");
  for (std::size_t i = 0; i < doc.at("initial_poses").size(); ++i) {
    const json& p = doc.at("initial_poses").at(i);
    std::string path = "initial_poses[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 3) fail(path, "expected [x, y, theta]");
    for (const auto& v : p)
      if (!v.is_number()) fail(path, "expected numeric components");
    cfg.initial_poses.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  }

  if (!doc.contains("targets")) fail("targets", "missing");
  if (!doc.at("targets").is_array()) fail("targets", "expected an array");
  cfg.targets.cell_size = cfg.protocol.cell_size;
  for (std::size_t i = 0; i < doc.at("targets").size(); ++i) {
    const json& c = doc.at("targets").at(i);
    std::string path = "targets[" + std::to_string(i) + "]";
    if (!c.is_array() || c.size() != 2) fail(path, "expected [x, y]");
    for (const auto& v : c)
      if (!v.is_number()) fail(path, "expected numeric components");
    cfg.targets.cells.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  if (cfg.targets.empty()) fail("targets", "must be non-empty");

  // grid snapping relative to the shape origin (min corner), tolerance 1e-9 m
  double x0 = cfg.targets.cells[0].x(), y0 = cfg.targets.cells[0].y();
  for (const auto& c : cfg.targets.cells) {
    x0 = std::min(x0, c.x());
    y0 = std::min(y0, c.y());
  }
  const double cs = cfg.targets.cell_size;
  for (std::size_t i = 0; i < cfg.targets.cells.size(); ++i) {
    const auto& c = cfg.targets.cells[i];
    double rx = std::fabs((c.x() - x0) / cs - std::round((c.x() - x0) / cs)) * cs;
    double ry = std::fabs((c.y() - y0) / cs - std::round((c.y() - y0) / cs)) * cs;
    if (rx > 1e-9 || ry > 1e-9)
      fail("targets[" + std::to_string(i) + "]", "not snapped to the cell grid");
    for (std::size_t j = i + 1; j < cfg.targets.cells.size(); ++j) {
      if ((cfg.targets.cells[j] - c).norm() < 1e-12)
        fail("targets[" + std::to_string(j) + "]", "duplicate cell");
    }
  }

  if (cfg.initial_poses.size() != cfg.targets.size())
    fail("initial_poses", "robot count (" + std::to_string(cfg.initial_poses.size()) +
                              ") must equal target cell count (" +
                              std::to_string(cfg.targets.size()) + ")");

  return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json doc;
  doc["robot"] = {{"v_max", cfg.robot.v_max},
                  {"omega_max", cfg.robot.omega_max},
                  {"wheel_radius", cfg.robot.wheel_radius},
                  {"wheelbase", cfg.robot.wheelbase},
                  {"body_radius", cfg.robot.body_radius},
                  {"k_v", cfg.robot.k_v},
                  {"k_omega", cfg.robot.k_omega},
                  {"angular_tol", cfg.robot.angular_tol}};
  doc["sensing"] = {{"sigma_gps", cfg.sensing.sigma_gps},
                    {"alpha", cfg.sensing.alpha},
                    {"k1", cfg.sensing.k1},
                    {"k2", cfg.sensing.k2},
                    {"gps_period_ticks", cfg.sensing.gps_period_ticks}};
  doc["comms"] = {{"r_comm_local", cfg.comms.r_comm_local},
                  {"loss_probability", cfg.comms.loss_probability}};
  doc["protocol"] = {{"k_row_size", cfg.protocol.k_row_size},
                     {"epsilon_pos", cfg.protocol.epsilon_pos},
                     {"start_offset", cfg.protocol.start_offset},
                     {"delay_base", cfg.protocol.delay_base},
                     {"delay_step", cfg.protocol.delay_step},
                     {"reverify_period", cfg.protocol.reverify_period},
                     {"cell_size", cfg.protocol.cell_size},
                     {"settle_fixes", cfg.protocol.settle_fixes},
                     {"settle_tolerance", cfg.protocol.settle_tolerance},
                     {"line_settle_fixes", cfg.protocol.line_settle_fixes},
                     {"line_settle_tolerance", cfg.protocol.line_settle_tolerance},
                     {"vo_tau", cfg.protocol.vo_tau},
                     {"vo_margin", cfg.protocol.vo_margin}};
  doc["sim"] = {{"dt", cfg.sim.dt}, {"seed", cfg.sim.seed}, {"max_ticks", cfg.sim.max_ticks}};
  doc["initial_poses"] = json::array();
  for (const auto& p : cfg.initial_poses) doc["initial_poses"].push_back({p.x, p.y, p.theta});
  doc["targets"] = json::array();
  for (const auto& c : cfg.targets.cells) doc["targets"].push_back({c.x(), c.y()});
  return doc.dump(2);
}

}  // namespace swarmform
