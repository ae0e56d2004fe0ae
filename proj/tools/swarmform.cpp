#include "swarmform/render.hpp"
#include "swarmform/sim_engine.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace swarmform;

namespace {

int log_level() {
  const char* env = std::getenv("SWARMFORM_LOG");
  if (!env) return 0;
  std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data, bool force) {
  if (fs::exists(path) && !force)
    throw std::runtime_error(path.string() + " exists; pass --force to overwrite");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << data;
}

ScenarioConfig load_with_overrides(const std::string& scenario_path,
                                   std::optional<long> seed, std::optional<double> loss) {
  ScenarioConfig cfg = load_scenario(read_file(scenario_path));
  if (seed) cfg.sim.seed = static_cast<std::uint64_t>(*seed);
  if (loss) cfg.comms.loss_probability = *loss;
  return cfg;
}

EstimatorKind parse_estimator(const std::string& s) {
  if (s == "ekf") return EstimatorKind::Ekf;
  if (s == "complementary") return EstimatorKind::Complementary;
  throw std::runtime_error("unknown estimator: " + s);
}

int cmd_run(const std::string& scenario, std::optional<long> seed, std::optional<double> loss,
            const std::string& estimator, const std::string& out_dir, bool force) {
  ScenarioConfig cfg = load_with_overrides(scenario, seed, loss);
  EstimatorKind kind = parse_estimator(estimator);
  fs::create_directories(out_dir);
  SimEngine engine(cfg, kind);
  RunReport report = engine.run();
  write_file(fs::path(out_dir) / "trace.jsonl", trace_to_jsonl(report), force);
  write_file(fs::path(out_dir) / "metrics.csv",
             metrics_csv_header() + "\n" + metrics_csv_row(report) + "\n", force);
  if (log_level() >= 1)
    std::cerr << "run: ticks=" << report.ticks_executed << " collisions="
              << report.collision_events << " sent=" << report.messages_sent
              << " lost=" << report.messages_lost << "\n";
  if (report.timeout) {
    std::cerr << "run timed out after " << report.ticks_executed << " ticks\n";
    return 2;
  }
  return 0;
}

int cmd_validate(const std::string& scenario) {
  ScenarioConfig cfg = load_scenario(read_file(scenario));
  std::cout << scenario << ": ok (" << cfg.initial_poses.size() << " robots, "
            << cfg.targets.cells.size() << " targets)\n";
  return 0;
}

int cmd_sweep(const std::string& scenario, const std::vector<double>& losses,
              const std::vector<long>& seeds, const std::string& estimator,
              const std::string& out_dir, bool force) {
  if (losses.empty() || seeds.empty()) throw std::runtime_error("sweep grid is empty");
  EstimatorKind kind = parse_estimator(estimator);
  fs::create_directories(out_dir);
  std::string csv = "loss,seed," + metrics_csv_header() + "\n";
  int worst = 0;
  for (double loss : losses) {
    for (long seed : seeds) {
      ScenarioConfig cfg = load_with_overrides(scenario, seed, loss);
      SimEngine engine(cfg, kind);
      RunReport report = engine.run();
      char prefix[64];
      std::snprintf(prefix, sizeof(prefix), "%g,%ld,", loss, seed);
      csv += prefix + metrics_csv_row(report) + "\n";
      if (report.timeout) worst = 2;
      if (log_level() >= 1)
        std::cerr << "sweep loss=" << loss << " seed=" << seed
                  << (report.timeout ? " TIMEOUT" : " ok") << "\n";
    }
  }
  write_file(fs::path(out_dir) / "sweep.csv", csv, force);
  return worst;
}

int cmd_render(const std::string& trace_path, long stride, const std::string& out_dir,
               bool force) {
  ParsedTrace trace = parse_trace(read_file(trace_path));
  auto frames = render_frames(trace, stride);
  fs::create_directories(out_dir);
  for (const auto& f : frames) {
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%06ld.svg", f.tick);
    write_file(fs::path(out_dir) / name, f.svg, force);
  }
  if (log_level() >= 1) std::cerr << "render: " << frames.size() << " frames\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmform: multi-robot row-formation simulator"};
  app.require_subcommand(1);

  std::string scenario, trace_path, out_dir = "out", estimator = "complementary";
  std::optional<long> seed;
  std::optional<double> loss;
  long stride = 200;
  bool force = false;
  std::vector<double> losses;
  std::vector<long> seeds;

  auto* run = app.add_subcommand("run", "run a scenario, write trace + metrics");
  run->add_option("--scenario", scenario, "scenario JSON path")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--loss", loss, "override message loss probability");
  run->add_option("--estimator", estimator, "complementary|ekf");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--force", force, "overwrite existing outputs");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario, "scenario JSON path")->required();

  auto* sweep = app.add_subcommand("sweep", "run a loss x seed grid, combined CSV");
  sweep->add_option("--scenario", scenario, "scenario JSON path")->required();
  sweep->add_option("--losses", losses, "loss probabilities")->required();
  sweep->add_option("--seeds", seeds, "seeds")->required();
  sweep->add_option("--estimator", estimator, "complementary|ekf");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_flag("--force", force, "overwrite existing outputs");

  auto* render = app.add_subcommand("render", "render SVG frames from a trace");
  render->add_option("--trace", trace_path, "trace JSONL path")->required();
  render->add_option("--stride", stride, "tick stride between frames");
  render->add_option("--out", out_dir, "output directory");
  render->add_flag("--force", force, "overwrite existing outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, seed, loss, estimator, out_dir, force);
    if (*validate) return cmd_validate(scenario);
    if (*sweep) return cmd_sweep(scenario, losses, seeds, estimator, out_dir, force);
    if (*render) return cmd_render(trace_path, stride, out_dir, force);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
