// ntnsim: command-line front end for the rotary-wing 5G-NTN link simulator.
//
//   ntnsim run --scenario <id|path> [--step S] [--seed N] [--out DIR] [--mode mc|expected] [--frames N]
//   ntnsim sweep --scenario <id|path> --cnr-min A --cnr-max B --points N --frames N [--seed N] [--out FILE]
//   ntnsim catalog [--export DIR]
//   ntnsim compare <report_a.json> <report_b.json>
//
// Exit status: 0 success, 2 configuration/validation error, 3 simulation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "ntnsim/pipeline.hpp"
#include "ntnsim/report.hpp"
#include "ntnsim/scenario.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ntnsim::ParseError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ntnsim::ParseError(path + ": " + e.what());
  }
}

void print_catalog(std::ostream& out) {
  out << "id            aircraft  constellation  link      band  duration_h  threshold_deg\n";
  for (const auto& s : ntnsim::builtin_catalog()) {
    char line[160];
    std::snprintf(line, sizeof line, "%-13s %-9s %-14s %-9s %-5s %-11.2f %.1f\n", s.id.c_str(),
                  s.aircraft.name.c_str(), s.constellation.name.c_str(),
                  std::string(ntnsim::to_string(s.link_direction)).c_str(),
                  std::string(ntnsim::to_string(s.band)).c_str(), s.duration_h, s.handover_threshold_deg);
    out << line;
  }
}

void export_catalog(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : ntnsim::builtin_catalog()) {
    std::ofstream out(dir / (s.id + ".json"), std::ios::binary);
    if (!out) throw ntnsim::SimulationError("cannot write into '" + dir.string() + "'");
    out << ntnsim::serialize({s}).dump(2) << '\n';
  }
}

ntnsim::phy::SimMode parse_mode(const std::string& mode) {
  return mode == "expected" ? ntnsim::phy::SimMode::Expected : ntnsim::phy::SimMode::MonteCarlo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotary-wing aircraft 5G-NTN satellite link simulator"};
  app.require_subcommand(1);

  std::string scenario_ref;
  double step_s = 1.0;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string mode = "mc";
  int frames = 0;

  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline for one scenario");
  run_cmd->add_option("--scenario", scenario_ref, "Built-in id or scenario file")->required();
  run_cmd->add_option("--step", step_s, "Orbit time step, s")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Root seed");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--mode", mode, "Slot error model")->check(CLI::IsMember({"mc", "expected"}));
  run_cmd->add_option("--frames", frames, "Override the number of simulated frames")->check(CLI::PositiveNumber);

  double cnr_min = 0.0, cnr_max = 0.0;
  int points = 0;
  int sweep_frames = 100;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "BER and data rate over a CNR grid");
  sweep_cmd->add_option("--scenario", scenario_ref, "Built-in id or scenario file")->required();
  sweep_cmd->add_option("--cnr-min", cnr_min, "Lowest CNR, dB")->required();
  sweep_cmd->add_option("--cnr-max", cnr_max, "Highest CNR, dB")->required();
  sweep_cmd->add_option("--points", points, "Grid points")->required();
  sweep_cmd->add_option("--frames", sweep_frames, "Frames per grid point")->required();
  sweep_cmd->add_option("--seed", seed, "Root seed");
  sweep_cmd->add_option("--mode", mode, "Slot error model")->check(CLI::IsMember({"mc", "expected"}));
  sweep_cmd->add_option("--out", sweep_out, "CSV file (default: stdout)");

  std::string export_dir;
  auto* catalog_cmd = app.add_subcommand("catalog", "List the built-in scenarios");
  catalog_cmd->add_option("--export", export_dir, "Write one scenario file per built-in into this directory");

  std::string report_a, report_b;
  auto* compare_cmd = app.add_subcommand("compare", "Per-field differences between two reports");
  compare_cmd->add_option("report_a", report_a, "First report.json")->required();
  compare_cmd->add_option("report_b", report_b, "Second report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*run_cmd) {
      const auto scenario = ntnsim::resolve_scenario(scenario_ref);
      ntnsim::RunOptions options;
      options.step_s = step_s;
      options.seed = seed;
      options.mode = parse_mode(mode);
      if (frames > 0) options.n_frames = frames;
      const auto result = ntnsim::run(scenario, options);
      const auto dir = ntnsim::write_artifacts(result, out_dir);
      std::cout << ntnsim::to_json(result.report).dump(2) << '\n';
      std::cerr << "wrote " << dir.string() << '\n';
    } else if (*sweep_cmd) {
      const auto scenario = ntnsim::resolve_scenario(scenario_ref);
      ntnsim::SweepOptions options;
      options.cnr_grid_db = ntnsim::linear_grid(cnr_min, cnr_max, points);
      options.n_frames = sweep_frames;
      options.seed = seed;
      options.mode = parse_mode(mode);
      const auto curve = ntnsim::sweep(scenario, options);
      if (sweep_out.empty()) {
        ntnsim::write_sweep_csv(std::cout, curve);
      } else {
        std::ofstream out(sweep_out, std::ios::binary);
        if (!out) throw ntnsim::SimulationError("cannot write '" + sweep_out + "'");
        ntnsim::write_sweep_csv(out, curve);
      }
    } else if (*catalog_cmd) {
      if (!export_dir.empty()) export_catalog(export_dir);
      print_catalog(std::cout);
    } else if (*compare_cmd) {
      std::cout << ntnsim::compare(read_json(report_a), read_json(report_b)).dump(2) << '\n';
    }
  } catch (const ntnsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error";
    if (!scenario_ref.empty()) std::cerr << " [" << scenario_ref << "]";
    std::cerr << ": " << e.what() << '\n';
    return exit_runtime;
  }
  return 0;
}
