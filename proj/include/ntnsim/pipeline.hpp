#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ntnsim/access.hpp"
#include "ntnsim/blade.hpp"
#include "ntnsim/link_budget.hpp"
#include "ntnsim/ntn_phy.hpp"
#include "ntnsim/report.hpp"
#include "ntnsim/scenario.hpp"

namespace ntnsim {

struct RunOptions {
  double step_s = 1.0;
  std::uint64_t seed = 1;
  phy::SimMode mode = phy::SimMode::MonteCarlo;
  /// Overrides the scenario's frame count.
  std::optional<int> n_frames;
};

/// Blade state in effect for one simulated frame.
struct BladeSample {
  double time_s = 0.0;
  double elevation_deg = 0.0;
  /// Absent when the beam passes outside the tip circle.
  std::optional<double> d_rotor_m;
  double phi_deg = 0.0;
  blade::BladeSchedule schedule;
  /// Blades cover the beam for the whole revolution.
  bool continuous = false;
};

struct RunResult {
  ScenarioSpec scenario;
  RunOptions options;
  AccessTimeline access;
  std::vector<link::LinkSample> link;
  std::vector<BladeSample> blades;
  std::vector<phy::SlotResult> slots;
  RunReport report;
};

/// Channel, MCS and erasure rule of the scenario's PHY section.
phy::FrameSimConfig frame_config(const ScenarioSpec& scenario, phy::SimMode mode);

/// Blade state for a beam at the given look angle relative to the aircraft nose.
/// nullopt for aircraft without a rotor.
std::optional<BladeSample> blade_state(const AircraftSpec& aircraft, double elevation_deg,
                                       double relative_azimuth_deg = 0.0);

/// Blocked intervals over [0, span_ms) for a frame starting at absolute time `start_ms`.
std::vector<blade::Interval> frame_erasures(const BladeSample& blades, double initial_phase_ms, double start_ms,
                                            double span_ms);

/// Orbit -> link budget -> blades -> frames. The scenario's frames are spread evenly over
/// the flight (frame k starts at (k + 1/2) duration / n_frames) so the report covers the
/// whole flight; rates are per simulated air time.
RunResult run(const ScenarioSpec& scenario, const RunOptions& options = {});

/// Writes <out_dir>/<scenario id>/{access.csv, link.csv, slots.csv, blades.csv, report.json}
/// and returns the scenario directory.
std::filesystem::path write_artifacts(const RunResult& result, const std::filesystem::path& out_dir);

void write_slots_csv(std::ostream& out, std::span<const phy::SlotResult> slots);
/// Columns: time_s, elevation_deg, d_rotor_m, phi_deg, t_int_ms, t_lnk_ms, duty_cycle.
void write_blades_csv(std::ostream& out, std::span<const BladeSample> blades);

struct SweepOptions {
  std::vector<double> cnr_grid_db;
  int n_frames = 100;
  std::uint64_t seed = 1;
  phy::SimMode mode = phy::SimMode::MonteCarlo;
  /// Access step used to find the mean served elevation for the blade schedule.
  double step_s = 10.0;
};

struct SweepPoint {
  double cnr_db = 0.0;
  double ber = 0.0;
  double data_rate_mbps = 0.0;
  double slot_loss_fraction = 0.0;
};

/// `points` values evenly spaced from min to max inclusive.
std::vector<double> linear_grid(double min_db, double max_db, int points);

/// BER and data rate at fixed PHY-channel CNRs, with the blade schedule taken at the
/// mean served elevation of the flight.
std::vector<SweepPoint> sweep(const ScenarioSpec& scenario, const SweepOptions& options);

/// Columns: cnr_db, ber, data_rate_mbps, slot_loss_fraction.
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

}  // namespace ntnsim
