#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ntnsim/orbit.hpp"
#include "ntnsim/scenario.hpp"

namespace ntnsim {

/// Serving-satellite geometry at one timeline step. satellite_id is -1 during outage.
struct AccessSample {
  double time_s = 0.0;
  int satellite_id = -1;
  orbit::TopocentricView<double> view;
  double doppler_khz = 0.0;
  /// Aircraft state at this time (used downstream for pointing and rain path).
  RouteState aircraft;

  bool served() const { return satellite_id >= 0; }
};

namespace orbit {

/// Stateless serving rule: keep `current` while it is at or above the threshold,
/// otherwise take the highest satellite at or above it. nullopt when none qualifies.
std::optional<int> select_serving(std::span<const TopocentricView<double>> views, double threshold_deg,
                                  std::optional<int> current = std::nullopt);

/// select_serving with a re-acquisition margin: after an outage a satellite must
/// climb to threshold + hysteresis before it is picked up again.
class ServingSelector {
 public:
  ServingSelector(double threshold_deg, double hysteresis_deg);

  std::optional<int> update(std::span<const TopocentricView<double>> views);
  std::optional<int> current() const { return current_; }
  int handovers() const { return handovers_; }

 private:
  double threshold_deg_;
  double hysteresis_deg_;
  std::optional<int> current_;
  bool in_outage_ = false;
  int handovers_ = 0;
};

}  // namespace orbit

struct AccessTimeline {
  std::vector<AccessSample> samples;
  int handovers = 0;

  /// Percentage of samples with a serving satellite; 0 for an empty timeline.
  double access_percentage() const;
};

/// Samples at t = 0, step, 2 step, ... while t < duration. Doppler uses the PHY carrier.
AccessTimeline build_access_timeline(const ScenarioSpec& scenario, double step_s);

/// Columns: time_s, sat_id, elevation_deg, azimuth_deg, slant_range_km, range_rate_kms, doppler_khz.
void write_access_csv(std::ostream& out, std::span<const AccessSample> samples);

}  // namespace ntnsim
