#include "ntnsim/access.hpp"

#include <cmath>

#include "ntnsim/report.hpp"

namespace ntnsim {

namespace orbit {

namespace {

std::optional<int> highest_at_or_above(std::span<const TopocentricView<double>> views, double mask_deg) {
  std::optional<int> best;
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (views[i].elevation_deg < mask_deg) continue;
    if (!best || views[i].elevation_deg > views[*best].elevation_deg) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace

std::optional<int> select_serving(std::span<const TopocentricView<double>> views, double threshold_deg,
                                  std::optional<int> current) {
  if (!(threshold_deg >= 0.0 && threshold_deg < 90.0))
    throw DomainError("select_serving: threshold must be in [0, 90)");
  if (current && *current >= 0 && static_cast<std::size_t>(*current) < views.size() &&
      views[*current].elevation_deg >= threshold_deg)
    return current;
  return highest_at_or_above(views, threshold_deg);
}

ServingSelector::ServingSelector(double threshold_deg, double hysteresis_deg)
    : threshold_deg_(threshold_deg), hysteresis_deg_(hysteresis_deg) {
  if (!(threshold_deg >= 0.0 && threshold_deg < 90.0))
    throw DomainError("ServingSelector: threshold must be in [0, 90)");
  if (!(hysteresis_deg >= 0.0)) throw DomainError("ServingSelector: hysteresis must be >= 0");
}

std::optional<int> ServingSelector::update(std::span<const TopocentricView<double>> views) {
  std::optional<int> next;
  if (in_outage_) {
    next = highest_at_or_above(views, threshold_deg_ + hysteresis_deg_);
  } else {
    next = select_serving(views, threshold_deg_, current_);
  }
  if (current_ && next && *next != *current_) ++handovers_;
  in_outage_ = !next.has_value() && (current_.has_value() || in_outage_);
  current_ = next;
  return next;
}

}  // namespace orbit

double AccessTimeline::access_percentage() const {
  if (samples.empty()) return 0.0;
  std::size_t served = 0;
  for (const auto& s : samples)
    if (s.served()) ++served;
  return 100.0 * static_cast<double>(served) / static_cast<double>(samples.size());
}

AccessTimeline build_access_timeline(const ScenarioSpec& scenario, double step_s) {
  if (!(step_s > 0.0)) throw DomainError("build_access_timeline: step must be > 0");

  const auto elements = expand_constellation(scenario.constellation);
  const double carrier = scenario.carrier_ghz();
  const double duration = scenario.duration_s();

  orbit::ServingSelector selector(scenario.handover_threshold_deg, scenario.handover_hysteresis_deg);
  std::vector<orbit::TopocentricView<double>> views(elements.size());

  AccessTimeline timeline;
  const auto n_steps = static_cast<std::int64_t>(std::ceil(duration / step_s - 1e-9));
  timeline.samples.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n_steps, 0)));

  for (std::int64_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * step_s;
    const double t_orbit = t + scenario.epoch_offset_s;
    const RouteState aircraft = scenario.flight.at(t);

    for (std::size_t i = 0; i < elements.size(); ++i) {
      const auto inertial = orbit::propagate(elements[i], t_orbit);
      const auto fixed = orbit::eci_to_ecef(inertial);
      views[i] = orbit::look_angles(aircraft.position, fixed, aircraft.velocity_km_s);
    }

    AccessSample sample;
    sample.time_s = t;
    sample.aircraft = aircraft;
    if (const auto serving = selector.update(views)) {
      sample.satellite_id = *serving;
      sample.view = views[*serving];
      sample.doppler_khz = orbit::doppler_shift_khz(sample.view.range_rate_km_s, carrier);
    }
    timeline.samples.push_back(sample);
  }
  timeline.handovers = selector.handovers();
  return timeline;
}

void write_access_csv(std::ostream& out, std::span<const AccessSample> samples) {
  out << "time_s,sat_id,elevation_deg,azimuth_deg,slant_range_km,range_rate_kms,doppler_khz\n";
  for (const auto& s : samples) {
    out << report::fixed(s.time_s, 3) << ',' << s.satellite_id << ',';
    if (s.served()) {
      out << report::fixed(s.view.elevation_deg, 6) << ',' << report::fixed(s.view.azimuth_deg, 6) << ','
          << report::fixed(s.view.slant_range_km, 6) << ',' << report::fixed(s.view.range_rate_km_s, 9) << ','
          << report::fixed(s.doppler_khz, 6);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

}  // namespace ntnsim
