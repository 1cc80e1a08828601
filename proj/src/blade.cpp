#include "ntnsim/blade.hpp"

#include <algorithm>
#include <cmath>

#include "ntnsim/common.hpp"

namespace ntnsim::blade {

void validate(const RotorSpec& rotor) {
  if (rotor.n_blades < 2) throw ValidationError("rotor.n_blades", "must be >= 2");
  if (!(rotor.blade_width_m > 0.0)) throw ValidationError("rotor.blade_width_m", "must be > 0");
  if (!(rotor.rotor_rpm > 0.0)) throw ValidationError("rotor.rotor_rpm", "must be > 0");
  if (!(rotor.rotor_height_m > 0.0)) throw ValidationError("rotor.rotor_height_m", "must be > 0");
  if (!(rotor.shaft_offset_m >= 0.0)) throw ValidationError("rotor.shaft_offset_m", "must be >= 0");
  if (!(rotor.tip_radius_m > 0.0)) throw ValidationError("rotor.tip_radius_m", "must be > 0");
  if (!std::isfinite(rotor.initial_phase_ms)) throw ValidationError("rotor.initial_phase_ms", "must be finite");
}

std::optional<double> interference_point(const RotorSpec& rotor, double elevation_deg,
                                         double relative_azimuth_deg) {
  if (!(elevation_deg > 0.0) || elevation_deg > 90.0)
    throw DomainError("interference_point: elevation must be in (0, 90]");

  // Horizontal run of the beam from the antenna to the rotor plane.
  const double run = elevation_deg == 90.0 ? 0.0 : rotor.rotor_height_m / std::tan(deg2rad(elevation_deg));

  double d_rotor = 0.0;
  if (rotor.azimuth_dependent) {
    const double delta = deg2rad(relative_azimuth_deg - rotor.shaft_azimuth_deg);
    const double s = rotor.shaft_offset_m;
    d_rotor = std::sqrt(std::max(0.0, s * s + run * run - 2.0 * s * run * std::cos(delta)));
  } else {
    d_rotor = std::abs(rotor.shaft_offset_m - run);
  }

  if (d_rotor > rotor.tip_radius_m) return std::nullopt;
  return d_rotor;
}

double blade_angle(double blade_width_m, double d_rotor_m) {
  if (!(blade_width_m > 0.0) || !(d_rotor_m > 0.0))
    throw DomainError("blade_angle: width and d_rotor must be > 0");
  return std::min(360.0, 360.0 * blade_width_m / (2.0 * constants::pi * d_rotor_m));
}

BladeGeometry geometry(const RotorSpec& rotor, double d_rotor_m) {
  return BladeGeometry{d_rotor_m, blade_angle(rotor.blade_width_m, d_rotor_m)};
}

bool occludes_continuously(int n_blades, double rpm, double phi_deg) {
  const double rate = rate_deg_per_ms(rpm);
  return n_blades * (phi_deg / rate) > 360.0 / rate;
}

BladeSchedule schedule(int n_blades, double rpm, double phi_deg) {
  if (n_blades < 1) throw DomainError("schedule: n_blades must be >= 1");
  if (!(rpm > 0.0)) throw DomainError("schedule: rpm must be > 0");
  if (!(phi_deg >= 0.0) || phi_deg > 360.0) throw DomainError("schedule: phi must be in [0, 360]");

  BladeSchedule s;
  s.n_blades = n_blades;
  s.rate_deg_per_ms = rate_deg_per_ms(rpm);
  s.t_int_ms = phi_deg / s.rate_deg_per_ms;
  s.rotation_time_ms = 360.0 / s.rate_deg_per_ms;
  if (n_blades * s.t_int_ms > s.rotation_time_ms)
    throw SimulationError("schedule: blades overlap, the link is blocked for the whole revolution");
  s.total_link_time_ms = s.rotation_time_ms - n_blades * s.t_int_ms;
  s.t_lnk_ms = s.total_link_time_ms / n_blades;
  return s;
}

BladeSchedule schedule(const RotorSpec& rotor, const BladeGeometry& geometry) {
  return schedule(rotor.n_blades, rotor.rotor_rpm, geometry.phi_deg);
}

BladeSchedule clear_schedule(const RotorSpec& rotor) { return schedule(rotor.n_blades, rotor.rotor_rpm, 0.0); }

std::vector<Interval> erasure_schedule(const BladeSchedule& sched, double span_ms, double phase_ms) {
  if (!(span_ms > 0.0)) throw DomainError("erasure_schedule: span must be > 0");
  std::vector<Interval> out;
  const double period = sched.period_ms();
  if (!(sched.t_int_ms > 0.0) || !(period > 0.0)) return out;

  double phase = std::fmod(phase_ms, period);
  if (phase < 0.0) phase += period;

  // A blade that started before t = 0 may still be in the beam.
  const double first = phase > 0.0 ? phase - period : phase;
  for (long k = 0;; ++k) {
    const double start = first + static_cast<double>(k) * period;
    if (start >= span_ms) break;
    const double stop = std::min(start + sched.t_int_ms, span_ms);
    const double clipped = std::max(start, 0.0);
    if (stop > clipped) out.push_back({clipped, stop});
  }
  return out;
}

SpeedRatios speed_comparison(const RotorSpec& rotor_a, const RotorSpec& rotor_b, const BladeGeometry& geometry) {
  const BladeSchedule a = schedule(rotor_a, geometry);
  const BladeSchedule b = schedule(rotor_b, geometry);
  SpeedRatios r;
  r.t_int_ratio = b.t_int_ms > 0.0 ? a.t_int_ms / b.t_int_ms : 1.0;
  r.rotation_time_ratio = a.rotation_time_ms / b.rotation_time_ms;
  r.t_lnk_ratio = a.t_lnk_ms / b.t_lnk_ms;
  return r;
}

}  // namespace ntnsim::blade
