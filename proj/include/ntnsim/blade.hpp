#pragma once

#include <optional>
#include <vector>

namespace ntnsim::blade {

/// Main-rotor parameters as seen from an antenna mounted below the rotor disc.
struct RotorSpec {
  int n_blades = 2;
  /// Blade chord at the interference radius, m.
  double blade_width_m = 0.0;
  double rotor_rpm = 0.0;
  /// Horizontal distance antenna -> shaft, m.
  double shaft_offset_m = 0.0;
  /// Vertical distance antenna -> rotor plane, m.
  double rotor_height_m = 0.0;
  double tip_radius_m = 0.0;
  /// Body-frame azimuth of the shaft as seen from the antenna, degrees from the nose.
  double shaft_azimuth_deg = 0.0;
  /// When false the beam is assumed to lie in the vertical plane through the shaft.
  bool azimuth_dependent = false;
  /// Offset of the first blade passage relative to t = 0, ms.
  double initial_phase_ms = 0.0;

  bool operator==(const RotorSpec&) const = default;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const RotorSpec& rotor);

struct BladeGeometry {
  double d_rotor_m = 0.0;
  double phi_deg = 0.0;
};

struct BladeSchedule {
  int n_blades = 0;
  double t_int_ms = 0.0;
  double t_lnk_ms = 0.0;
  double rotation_time_ms = 0.0;
  double total_link_time_ms = 0.0;
  double rate_deg_per_ms = 0.0;

  double period_ms() const { return t_int_ms + t_lnk_ms; }
  double duty_cycle() const { return n_blades * t_int_ms / rotation_time_ms; }
};

struct Interval {
  double start_ms = 0.0;
  double stop_ms = 0.0;
  double length() const { return stop_ms - start_ms; }
  bool operator==(const Interval&) const = default;
};

/// Rotational rate in deg/ms for a rotor speed in rev/min.
inline double rate_deg_per_ms(double rpm) { return 0.006 * rpm; }

/// Distance between the interference point and the shaft. Returns nullopt when the
/// beam crosses the rotor plane outside the blade tip circle.
///
/// `relative_azimuth_deg` is the beam azimuth relative to the aircraft nose; it only
/// matters when `rotor.azimuth_dependent` is set. Otherwise the beam is taken to lie in
/// the vertical plane through the shaft (worst case), giving |offset - height/tan(el)|.
std::optional<double> interference_point(const RotorSpec& rotor, double elevation_deg,
                                         double relative_azimuth_deg = 0.0);

/// Angle swept while a blade of the given width crosses a point at radius d_rotor.
/// Capped at 360 degrees.
double blade_angle(double blade_width_m, double d_rotor_m);

BladeGeometry geometry(const RotorSpec& rotor, double d_rotor_m);

/// True when the blades together cover the whole revolution.
bool occludes_continuously(int n_blades, double rpm, double phi_deg);

BladeSchedule schedule(int n_blades, double rpm, double phi_deg);
BladeSchedule schedule(const RotorSpec& rotor, const BladeGeometry& geometry);

/// Schedule for a beam that never meets the blades: t_int = 0.
BladeSchedule clear_schedule(const RotorSpec& rotor);

/// Blocked intervals over [0, span_ms): length t_int, separated by t_lnk, the first
/// blade edge arriving at `phase_ms` (taken modulo the blade period).
std::vector<Interval> erasure_schedule(const BladeSchedule& sched, double span_ms, double phase_ms = 0.0);

struct SpeedRatios {
  /// t_int(a) / t_int(b)
  double t_int_ratio = 1.0;
  /// T_rot(a) / T_rot(b)
  double rotation_time_ratio = 1.0;
  /// t_lnk(a) / t_lnk(b)
  double t_lnk_ratio = 1.0;
};

/// Compares two rotors over the same interference geometry.
SpeedRatios speed_comparison(const RotorSpec& rotor_a, const RotorSpec& rotor_b, const BladeGeometry& geometry);

}  // namespace ntnsim::blade
