#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "ntnsim/common.hpp"

namespace ntnsim::orbit {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// Circular-orbit element set. Angles in degrees, semi-major axis in km.
struct KeplerElements {
  double semi_major_axis_km = 0.0;
  double eccentricity = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  /// Argument of latitude at epoch (true anomaly + perigee argument).
  double arg_latitude_deg = 0.0;
  int plane = 0;
  int index_in_plane = 0;

  bool operator==(const KeplerElements&) const = default;
};

template <typename Scalar>
struct OrbitalState {
  Scalar time_s{};
  Vector3<Scalar> position_km = Vector3<Scalar>::Zero();
  Vector3<Scalar> velocity_km_s = Vector3<Scalar>::Zero();
};

template <typename Scalar>
struct EarthFixedState {
  Vector3<Scalar> position_km = Vector3<Scalar>::Zero();
  Vector3<Scalar> velocity_km_s = Vector3<Scalar>::Zero();
};

/// Spherical-Earth geodetic position of an observer.
struct GeodeticPosition {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
};

template <typename Scalar>
struct TopocentricView {
  Scalar elevation_deg{};
  Scalar azimuth_deg{};
  Scalar slant_range_km{};
  Scalar range_rate_km_s{};
};

template <typename Scalar>
Scalar mean_motion(Scalar semi_major_axis_km) {
  using std::sqrt;
  return sqrt(Scalar(constants::earth_mu_km3_s2) /
              (semi_major_axis_km * semi_major_axis_km * semi_major_axis_km));
}

template <typename Scalar>
Scalar orbital_period(Scalar semi_major_axis_km) {
  return Scalar(2.0 * constants::pi) / mean_motion(semi_major_axis_km);
}

template <typename Scalar>
Scalar circular_speed(Scalar radius_km) {
  using std::sqrt;
  return sqrt(Scalar(constants::earth_mu_km3_s2) / radius_km);
}

/// Two-body circular propagation. Throws DomainError for eccentric element sets.
template <typename Scalar>
OrbitalState<Scalar> propagate(const KeplerElements& el, Scalar time_s) {
  using std::cos;
  using std::sin;
  if (el.eccentricity != 0.0) throw DomainError("propagate: only circular orbits are supported");
  if (!(el.semi_major_axis_km > constants::earth_radius_km))
    throw DomainError("propagate: semi-major axis must exceed the Earth radius");

  const Scalar a = Scalar(el.semi_major_axis_km);
  const Scalar n = mean_motion(a);
  const Scalar raan = Scalar(deg2rad(el.raan_deg));
  const Scalar inc = Scalar(deg2rad(el.inclination_deg));
  const Scalar u = Scalar(deg2rad(el.arg_latitude_deg)) + n * time_s;

  // P points at the ascending node, Q is 90 deg ahead in the orbit plane.
  const Vector3<Scalar> p(cos(raan), sin(raan), Scalar(0));
  const Vector3<Scalar> q(-cos(inc) * sin(raan), cos(inc) * cos(raan), sin(inc));

  OrbitalState<Scalar> state;
  state.time_s = time_s;
  state.position_km = a * (cos(u) * p + sin(u) * q);
  state.velocity_km_s = a * n * (-sin(u) * p + cos(u) * q);
  return state;
}

/// Rotation taking inertial coordinates into Earth-fixed ones at sidereal angle theta.
template <typename Scalar>
Matrix3<Scalar> earth_rotation(Scalar theta_rad) {
  return Eigen::AngleAxis<Scalar>(-theta_rad, Vector3<Scalar>::UnitZ()).toRotationMatrix();
}

template <typename Scalar>
EarthFixedState<Scalar> eci_to_ecef(const OrbitalState<Scalar>& state, Scalar theta0_rad = Scalar(0)) {
  const Scalar omega = Scalar(constants::earth_rotation_rad_s);
  const Matrix3<Scalar> rot = earth_rotation(omega * state.time_s + theta0_rad);
  const Vector3<Scalar> spin(Scalar(0), Scalar(0), omega);

  EarthFixedState<Scalar> out;
  out.position_km = rot * state.position_km;
  out.velocity_km_s = rot * state.velocity_km_s - spin.cross(out.position_km);
  return out;
}

template <typename Scalar>
Vector3<Scalar> geodetic_to_ecef(const GeodeticPosition& pos) {
  using std::cos;
  using std::sin;
  const Scalar r = Scalar(constants::earth_radius_km + pos.altitude_m * 1e-3);
  const Scalar lat = Scalar(deg2rad(pos.latitude_deg));
  const Scalar lon = Scalar(deg2rad(pos.longitude_deg));
  return Vector3<Scalar>(r * cos(lat) * cos(lon), r * cos(lat) * sin(lon), r * sin(lat));
}

/// Rows are the local east, north and up unit vectors in Earth-fixed coordinates.
template <typename Scalar>
Matrix3<Scalar> enu_basis(const GeodeticPosition& pos) {
  using std::cos;
  using std::sin;
  const Scalar lat = Scalar(deg2rad(pos.latitude_deg));
  const Scalar lon = Scalar(deg2rad(pos.longitude_deg));
  Matrix3<Scalar> m;
  m << -sin(lon), cos(lon), Scalar(0),
       -sin(lat) * cos(lon), -sin(lat) * sin(lon), cos(lat),
       cos(lat) * cos(lon), cos(lat) * sin(lon), sin(lat);
  return m;
}

/// Look angles from an observer to a satellite. `observer_velocity_km_s` is Earth-fixed.
template <typename Scalar>
TopocentricView<Scalar> look_angles(const GeodeticPosition& observer, const EarthFixedState<Scalar>& sat,
                                    const Vector3<Scalar>& observer_velocity_km_s = Vector3<Scalar>::Zero()) {
  using std::asin;
  using std::atan2;
  if (observer.altitude_m < 0.0) throw DomainError("look_angles: observer altitude must be >= 0");

  const Vector3<Scalar> rel = sat.position_km - geodetic_to_ecef<Scalar>(observer);
  const Vector3<Scalar> rel_vel = sat.velocity_km_s - observer_velocity_km_s;
  const Vector3<Scalar> enu = enu_basis<Scalar>(observer) * rel;
  const Scalar range = rel.norm();

  TopocentricView<Scalar> view;
  view.slant_range_km = range;
  view.elevation_deg = Scalar(rad2deg(1.0)) * asin(enu.z() / range);
  Scalar az = Scalar(rad2deg(1.0)) * atan2(enu.x(), enu.y());
  if (az < Scalar(0)) az += Scalar(360);
  view.azimuth_deg = az;
  view.range_rate_km_s = rel.dot(rel_vel) / range;
  return view;
}

/// Doppler shift in kHz; positive while the range is closing.
template <typename Scalar>
Scalar doppler_shift_khz(Scalar range_rate_km_s, Scalar carrier_ghz) {
  using std::abs;
  if (!(abs(range_rate_km_s) < Scalar(15))) throw DomainError("doppler_shift: |range_rate| must be < 15 km/s");
  return -(range_rate_km_s / Scalar(constants::speed_of_light_km_s)) * carrier_ghz * Scalar(1e6);
}

}  // namespace ntnsim::orbit
