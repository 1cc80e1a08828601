#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ntnsim/access.hpp"
#include "ntnsim/orbit.hpp"
#include "ntnsim/scenario.hpp"

using namespace ntnsim;
using orbit::KeplerElements;
using orbit::TopocentricView;

namespace {

KeplerElements circular(double altitude_km, double inc_deg = 0.0, double raan_deg = 0.0, double u_deg = 0.0) {
  KeplerElements el;
  el.semi_major_axis_km = constants::earth_radius_km + altitude_km;
  el.inclination_deg = inc_deg;
  el.raan_deg = raan_deg;
  el.arg_latitude_deg = u_deg;
  return el;
}

TopocentricView<double> at_elevation(double el) {
  TopocentricView<double> v;
  v.elevation_deg = el;
  v.slant_range_km = 1000.0;
  return v;
}

}  // namespace

TEST_CASE("circular orbit period and speed") {
  // 2*pi*sqrt(a^3/mu) with a = 42164.14 km, evaluated independently.
  CHECK(orbit::orbital_period(42164.14) == doctest::Approx(86163.9997).epsilon(1e-9));
  CHECK(std::abs(orbit::orbital_period(42164.14) - 86164.0) < 10.0);

  // sqrt(mu / 7098.14).
  const auto leo2 = circular(720.0, 53.5);
  const auto s = orbit::propagate(leo2, 1234.5);
  CHECK(s.velocity_km_s.norm() == doctest::Approx(7.493705).epsilon(1e-7));
}

TEST_CASE("propagate places the satellite at its initial argument of latitude at epoch") {
  const auto el = circular(1000.0, 0.0, 0.0, 90.0);
  const auto s = orbit::propagate(el, 0.0);
  CHECK(s.position_km.x() == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(s.position_km.y() == doctest::Approx(el.semi_major_axis_km));
  CHECK(s.position_km.z() == doctest::Approx(0.0).scale(1.0));
  CHECK(s.time_s == 0.0);
}

TEST_CASE("propagate rejects eccentric or sub-surface orbits") {
  auto el = circular(700.0);
  el.eccentricity = 0.01;
  CHECK_THROWS_AS(orbit::propagate(el, 0.0), DomainError);
  el = circular(-10.0);
  CHECK_THROWS_AS(orbit::propagate(el, 0.0), DomainError);
}

TEST_CASE("property: radius and speed are conserved on random circular orbits") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alt(300.0, 40000.0), ang(0.0, 360.0), inc(0.0, 180.0), t(0.0, 2e5);
  for (int i = 0; i < 500; ++i) {
    const auto el = circular(alt(rng), inc(rng), ang(rng), ang(rng));
    const double a = el.semi_major_axis_km;
    const double period = orbit::orbital_period(a);
    for (double time : {0.0, 0.25 * period, period, t(rng)}) {
      const auto s = orbit::propagate(el, time);
      CHECK(std::abs(s.position_km.norm() - a) / a < 1e-12);
      CHECK(std::abs(s.velocity_km_s.norm() - orbit::circular_speed(a)) / orbit::circular_speed(a) < 1e-6);
      CHECK(std::abs(s.position_km.dot(s.velocity_km_s)) < 1e-6 * a);
    }
  }
}

TEST_CASE("eci_to_ecef") {
  SUBCASE("identity at t = 0") {
    const auto s = orbit::propagate(circular(800.0, 45.0, 30.0, 10.0), 0.0);
    const auto f = orbit::eci_to_ecef(s);
    CHECK((f.position_km - s.position_km).norm() < 1e-9);
  }
  SUBCASE("geostationary satellite is nearly fixed") {
    const auto geo = circular(35786.0);
    for (double t : {0.0, 3600.0, 40000.0}) {
      const auto f = orbit::eci_to_ecef(orbit::propagate(geo, t));
      CHECK(f.velocity_km_s.norm() * 1e3 < 5.0);
    }
  }
  SUBCASE("quarter turn of the Earth") {
    // An inertial point on +x seen a quarter sidereal rotation later sits on -y.
    orbit::OrbitalState<double> s;
    s.time_s = 0.5 * constants::pi / constants::earth_rotation_rad_s;
    s.position_km = {7000.0, 0.0, 0.0};
    const auto f = orbit::eci_to_ecef(s);
    CHECK(f.position_km.x() == doctest::Approx(0.0).scale(1.0));
    CHECK(f.position_km.y() == doctest::Approx(-7000.0));
    // The fixed frame sees the point moving at omega * r.
    CHECK(f.velocity_km_s.norm() == doctest::Approx(7000.0 * constants::earth_rotation_rad_s));
  }
}

TEST_CASE("look angles") {
  const orbit::GeodeticPosition site{0.0, 0.0, 0.0};
  SUBCASE("zenith pass") {
    orbit::EarthFixedState<double> sat;
    sat.position_km = {constants::earth_radius_km + 720.0, 0.0, 0.0};
    sat.velocity_km_s = {0.0, 7.0, 1.0};
    const auto v = orbit::look_angles(site, sat);
    CHECK(v.elevation_deg == doctest::Approx(90.0));
    CHECK(v.slant_range_km == doctest::Approx(720.0));
    CHECK(v.range_rate_km_s == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("azimuth convention") {
    orbit::EarthFixedState<double> north, east;
    north.position_km = {constants::earth_radius_km, 0.0, 1000.0};
    east.position_km = {constants::earth_radius_km, 1000.0, 0.0};
    CHECK(orbit::look_angles(site, north).azimuth_deg == doctest::Approx(0.0).scale(1.0));
    CHECK(orbit::look_angles(site, east).azimuth_deg == doctest::Approx(90.0));
    CHECK(orbit::look_angles(site, north).elevation_deg == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("negative altitude is rejected") {
    orbit::EarthFixedState<double> sat;
    sat.position_km = {8000.0, 0.0, 0.0};
    CHECK_THROWS_AS(orbit::look_angles(orbit::GeodeticPosition{0.0, 0.0, -1.0}, sat), DomainError);
  }
}

TEST_CASE("property: range rate matches the differentiated slant range") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 360.0), lat(-60.0, 60.0), t(0.0, 5000.0);
  int checked = 0;
  while (checked < 200) {
    const auto el = circular(720.0, 53.5, ang(rng), ang(rng));
    const orbit::GeodeticPosition site{lat(rng), ang(rng) - 180.0, 100.0};
    const double t0 = t(rng);
    auto view_at = [&](double time) {
      return orbit::look_angles(site, orbit::eci_to_ecef(orbit::propagate(el, time)));
    };
    const auto v = view_at(t0);
    const double numeric = (view_at(t0 + 0.5).slant_range_km - view_at(t0 - 0.5).slant_range_km) / 1.0;
    CHECK(std::abs(numeric - v.range_rate_km_s) < 1e-3);
    ++checked;
  }
}

TEST_CASE("doppler shift") {
  CHECK(orbit::doppler_shift_khz(0.0, 30.0) == 0.0);
  // 5.25 / 299792.458 * 30e6 and 3.6 / 299792.458 * 2e6.
  CHECK(orbit::doppler_shift_khz(-5.25, 30.0) == doctest::Approx(525.3635).epsilon(1e-6));
  CHECK(orbit::doppler_shift_khz(-3.6, 2.0) == doctest::Approx(24.01662).epsilon(1e-6));
  CHECK(orbit::doppler_shift_khz(2.0, 20.0) < 0.0);
  CHECK_THROWS_AS(orbit::doppler_shift_khz(15.0, 2.0), DomainError);
  CHECK_THROWS_AS(orbit::doppler_shift_khz(-20.0, 2.0), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rr(-14.9, 14.9), f(0.5, 40.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = rr(rng), fc = f(rng);
    CHECK(orbit::doppler_shift_khz(-r, fc) == -orbit::doppler_shift_khz(r, fc));
  }
}

TEST_CASE("select_serving") {
  const std::vector<TopocentricView<double>> one{at_elevation(50.0)};
  CHECK(orbit::select_serving(one, 35.0) == 0);

  const std::vector<TopocentricView<double>> drop{at_elevation(34.0), at_elevation(60.0), at_elevation(45.0)};
  CHECK(orbit::select_serving(drop, 35.0, 0) == 1);

  const std::vector<TopocentricView<double>> keep{at_elevation(36.0), at_elevation(80.0)};
  CHECK(orbit::select_serving(keep, 35.0, 0) == 0);

  const std::vector<TopocentricView<double>> none{at_elevation(10.0), at_elevation(34.9)};
  CHECK_FALSE(orbit::select_serving(none, 35.0).has_value());

  CHECK_THROWS_AS(orbit::select_serving(one, 90.0), DomainError);
}

TEST_CASE("serving selector re-acquires only above threshold plus hysteresis") {
  orbit::ServingSelector sel(35.0, 0.5);
  std::vector<TopocentricView<double>> v{at_elevation(40.0)};
  CHECK(sel.update(v) == 0);
  v[0].elevation_deg = 34.0;
  CHECK_FALSE(sel.update(v).has_value());
  v[0].elevation_deg = 35.2;
  CHECK_FALSE(sel.update(v).has_value());
  v[0].elevation_deg = 35.6;
  CHECK(sel.update(v) == 0);

  std::vector<TopocentricView<double>> two{at_elevation(36.0), at_elevation(50.0)};
  CHECK(sel.update(two) == 0);
  two[0].elevation_deg = 34.9;
  CHECK(sel.update(two) == 1);
  CHECK(sel.handovers() == 1);
}

TEST_CASE("access timeline for built-in scenarios") {
  SUBCASE("MEO elevation envelope") {
    const auto tl = build_access_timeline(builtin_scenario("scenario-11"), 5.0);
    for (const auto& s : tl.samples) {
      REQUIRE(s.served());
      CHECK(s.view.elevation_deg >= 39.2 - 2.0);
      CHECK(s.view.elevation_deg <= 85.6 + 2.0);
    }
  }
  SUBCASE("GEO Doppler stays small") {
    const auto tl = build_access_timeline(builtin_scenario("scenario-15b"), 10.0);
    for (const auto& s : tl.samples) CHECK(std::abs(s.doppler_khz) <= 25.0);
    CHECK(tl.handovers == 0);
  }
  SUBCASE("zero-length flight") {
    auto sc = builtin_scenario("scenario-6");
    sc.duration_h = 0.0;
    CHECK(build_access_timeline(sc, 1.0).samples.empty());
    CHECK(build_access_timeline(sc, 1.0).access_percentage() == 0.0);
  }
  SUBCASE("non-positive step") { CHECK_THROWS_AS(build_access_timeline(builtin_scenario("scenario-6"), 0.0), DomainError); }
}

TEST_CASE("handover invariant on a LEO flight") {
  const auto sc = builtin_scenario("scenario-6");
  const double step = 2.0;
  const auto tl = build_access_timeline(sc, step);
  const auto elements = expand_constellation(sc.constellation);

  int prev = -1;
  int handovers = 0;
  for (const auto& s : tl.samples) {
    if (!s.served()) {
      prev = -1;
      continue;
    }
    CHECK(s.view.elevation_deg >= sc.handover_threshold_deg);
    if (prev >= 0 && s.satellite_id != prev) {
      ++handovers;
      // The new satellite is the highest one in view.
      const auto aircraft = sc.flight.at(s.time_s);
      double best = -90.0;
      for (const auto& el : elements) {
        const auto f = orbit::eci_to_ecef(orbit::propagate(el, s.time_s + sc.epoch_offset_s));
        best = std::max(best, orbit::look_angles(aircraft.position, f).elevation_deg);
      }
      CHECK(s.view.elevation_deg == doctest::Approx(best).epsilon(1e-9));
    }
    prev = s.satellite_id;
  }
  CHECK(handovers == tl.handovers);
  CHECK(handovers > 0);
}

TEST_CASE("LEO built-ins keep access above 99 percent") {
  for (const char* id : {"scenario-6", "scenario-7", "scenario-15a", "scenario-19"}) {
    CAPTURE(id);
    CHECK(build_access_timeline(builtin_scenario(id), 5.0).access_percentage() >= 99.0);
  }
}
