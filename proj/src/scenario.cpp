#include "ntnsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ntnsim {

using nlohmann::json;

std::string_view to_string(Band band) {
  switch (band) {
    case Band::S: return "S";
    case Band::Ku: return "Ku";
    case Band::Ka: return "Ka";
  }
  return "?";
}

std::string_view to_string(LinkDirection direction) {
  return direction == LinkDirection::Uplink ? "uplink" : "downlink";
}

// ---------------------------------------------------------------------------
// Domain helpers

double ConstellationSpec::inclination_of(int plane) const {
  if (inclinations_deg.size() == static_cast<std::size_t>(planes)) return inclinations_deg.at(plane);
  return inclinations_deg.empty() ? 0.0 : inclinations_deg.front();
}

double ConstellationSpec::raan_of(int plane) const {
  if (raan_spacing_deg) return raan_start_deg + plane * *raan_spacing_deg;
  if (raans_deg.size() == static_cast<std::size_t>(planes)) return raans_deg.at(plane);
  return raans_deg.empty() ? 0.0 : raans_deg.front();
}

const RfPayloadSpec* ConstellationSpec::payload_for(Band band) const {
  for (const auto& p : payloads)
    if (p.band == band) return &p;
  return nullptr;
}

const AircraftAntennaSpec* AircraftSpec::antenna_for(Band band) const {
  for (const auto& a : antennas)
    if (a.band == band) return &a;
  return nullptr;
}

const AircraftAntennaSpec& ScenarioSpec::terminal_antenna() const {
  const auto* a = aircraft.antenna_for(band);
  if (!a) throw ReferenceError(id + ": aircraft '" + aircraft.name + "' has no " + std::string(to_string(band)) +
                               "-band antenna");
  return *a;
}

const RfPayloadSpec& ScenarioSpec::payload() const {
  const auto* p = constellation.payload_for(band);
  if (!p) throw ReferenceError(id + ": constellation '" + constellation.name + "' has no " +
                               std::string(to_string(band)) + "-band payload");
  return *p;
}

std::vector<orbit::KeplerElements> expand_constellation(const ConstellationSpec& spec) {
  std::vector<orbit::KeplerElements> out;
  out.reserve(static_cast<std::size_t>(spec.total_satellites()));
  const double in_plane = 360.0 / spec.sats_per_plane;
  const double walker = spec.phasing_factor * 360.0 / spec.total_satellites();
  for (int p = 0; p < spec.planes; ++p) {
    for (int j = 0; j < spec.sats_per_plane; ++j) {
      orbit::KeplerElements el;
      el.semi_major_axis_km = spec.semi_major_axis_km();
      el.eccentricity = 0.0;
      el.inclination_deg = spec.inclination_of(p);
      el.raan_deg = spec.raan_of(p);
      el.arg_latitude_deg = spec.phase_offset_deg + j * in_plane + p * walker;
      el.plane = p;
      el.index_in_plane = j;
      out.push_back(el);
    }
  }
  return out;
}

FlightRoute FlightRoute::from_loiter(const LoiterPattern& pattern) {
  FlightRoute route;
  route.loiter = pattern;
  const double lat0 = deg2rad(pattern.center_latitude_deg);
  const double lon0 = deg2rad(pattern.center_longitude_deg);

  if (!(pattern.radius_km > 0.0) || !(pattern.speed_m_s > 0.0)) {
    route.waypoints.push_back({0.0, pattern.center_latitude_deg, pattern.center_longitude_deg, pattern.altitude_m});
    if (pattern.duration_s > 0.0)
      route.waypoints.push_back(
          {pattern.duration_s, pattern.center_latitude_deg, pattern.center_longitude_deg, pattern.altitude_m});
    return route;
  }

  constexpr int points_per_lap = 36;
  const double lap_s = 2.0 * constants::pi * pattern.radius_km * 1e3 / pattern.speed_m_s;
  const double dt = lap_s / points_per_lap;
  const double delta = pattern.radius_km / constants::earth_radius_km;
  for (int k = 0;; ++k) {
    const double t = k * dt;
    // Clockwise from north of the center.
    const double bearing = 2.0 * constants::pi * (k % points_per_lap) / points_per_lap;
    const double lat = std::asin(std::sin(lat0) * std::cos(delta) + std::cos(lat0) * std::sin(delta) * std::cos(bearing));
    const double lon = lon0 + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(lat0),
                                         std::cos(delta) - std::sin(lat0) * std::sin(lat));
    route.waypoints.push_back({t, rad2deg(lat), rad2deg(lon), pattern.altitude_m});
    if (t >= pattern.duration_s) break;
  }
  return route;
}

RouteState FlightRoute::at(double time_s) const {
  RouteState s;
  if (waypoints.empty()) return s;
  auto as_position = [](const Waypoint& w) {
    return orbit::GeodeticPosition{w.latitude_deg, w.longitude_deg, w.altitude_m};
  };
  if (waypoints.size() == 1 || time_s < waypoints.front().time_s) {
    s.position = as_position(waypoints.front());
    return s;
  }
  if (time_s >= waypoints.back().time_s) {
    s.position = as_position(waypoints.back());
    return s;
  }

  auto hi = std::upper_bound(waypoints.begin(), waypoints.end(), time_s,
                             [](double t, const Waypoint& w) { return t < w.time_s; });
  auto lo = hi - 1;
  const double span = hi->time_s - lo->time_s;
  const double w = (time_s - lo->time_s) / span;
  s.position.latitude_deg = lo->latitude_deg + w * (hi->latitude_deg - lo->latitude_deg);
  s.position.longitude_deg = lo->longitude_deg + w * (hi->longitude_deg - lo->longitude_deg);
  s.position.altitude_m = lo->altitude_m + w * (hi->altitude_m - lo->altitude_m);

  const double r_km = constants::earth_radius_km + s.position.altitude_m * 1e-3;
  const double v_north = r_km * deg2rad(hi->latitude_deg - lo->latitude_deg) / span;
  const double v_east =
      r_km * std::cos(deg2rad(s.position.latitude_deg)) * deg2rad(hi->longitude_deg - lo->longitude_deg) / span;
  const double v_up = (hi->altitude_m - lo->altitude_m) * 1e-3 / span;
  s.velocity_km_s = orbit::enu_basis<double>(s.position).transpose() * orbit::Vector3<double>(v_east, v_north, v_up);
  if (v_north != 0.0 || v_east != 0.0) {
    double heading = rad2deg(std::atan2(v_east, v_north));
    s.heading_deg = heading < 0.0 ? heading + 360.0 : heading;
  }
  return s;
}

double rain_rate_at(const std::vector<RainSample>& profile, double time_s) {
  if (profile.empty()) return 0.0;
  if (time_s <= profile.front().time_s) return profile.front().rate_mm_h;
  if (time_s >= profile.back().time_s) return profile.back().rate_mm_h;
  auto hi = std::upper_bound(profile.begin(), profile.end(), time_s,
                             [](double t, const RainSample& s) { return t < s.time_s; });
  auto lo = hi - 1;
  const double w = (time_s - lo->time_s) / (hi->time_s - lo->time_s);
  return lo->rate_mm_h + w * (hi->rate_mm_h - lo->rate_mm_h);
}

// ---------------------------------------------------------------------------
// Validation

void validate(const ConstellationSpec& spec) {
  const std::string at = "constellations[" + spec.name + "]";
  if (spec.name.empty()) throw ValidationError("constellations.name", "must not be empty");
  if (!(spec.altitude_km > 0.0)) throw ValidationError(at + ".altitude_km", "must be > 0");
  if (spec.planes < 1) throw ValidationError(at + ".planes", "must be >= 1");
  if (spec.sats_per_plane < 1) throw ValidationError(at + ".sats_per_plane", "must be >= 1");
  const auto n_inc = spec.inclinations_deg.size();
  if (n_inc != 1 && n_inc != static_cast<std::size_t>(spec.planes))
    throw ValidationError(at + ".inclinations_deg", "needs one value or one per plane");
  for (double inc : spec.inclinations_deg)
    if (!(inc >= 0.0 && inc <= 180.0)) throw ValidationError(at + ".inclinations_deg", "must be in [0, 180]");
  const auto n_raan = spec.raans_deg.size();
  if (n_raan > 1 && n_raan != static_cast<std::size_t>(spec.planes))
    throw ValidationError(at + ".raans_deg", "needs zero, one, or one value per plane");
  if (spec.configuration == ConstellationConfig::Single && spec.total_satellites() != 1)
    throw ValidationError(at + ".configuration", "'single' requires exactly one satellite");
  if (!std::isfinite(spec.phasing_factor)) throw ValidationError(at + ".phasing_factor", "must be finite");
  for (const auto& p : spec.payloads) {
    if (!std::isfinite(p.beam_eirp_dbw)) throw ValidationError(at + ".payloads.beam_eirp_dbw", "must be finite");
    if (!(p.hpbw_deg > 0.0)) throw ValidationError(at + ".payloads.hpbw_deg", "must be > 0");
    if (p.beams < 1) throw ValidationError(at + ".payloads.beams", "must be >= 1");
    if (!std::isfinite(p.gt_db_k)) throw ValidationError(at + ".payloads.gt_db_k", "must be finite");
    if (p.noise_temperature_k && !(*p.noise_temperature_k > 0.0))
      throw ValidationError(at + ".payloads.noise_temperature_k", "must be > 0");
  }
}

void validate(const AircraftSpec& spec) {
  const std::string at = "aircraft[" + spec.name + "]";
  if (spec.name.empty()) throw ValidationError("aircraft.name", "must not be empty");
  if (spec.antennas.empty()) throw ValidationError(at + ".antennas", "needs at least one antenna");
  for (const auto& a : spec.antennas) {
    if (!std::isfinite(a.max_gain_dbi)) throw ValidationError(at + ".antennas.max_gain_dbi", "must be finite");
    if (!(a.bandwidth_mhz > 0.0)) throw ValidationError(at + ".antennas.bandwidth_mhz", "must be > 0");
    if (!(a.beamwidth_min_deg > 0.0) || a.beamwidth_max_deg < a.beamwidth_min_deg)
      throw ValidationError(at + ".antennas.beamwidth_deg", "must be > 0 with min <= max");
    if (!(a.steering_limit_deg >= 0.0 && a.steering_limit_deg <= 90.0))
      throw ValidationError(at + ".antennas.steering_limit_deg", "must be in [0, 90]");
  }
  const bool under = spec.antenna_position == AntennaPosition::UnderBlades;
  if (under != spec.rotor.has_value())
    throw ValidationError(at + ".rotor", "required exactly when the antenna sits under the blades");
  if (spec.rotor) {
    try {
      blade::validate(*spec.rotor);
    } catch (const ValidationError& e) {
      throw ValidationError(at + "." + e.field(), e.what());
    }
  }
}

void validate(const FlightRoute& route) {
  if (route.waypoints.empty()) throw ValidationError("flight.waypoints", "must not be empty");
  for (std::size_t i = 0; i < route.waypoints.size(); ++i) {
    const auto& w = route.waypoints[i];
    if (i > 0 && !(w.time_s > route.waypoints[i - 1].time_s))
      throw ValidationError("flight.waypoints", "times must be strictly increasing");
    if (!(w.latitude_deg >= -90.0 && w.latitude_deg <= 90.0))
      throw ValidationError("flight.waypoints.latitude_deg", "must be in [-90, 90]");
    if (!(w.longitude_deg >= -180.0 && w.longitude_deg <= 180.0))
      throw ValidationError("flight.waypoints.longitude_deg", "must be in [-180, 180]");
    if (!(w.altitude_m >= 0.0)) throw ValidationError("flight.waypoints.altitude_m", "must be >= 0");
  }
}

void validate(const ScenarioSpec& spec) {
  if (spec.id.empty()) throw ValidationError("scenarios.id", "must not be empty");
  const std::string at = "scenarios[" + spec.id + "]";
  validate(spec.aircraft);
  validate(spec.constellation);
  if (!(spec.duration_h > 0.0)) throw ValidationError(at + ".duration_h", "must be > 0");
  if (!std::isfinite(spec.epoch_offset_s)) throw ValidationError(at + ".epoch_offset_s", "must be finite");
  if (!(spec.handover_threshold_deg >= 0.0 && spec.handover_threshold_deg < 90.0))
    throw ValidationError(at + ".handover_threshold_deg", "must be in [0, 90)");
  if (!(spec.handover_hysteresis_deg >= 0.0))
    throw ValidationError(at + ".handover_hysteresis_deg", "must be >= 0");

  (void)spec.terminal_antenna();
  (void)spec.payload();

  if (spec.link_direction == LinkDirection::Uplink && !spec.terminal_tx_power_dbw)
    throw ValidationError(at + ".terminal.tx_power_dbw", "required for uplink scenarios");
  if (spec.terminal_tx_power_dbw && !std::isfinite(*spec.terminal_tx_power_dbw))
    throw ValidationError(at + ".terminal.tx_power_dbw", "must be finite");
  if (!(spec.terminal_noise_temperature_k > 0.0))
    throw ValidationError(at + ".terminal.noise_temperature_k", "must be > 0");
  if (!(spec.link_margin_db >= 0.0)) throw ValidationError(at + ".terminal.link_margin_db", "must be >= 0");
  if (spec.cnr_prime_bandwidth_mhz &&
      !(*spec.cnr_prime_bandwidth_mhz > 0.0 && *spec.cnr_prime_bandwidth_mhz <= spec.link_bandwidth_mhz()))
    throw ValidationError(at + ".cnr_prime_bandwidth_mhz", "must be in (0, link bandwidth]");

  for (std::size_t i = 0; i < spec.rain_profile.size(); ++i) {
    const auto& r = spec.rain_profile[i];
    if (!(r.rate_mm_h >= 0.0)) throw ValidationError(at + ".rain_profile.rate_mm_h", "must be >= 0");
    if (i > 0 && !(r.time_s > spec.rain_profile[i - 1].time_s))
      throw ValidationError(at + ".rain_profile.time_s", "must be strictly increasing");
  }

  try {
    validate(spec.flight);
    link::validate(spec.loss_model);
  } catch (const ValidationError& e) {
    throw ValidationError(at + "." + e.field(), e.what());
  }

  if (link::band_for_frequency(spec.phy.carrier_ghz) != spec.band)
    throw ValidationError(at + ".phy.carrier_ghz", "carrier is not in the scenario band");
  (void)phy::validate(spec.phy, spec.link_direction);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<Band> kBandNames[] = {{Band::S, "S"}, {Band::Ku, "Ku"}, {Band::Ka, "Ka"}};
constexpr EnumName<LinkDirection> kDirectionNames[] = {{LinkDirection::Uplink, "uplink"},
                                                       {LinkDirection::Downlink, "downlink"}};
constexpr EnumName<ConstellationConfig> kConfigNames[] = {
    {ConstellationConfig::Single, "single"}, {ConstellationConfig::Star, "star"}, {ConstellationConfig::Delta, "delta"}};
constexpr EnumName<PayloadAntenna> kPayloadAntennaNames[] = {
    {PayloadAntenna::ParabolicReflector, "parabolic_reflector"},
    {PayloadAntenna::DirectRadiatingArray, "direct_radiating_array"},
    {PayloadAntenna::Patch, "patch"}};
constexpr EnumName<AircraftAntennaType> kAntennaTypeNames[] = {
    {AircraftAntennaType::PatchArrayFixed, "patch_array_fixed"},
    {AircraftAntennaType::PatchFixed, "patch_fixed"},
    {AircraftAntennaType::PhasedArraySteerable, "phased_array_steerable"},
    {AircraftAntennaType::ParabolicSteerable, "parabolic_steerable"}};
constexpr EnumName<AntennaPosition> kPositionNames[] = {{AntennaPosition::MainBody, "main_body"},
                                                        {AntennaPosition::UnderBlades, "under_blades"}};
constexpr EnumName<phy::Modulation> kModulationNames[] = {
    {phy::Modulation::QPSK, "QPSK"}, {phy::Modulation::QAM16, "16QAM"}, {phy::Modulation::QAM64, "64QAM"}};

template <typename Enum, std::size_t N>
const char* enum_name(const EnumName<Enum> (&table)[N], Enum v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(join_path(path, key) + ": missing required key");
  return *it;
}

template <typename T>
T as(const json& v, const std::string& where) {
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& path) {
  return as<T>(require(j, key, path), join_path(path, key));
}

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  return it == j.end() ? fallback : as<T>(*it, join_path(path, key));
}

template <typename T>
std::optional<T> get_opt(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return as<T>(*it, join_path(path, key));
}

template <typename Enum, std::size_t N>
Enum get_enum(const EnumName<Enum> (&table)[N], const json& j, const std::string& key, const std::string& path) {
  const auto s = get<std::string>(j, key, path);
  for (const auto& e : table)
    if (s == e.name) return e.value;
  throw ParseError(join_path(path, key) + ": unknown value '" + s + "'");
}

template <typename Enum, std::size_t N>
Enum get_enum_or(const EnumName<Enum> (&table)[N], const json& j, const std::string& key, const std::string& path,
                 Enum fallback) {
  return j.contains(key) ? get_enum(table, j, key, path) : fallback;
}

const json& require_array(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ParseError(join_path(path, key) + ": expected an array");
  return v;
}

json to_json(const RfPayloadSpec& p) {
  json j{{"band", enum_name(kBandNames, p.band)},
         {"beam_eirp_dbw", p.beam_eirp_dbw},
         {"hpbw_deg", p.hpbw_deg},
         {"gt_db_k", p.gt_db_k},
         {"beams", p.beams},
         {"antenna_type", enum_name(kPayloadAntennaNames, p.antenna_type)}};
  if (p.noise_temperature_k) j["noise_temperature_k"] = *p.noise_temperature_k;
  return j;
}

RfPayloadSpec payload_from_json(const json& j, const std::string& path) {
  RfPayloadSpec p;
  p.band = get_enum(kBandNames, j, "band", path);
  p.beam_eirp_dbw = get<double>(j, "beam_eirp_dbw", path);
  p.hpbw_deg = get<double>(j, "hpbw_deg", path);
  p.gt_db_k = get<double>(j, "gt_db_k", path);
  p.beams = get<int>(j, "beams", path);
  p.antenna_type = get_enum(kPayloadAntennaNames, j, "antenna_type", path);
  p.noise_temperature_k = get_opt<double>(j, "noise_temperature_k", path);
  return p;
}

json to_json(const ConstellationSpec& c) {
  json j{{"name", c.name},
         {"altitude_km", c.altitude_km},
         {"planes", c.planes},
         {"inclinations_deg", c.inclinations_deg},
         {"sats_per_plane", c.sats_per_plane},
         {"configuration", enum_name(kConfigNames, c.configuration)},
         {"phasing_factor", c.phasing_factor},
         {"phase_offset_deg", c.phase_offset_deg}};
  if (c.raan_spacing_deg) {
    j["raan_start_deg"] = c.raan_start_deg;
    j["raan_spacing_deg"] = *c.raan_spacing_deg;
  } else {
    j["raans_deg"] = c.raans_deg;
  }
  json payloads = json::array();
  for (const auto& p : c.payloads) payloads.push_back(to_json(p));
  j["payloads"] = payloads;
  return j;
}

ConstellationSpec constellation_from_json(const json& j, const std::string& path) {
  ConstellationSpec c;
  c.name = get<std::string>(j, "name", path);
  c.altitude_km = get<double>(j, "altitude_km", path);
  c.planes = get<int>(j, "planes", path);
  c.inclinations_deg = get<std::vector<double>>(j, "inclinations_deg", path);
  c.raans_deg = get_or<std::vector<double>>(j, "raans_deg", path, {});
  c.raan_spacing_deg = get_opt<double>(j, "raan_spacing_deg", path);
  c.raan_start_deg = get_or<double>(j, "raan_start_deg", path, 0.0);
  c.sats_per_plane = get<int>(j, "sats_per_plane", path);
  c.configuration = get_enum(kConfigNames, j, "configuration", path);
  c.phasing_factor = get_or<double>(j, "phasing_factor", path, 0.0);
  c.phase_offset_deg = get_or<double>(j, "phase_offset_deg", path, 0.0);
  const json& payloads = require_array(j, "payloads", path);
  for (std::size_t i = 0; i < payloads.size(); ++i)
    c.payloads.push_back(payload_from_json(payloads[i], path + ".payloads[" + std::to_string(i) + "]"));
  return c;
}

json to_json(const blade::RotorSpec& r) {
  return json{{"n_blades", r.n_blades},
              {"blade_width_m", r.blade_width_m},
              {"rotor_rpm", r.rotor_rpm},
              {"shaft_offset_m", r.shaft_offset_m},
              {"rotor_height_m", r.rotor_height_m},
              {"tip_radius_m", r.tip_radius_m},
              {"shaft_azimuth_deg", r.shaft_azimuth_deg},
              {"azimuth_dependent", r.azimuth_dependent},
              {"initial_phase_ms", r.initial_phase_ms}};
}

blade::RotorSpec rotor_from_json(const json& j, const std::string& path) {
  blade::RotorSpec r;
  r.n_blades = get<int>(j, "n_blades", path);
  r.blade_width_m = get<double>(j, "blade_width_m", path);
  r.rotor_rpm = get<double>(j, "rotor_rpm", path);
  r.shaft_offset_m = get<double>(j, "shaft_offset_m", path);
  r.rotor_height_m = get<double>(j, "rotor_height_m", path);
  r.tip_radius_m = get<double>(j, "tip_radius_m", path);
  r.shaft_azimuth_deg = get_or<double>(j, "shaft_azimuth_deg", path, 0.0);
  r.azimuth_dependent = get_or<bool>(j, "azimuth_dependent", path, false);
  r.initial_phase_ms = get_or<double>(j, "initial_phase_ms", path, 0.0);
  return r;
}

json to_json(const AircraftAntennaSpec& a) {
  json j{{"type", enum_name(kAntennaTypeNames, a.type)},
         {"band", enum_name(kBandNames, a.band)},
         {"bandwidth_mhz", a.bandwidth_mhz},
         {"max_gain_dbi", a.max_gain_dbi},
         {"boresight_elevation_deg", a.boresight_elevation_deg},
         {"boresight_azimuth_deg", a.boresight_azimuth_deg},
         {"steering_limit_deg", a.steering_limit_deg}};
  if (a.beamwidth_min_deg == a.beamwidth_max_deg)
    j["beamwidth_deg"] = a.beamwidth_min_deg;
  else
    j["beamwidth_deg"] = json::array({a.beamwidth_min_deg, a.beamwidth_max_deg});
  return j;
}

AircraftAntennaSpec antenna_from_json(const json& j, const std::string& path) {
  AircraftAntennaSpec a;
  a.type = get_enum(kAntennaTypeNames, j, "type", path);
  a.band = get_enum(kBandNames, j, "band", path);
  a.bandwidth_mhz = get<double>(j, "bandwidth_mhz", path);
  a.max_gain_dbi = get<double>(j, "max_gain_dbi", path);
  const json& bw = require(j, "beamwidth_deg", path);
  if (bw.is_array()) {
    const auto range = as<std::vector<double>>(bw, path + ".beamwidth_deg");
    if (range.size() != 2) throw ParseError(path + ".beamwidth_deg: expected [min, max]");
    a.beamwidth_min_deg = range[0];
    a.beamwidth_max_deg = range[1];
  } else {
    a.beamwidth_min_deg = a.beamwidth_max_deg = as<double>(bw, path + ".beamwidth_deg");
  }
  a.boresight_elevation_deg = get_or<double>(j, "boresight_elevation_deg", path, 90.0);
  a.boresight_azimuth_deg = get_or<double>(j, "boresight_azimuth_deg", path, 0.0);
  a.steering_limit_deg = get_or<double>(j, "steering_limit_deg", path, 90.0);
  return a;
}

json to_json(const AircraftSpec& a) {
  json antennas = json::array();
  for (const auto& ant : a.antennas) antennas.push_back(to_json(ant));
  json j{{"name", a.name},
         {"model", a.model},
         {"antenna_position", enum_name(kPositionNames, a.antenna_position)},
         {"antennas", antennas}};
  if (a.rotor) j["rotor"] = to_json(*a.rotor);
  return j;
}

AircraftSpec aircraft_from_json(const json& j, const std::string& path) {
  AircraftSpec a;
  a.name = get<std::string>(j, "name", path);
  a.model = get_or<std::string>(j, "model", path, "");
  a.antenna_position = get_enum(kPositionNames, j, "antenna_position", path);
  const json& antennas = require_array(j, "antennas", path);
  for (std::size_t i = 0; i < antennas.size(); ++i)
    a.antennas.push_back(antenna_from_json(antennas[i], path + ".antennas[" + std::to_string(i) + "]"));
  if (j.contains("rotor") && !j["rotor"].is_null()) a.rotor = rotor_from_json(j["rotor"], path + ".rotor");
  return a;
}

json to_json(const link::LossModelConfig& m) {
  auto zenith = [](const link::ZenithLoss& z) { return json{{"gaseous_db", z.gaseous_db}, {"cloud_db", z.cloud_db}}; };
  json table = json::array();
  for (const auto& c : m.rain_table) table.push_back(json::array({c.frequency_ghz, c.k, c.alpha}));
  return json{{"zenith",
               {{"S", zenith(m.s_band)}, {"Ku", zenith(m.ku_band)}, {"Ka", zenith(m.ka_band)}}},
              {"rain_height_km", m.rain_height_km},
              {"max_rain_path_km", m.max_rain_path_km},
              {"rain_table", table}};
}

link::LossModelConfig loss_model_from_json(const json& j, const std::string& path) {
  link::LossModelConfig m;
  if (j.contains("zenith")) {
    const json& z = j["zenith"];
    const std::string zpath = path + ".zenith";
    auto read = [&](const char* band, link::ZenithLoss& out) {
      if (!z.contains(band)) return;
      const std::string bpath = zpath + "." + band;
      out.gaseous_db = get_or<double>(z[band], "gaseous_db", bpath, out.gaseous_db);
      out.cloud_db = get_or<double>(z[band], "cloud_db", bpath, out.cloud_db);
    };
    read("S", m.s_band);
    read("Ku", m.ku_band);
    read("Ka", m.ka_band);
  }
  m.rain_height_km = get_or<double>(j, "rain_height_km", path, m.rain_height_km);
  m.max_rain_path_km = get_or<double>(j, "max_rain_path_km", path, m.max_rain_path_km);
  if (j.contains("rain_table")) {
    m.rain_table.clear();
    for (const auto& row : as<std::vector<std::vector<double>>>(j["rain_table"], path + ".rain_table")) {
      if (row.size() != 3) throw ParseError(path + ".rain_table: rows are [frequency_ghz, k, alpha]");
      m.rain_table.push_back({row[0], row[1], row[2]});
    }
  }
  return m;
}

json to_json(const phy::PhyConfig& p) {
  json j{{"carrier_ghz", p.carrier_ghz},
         {"channel_bw_mhz", p.channel_bw_mhz},
         {"scs_khz", p.scs_khz},
         {"n_rb", p.n_rb},
         {"mcs",
          {{"modulation", enum_name(kModulationNames, p.mcs.modulation)},
           {"code_rate", p.mcs.code_rate},
           {"coding_gain_db", p.mcs.coding_gain_db}}},
         {"overhead_fraction", p.overhead_fraction},
         {"n_frames", p.n_frames},
         {"erasure_overlap_threshold", p.erasure_overlap_threshold}};
  if (p.ntn_band) j["ntn_band"] = *p.ntn_band;
  return j;
}

phy::PhyConfig phy_from_json(const json& j, const std::string& path) {
  phy::PhyConfig p;
  p.ntn_band = get_opt<std::string>(j, "ntn_band", path);
  p.carrier_ghz = get<double>(j, "carrier_ghz", path);
  p.channel_bw_mhz = get<double>(j, "channel_bw_mhz", path);
  p.scs_khz = get<int>(j, "scs_khz", path);
  p.n_rb = get<int>(j, "n_rb", path);
  const json& mcs = require(j, "mcs", path);
  const std::string mpath = path + ".mcs";
  p.mcs.modulation = get_enum(kModulationNames, mcs, "modulation", mpath);
  p.mcs.code_rate = get<double>(mcs, "code_rate", mpath);
  p.mcs.coding_gain_db = get_or<double>(mcs, "coding_gain_db", mpath, 6.0);
  p.overhead_fraction = get_or<double>(j, "overhead_fraction", path, 0.0);
  p.n_frames = get_or<int>(j, "n_frames", path, 100);
  p.erasure_overlap_threshold = get_or<double>(j, "erasure_overlap_threshold", path, 0.5);
  return p;
}

json to_json(const FlightRoute& f) {
  if (f.loiter) {
    const auto& l = *f.loiter;
    return json{{"loiter",
                 {{"center_latitude_deg", l.center_latitude_deg},
                  {"center_longitude_deg", l.center_longitude_deg},
                  {"radius_km", l.radius_km},
                  {"speed_m_s", l.speed_m_s},
                  {"altitude_m", l.altitude_m},
                  {"duration_s", l.duration_s}}}};
  }
  json wps = json::array();
  for (const auto& w : f.waypoints)
    wps.push_back(json{{"time_s", w.time_s},
                       {"latitude_deg", w.latitude_deg},
                       {"longitude_deg", w.longitude_deg},
                       {"altitude_m", w.altitude_m}});
  return json{{"waypoints", wps}};
}

FlightRoute flight_from_json(const json& j, const std::string& path) {
  if (j.contains("loiter")) {
    const json& l = j["loiter"];
    const std::string lpath = path + ".loiter";
    LoiterPattern p;
    p.center_latitude_deg = get<double>(l, "center_latitude_deg", lpath);
    p.center_longitude_deg = get<double>(l, "center_longitude_deg", lpath);
    p.radius_km = get<double>(l, "radius_km", lpath);
    p.speed_m_s = get<double>(l, "speed_m_s", lpath);
    p.altitude_m = get<double>(l, "altitude_m", lpath);
    p.duration_s = get<double>(l, "duration_s", lpath);
    if (!(p.radius_km >= 0.0) || !(p.speed_m_s >= 0.0) || !(p.duration_s >= 0.0))
      throw ValidationError(lpath, "radius, speed and duration must be >= 0");
    return FlightRoute::from_loiter(p);
  }
  FlightRoute f;
  const json& wps = require_array(j, "waypoints", path);
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string wpath = path + ".waypoints[" + std::to_string(i) + "]";
    f.waypoints.push_back({get<double>(wps[i], "time_s", wpath), get<double>(wps[i], "latitude_deg", wpath),
                           get<double>(wps[i], "longitude_deg", wpath), get<double>(wps[i], "altitude_m", wpath)});
  }
  return f;
}

json to_json(const ScenarioSpec& s) {
  json rain = json::array();
  for (const auto& r : s.rain_profile) rain.push_back(json{{"time_s", r.time_s}, {"rate_mm_h", r.rate_mm_h}});
  json terminal{{"noise_temperature_k", s.terminal_noise_temperature_k}, {"link_margin_db", s.link_margin_db}};
  if (s.terminal_tx_power_dbw) terminal["tx_power_dbw"] = *s.terminal_tx_power_dbw;
  json j{{"id", s.id},
         {"description", s.description},
         {"aircraft", s.aircraft.name},
         {"constellation", s.constellation.name},
         {"link_direction", enum_name(kDirectionNames, s.link_direction)},
         {"band", enum_name(kBandNames, s.band)},
         {"duration_h", s.duration_h},
         {"epoch_offset_s", s.epoch_offset_s},
         {"handover_threshold_deg", s.handover_threshold_deg},
         {"handover_hysteresis_deg", s.handover_hysteresis_deg},
         {"flight", to_json(s.flight)},
         {"rain_profile", rain},
         {"terminal", terminal},
         {"loss_model", to_json(s.loss_model)},
         {"phy", to_json(s.phy)}};
  if (s.cnr_prime_bandwidth_mhz) j["cnr_prime_bandwidth_mhz"] = *s.cnr_prime_bandwidth_mhz;
  return j;
}

}  // namespace

nlohmann::json serialize(const std::vector<ScenarioSpec>& scenarios) {
  json aircraft = json::array();
  json constellations = json::array();
  json list = json::array();
  std::vector<std::string> seen_aircraft;
  std::vector<std::string> seen_constellations;
  for (const auto& s : scenarios) {
    if (std::find(seen_aircraft.begin(), seen_aircraft.end(), s.aircraft.name) == seen_aircraft.end()) {
      seen_aircraft.push_back(s.aircraft.name);
      aircraft.push_back(to_json(s.aircraft));
    }
    if (std::find(seen_constellations.begin(), seen_constellations.end(), s.constellation.name) ==
        seen_constellations.end()) {
      seen_constellations.push_back(s.constellation.name);
      constellations.push_back(to_json(s.constellation));
    }
    list.push_back(to_json(s));
  }
  return json{{"aircraft", aircraft}, {"constellations", constellations}, {"scenarios", list}};
}

std::vector<ScenarioSpec> parse_scenarios(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");

  std::vector<AircraftSpec> aircraft;
  const json& a_list = require_array(doc, "aircraft", "");
  for (std::size_t i = 0; i < a_list.size(); ++i) {
    aircraft.push_back(aircraft_from_json(a_list[i], "aircraft[" + std::to_string(i) + "]"));
    validate(aircraft.back());
  }

  std::vector<ConstellationSpec> constellations;
  const json& c_list = require_array(doc, "constellations", "");
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    constellations.push_back(constellation_from_json(c_list[i], "constellations[" + std::to_string(i) + "]"));
    validate(constellations.back());
  }

  std::vector<ScenarioSpec> out;
  const json& s_list = require_array(doc, "scenarios", "");
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    const json& j = s_list[i];
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    ScenarioSpec s;
    s.id = get<std::string>(j, "id", path);
    s.description = get_or<std::string>(j, "description", path, "");

    const auto aircraft_name = get<std::string>(j, "aircraft", path);
    auto ait = std::find_if(aircraft.begin(), aircraft.end(), [&](const auto& a) { return a.name == aircraft_name; });
    if (ait == aircraft.end()) throw ReferenceError(path + ": unknown aircraft '" + aircraft_name + "'");
    s.aircraft = *ait;

    const auto constellation_name = get<std::string>(j, "constellation", path);
    auto cit = std::find_if(constellations.begin(), constellations.end(),
                            [&](const auto& c) { return c.name == constellation_name; });
    if (cit == constellations.end())
      throw ReferenceError(path + ": unknown constellation '" + constellation_name + "'");
    s.constellation = *cit;

    s.link_direction = get_enum(kDirectionNames, j, "link_direction", path);
    s.band = get_enum(kBandNames, j, "band", path);
    s.duration_h = get<double>(j, "duration_h", path);
    s.epoch_offset_s = get_or<double>(j, "epoch_offset_s", path, 0.0);
    s.handover_threshold_deg = get<double>(j, "handover_threshold_deg", path);
    s.handover_hysteresis_deg = get_or<double>(j, "handover_hysteresis_deg", path, 0.5);
    s.flight = flight_from_json(require(j, "flight", path), path + ".flight");
    if (j.contains("rain_profile")) {
      const json& rain = require_array(j, "rain_profile", path);
      for (std::size_t r = 0; r < rain.size(); ++r) {
        const std::string rpath = path + ".rain_profile[" + std::to_string(r) + "]";
        s.rain_profile.push_back({get<double>(rain[r], "time_s", rpath), get<double>(rain[r], "rate_mm_h", rpath)});
      }
    }
    if (j.contains("terminal")) {
      const json& t = j["terminal"];
      const std::string tpath = path + ".terminal";
      s.terminal_tx_power_dbw = get_opt<double>(t, "tx_power_dbw", tpath);
      s.terminal_noise_temperature_k = get_or<double>(t, "noise_temperature_k", tpath, 400.0);
      s.link_margin_db = get_or<double>(t, "link_margin_db", tpath, 0.0);
    }
    s.cnr_prime_bandwidth_mhz = get_opt<double>(j, "cnr_prime_bandwidth_mhz", path);
    if (j.contains("loss_model")) s.loss_model = loss_model_from_json(j["loss_model"], path + ".loss_model");
    s.phy = phy_from_json(require(j, "phy", path), path + ".phy");

    validate(s);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_scenarios(doc);
}

ScenarioSpec load_scenario(const std::filesystem::path& path, const std::optional<std::string>& id) {
  auto all = load_scenarios(path);
  if (id) {
    for (auto& s : all)
      if (s.id == *id) return std::move(s);
    throw ReferenceError(path.string() + ": no scenario '" + *id + "'");
  }
  if (all.size() != 1)
    throw ReferenceError(path.string() + ": holds " + std::to_string(all.size()) +
                         " scenarios, an id is required");
  return std::move(all.front());
}

ScenarioSpec resolve_scenario(const std::string& id_or_path) {
  for (const auto& s : builtin_catalog())
    if (s.id == id_or_path) return s;
  if (std::filesystem::exists(id_or_path)) return load_scenario(id_or_path);
  throw ReferenceError("unknown scenario '" + id_or_path + "' (not a built-in id or an existing file)");
}

}  // namespace ntnsim
