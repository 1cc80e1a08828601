#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsim/blade.hpp"
#include "ntnsim/common.hpp"
#include "ntnsim/link_budget.hpp"
#include "ntnsim/ntn_phy.hpp"
#include "ntnsim/orbit.hpp"

namespace ntnsim {

enum class ConstellationConfig { Single, Star, Delta };
enum class PayloadAntenna { ParabolicReflector, DirectRadiatingArray, Patch };

struct RfPayloadSpec {
  Band band = Band::Ka;
  double beam_eirp_dbw = 0.0;
  double hpbw_deg = 0.0;
  double gt_db_k = 0.0;
  int beams = 1;
  PayloadAntenna antenna_type = PayloadAntenna::DirectRadiatingArray;
  std::optional<double> noise_temperature_k;

  bool operator==(const RfPayloadSpec&) const = default;
};

struct ConstellationSpec {
  std::string name;
  double altitude_km = 0.0;
  int planes = 1;
  /// One value per plane, or a single value shared by all planes.
  std::vector<double> inclinations_deg;
  /// Explicit per-plane RAANs (or one shared value). Ignored when raan_spacing_deg is set.
  std::vector<double> raans_deg;
  /// Plane N gets raan_start_deg + (N - 1) * spacing.
  std::optional<double> raan_spacing_deg;
  double raan_start_deg = 0.0;
  int sats_per_plane = 1;
  ConstellationConfig configuration = ConstellationConfig::Single;
  /// Walker phasing factor F: plane p is advanced by p * F * 360 / total.
  double phasing_factor = 0.0;
  /// Argument of latitude of the first satellite of plane 0 at epoch.
  double phase_offset_deg = 0.0;
  std::vector<RfPayloadSpec> payloads;

  int total_satellites() const { return planes * sats_per_plane; }
  double semi_major_axis_km() const { return constants::earth_radius_km + altitude_km; }
  double inclination_of(int plane) const;
  double raan_of(int plane) const;
  const RfPayloadSpec* payload_for(Band band) const;

  bool operator==(const ConstellationSpec&) const = default;
};

enum class AircraftAntennaType { PatchArrayFixed, PatchFixed, PhasedArraySteerable, ParabolicSteerable };
enum class AntennaPosition { MainBody, UnderBlades };

struct AircraftAntennaSpec {
  AircraftAntennaType type = AircraftAntennaType::PatchFixed;
  Band band = Band::Ka;
  double bandwidth_mhz = 0.0;
  double beamwidth_min_deg = 0.0;
  double beamwidth_max_deg = 0.0;
  double max_gain_dbi = 0.0;
  /// Fixed-pattern boresight in the body frame (level flight); 90 = zenith.
  double boresight_elevation_deg = 90.0;
  double boresight_azimuth_deg = 0.0;
  /// Largest zenith angle a steerable antenna can reach without scan loss.
  double steering_limit_deg = 90.0;

  bool steerable() const {
    return type == AircraftAntennaType::PhasedArraySteerable || type == AircraftAntennaType::ParabolicSteerable;
  }
  bool operator==(const AircraftAntennaSpec&) const = default;
};

struct AircraftSpec {
  std::string name;
  std::string model;
  std::vector<AircraftAntennaSpec> antennas;
  AntennaPosition antenna_position = AntennaPosition::MainBody;
  std::optional<blade::RotorSpec> rotor;

  const AircraftAntennaSpec* antenna_for(Band band) const;
  bool operator==(const AircraftSpec&) const = default;
};

struct Waypoint {
  double time_s = 0.0;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
  bool operator==(const Waypoint&) const = default;
};

/// Circular route flown at constant speed and altitude around a center point.
struct LoiterPattern {
  double center_latitude_deg = 0.0;
  double center_longitude_deg = 0.0;
  double radius_km = 0.0;
  double speed_m_s = 0.0;
  double altitude_m = 0.0;
  double duration_s = 0.0;
  bool operator==(const LoiterPattern&) const = default;
};

struct RouteState {
  orbit::GeodeticPosition position;
  /// Earth-fixed velocity, km/s.
  orbit::Vector3<double> velocity_km_s = orbit::Vector3<double>::Zero();
  /// Ground track heading, degrees clockwise from north.
  double heading_deg = 0.0;
};

struct FlightRoute {
  std::vector<Waypoint> waypoints;
  /// Set when the waypoints were generated from a loiter description.
  std::optional<LoiterPattern> loiter;

  static FlightRoute from_loiter(const LoiterPattern& pattern);
  /// Position and velocity by linear interpolation in latitude/longitude/altitude;
  /// the aircraft holds at the ends of the route.
  RouteState at(double time_s) const;
  bool operator==(const FlightRoute&) const = default;
};

struct RainSample {
  double time_s = 0.0;
  double rate_mm_h = 0.0;
  bool operator==(const RainSample&) const = default;
};

/// Piecewise-linear rain rate; zero for an empty profile.
double rain_rate_at(const std::vector<RainSample>& profile, double time_s);

struct ScenarioSpec {
  std::string id;
  std::string description;
  AircraftSpec aircraft;
  ConstellationSpec constellation;
  LinkDirection link_direction = LinkDirection::Uplink;
  Band band = Band::Ka;
  FlightRoute flight;
  double duration_h = 0.0;
  /// Flight start relative to the constellation epoch, s.
  double epoch_offset_s = 0.0;
  double handover_threshold_deg = 35.0;
  double handover_hysteresis_deg = 0.5;
  std::vector<RainSample> rain_profile;
  link::LossModelConfig loss_model;
  /// Aircraft transmitter output power, required for uplink.
  std::optional<double> terminal_tx_power_dbw;
  /// Aircraft receiver system noise temperature for downlink.
  double terminal_noise_temperature_k = 400.0;
  /// Polarisation and implementation losses.
  double link_margin_db = 0.0;
  /// Reduced bandwidth for the CNR' column.
  std::optional<double> cnr_prime_bandwidth_mhz;
  phy::PhyConfig phy;

  double duration_s() const { return duration_h * 3600.0; }
  double carrier_ghz() const { return phy.carrier_ghz; }
  const AircraftAntennaSpec& terminal_antenna() const;
  const RfPayloadSpec& payload() const;
  double link_bandwidth_mhz() const { return terminal_antenna().bandwidth_mhz; }

  bool operator==(const ScenarioSpec&) const = default;
};

void validate(const ConstellationSpec& spec);
void validate(const AircraftSpec& spec);
void validate(const FlightRoute& route);
/// Validates the scenario and its resolved references.
void validate(const ScenarioSpec& spec);

/// Every satellite of the constellation as a circular element set, plane-major.
std::vector<orbit::KeplerElements> expand_constellation(const ConstellationSpec& spec);

/// The shipped scenarios: 6, 7, 11, 15a, 15b, 19.
std::vector<ScenarioSpec> builtin_catalog();
std::vector<AircraftSpec> builtin_aircraft();
std::vector<ConstellationSpec> builtin_constellations();
/// Throws ReferenceError for unknown ids.
ScenarioSpec builtin_scenario(const std::string& id);

/// Scenario document: top-level `aircraft`, `constellations`, `scenarios`.
nlohmann::json serialize(const std::vector<ScenarioSpec>& scenarios);
std::vector<ScenarioSpec> parse_scenarios(const nlohmann::json& doc);

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path);
/// Loads one scenario. Without an id the file must hold exactly one scenario.
ScenarioSpec load_scenario(const std::filesystem::path& path, const std::optional<std::string>& id = std::nullopt);

/// Built-in id or path to a scenario file.
ScenarioSpec resolve_scenario(const std::string& id_or_path);

}  // namespace ntnsim
