#include <cmath>

#include "ntnsim/scenario.hpp"

namespace ntnsim {

namespace {

// S-band user payload on the LEO fleets: 33 dBm into a 5 dBi patch, 400 K system noise.
constexpr double s_band_noise_k = 400.0;

RfPayloadSpec s_band_patch() {
  RfPayloadSpec p;
  p.band = Band::S;
  p.beam_eirp_dbw = 3.0 + 5.0;
  p.hpbw_deg = 90.0;
  p.gt_db_k = 5.0 - 10.0 * std::log10(s_band_noise_k);
  p.beams = 1;
  p.antenna_type = PayloadAntenna::Patch;
  p.noise_temperature_k = s_band_noise_k;
  return p;
}

RfPayloadSpec ka_payload(PayloadAntenna type, int beams, double eirp, double hpbw, double gt) {
  return RfPayloadSpec{Band::Ka, eirp, hpbw, gt, beams, type, std::nullopt};
}

ConstellationSpec geo() {
  ConstellationSpec c;
  c.name = "GEO";
  c.altitude_km = 35786.0;
  c.planes = 1;
  c.inclinations_deg = {6.0};
  c.raans_deg = {0.0};
  c.sats_per_plane = 1;
  c.configuration = ConstellationConfig::Single;
  auto ka = ka_payload(PayloadAntenna::ParabolicReflector, 2, 58.1, 0.2, 12.3);
  // No Ku figures are published for this satellite; the Ku beam reuses the Ka values.
  auto ku = ka;
  ku.band = Band::Ku;
  c.payloads = {ka, ku};
  return c;
}

ConstellationSpec meo() {
  ConstellationSpec c;
  c.name = "MEO";
  c.altitude_km = 8063.0;
  c.planes = 4;
  c.inclinations_deg = {90.0, 90.0, 70.0, 70.0};
  c.raans_deg = {0.0, 90.0, 45.0, 135.0};
  c.sats_per_plane = 6;
  c.configuration = ConstellationConfig::Star;
  c.payloads = {ka_payload(PayloadAntenna::DirectRadiatingArray, 256, 62.0, 2.5, 10.8)};
  return c;
}

ConstellationSpec leo1() {
  ConstellationSpec c;
  c.name = "LEO-1";
  c.altitude_km = 1050.0;
  c.planes = 12;
  c.inclinations_deg = {89.0};
  c.raan_spacing_deg = 15.0;
  c.raan_start_deg = 0.0;
  c.sats_per_plane = 24;
  c.configuration = ConstellationConfig::Star;
  c.payloads = {ka_payload(PayloadAntenna::DirectRadiatingArray, 64, 50.0, 4.6, 5.0), s_band_patch()};
  return c;
}

ConstellationSpec leo2() {
  ConstellationSpec c;
  c.name = "LEO-2";
  c.altitude_km = 720.0;
  c.planes = 12;
  c.inclinations_deg = {53.5};
  c.raan_spacing_deg = 30.0;
  c.raan_start_deg = 0.0;
  c.sats_per_plane = 22;
  c.configuration = ConstellationConfig::Delta;
  c.phasing_factor = 0.0;
  c.payloads = {ka_payload(PayloadAntenna::DirectRadiatingArray, 6, 40.0, 2.4, 4.0), s_band_patch()};
  return c;
}

AircraftSpec uav1() {
  AircraftSpec a;
  a.name = "UAV-1";
  a.model = "fixed-pitch quadcopter";
  a.antenna_position = AntennaPosition::MainBody;
  AircraftAntennaSpec ant;
  ant.type = AircraftAntennaType::PatchArrayFixed;
  ant.band = Band::Ka;
  ant.bandwidth_mhz = 30.0;
  ant.beamwidth_min_deg = ant.beamwidth_max_deg = 26.2;
  ant.max_gain_dbi = 17.33;
  a.antennas = {ant};
  return a;
}

AircraftSpec uav2() {
  AircraftSpec a;
  a.name = "UAV-2";
  a.model = "Alpha 900";
  a.antenna_position = AntennaPosition::UnderBlades;
  AircraftAntennaSpec ant;
  ant.type = AircraftAntennaType::PatchFixed;
  ant.band = Band::S;
  ant.bandwidth_mhz = 30.0;
  ant.beamwidth_min_deg = ant.beamwidth_max_deg = 89.8;
  ant.max_gain_dbi = 5.15;
  a.antennas = {ant};

  // Not published. Chosen so that a 46.5 ms revolution and the shaft offset give
  // t_int = 1.6 ms and t_lnk = 13.9 ms at the mean elevation of its flight (58.3 deg).
  blade::RotorSpec r;
  r.n_blades = 3;
  r.blade_width_m = 0.09;
  r.rotor_rpm = 60000.0 / 46.5;
  r.rotor_height_m = 0.25;
  r.shaft_offset_m = 0.5707;
  r.tip_radius_m = 1.6;
  a.rotor = r;
  return a;
}

AircraftSpec uam() {
  AircraftSpec a;
  a.name = "UAM";
  a.model = "multicopter air taxi";
  a.antenna_position = AntennaPosition::MainBody;
  AircraftAntennaSpec ant;
  ant.type = AircraftAntennaType::PhasedArraySteerable;
  ant.band = Band::Ka;
  ant.bandwidth_mhz = 400.0;
  ant.beamwidth_min_deg = 3.2;
  ant.beamwidth_max_deg = 4.4;
  ant.max_gain_dbi = 36.26;
  a.antennas = {ant};
  return a;
}

AircraftSpec heli() {
  AircraftSpec a;
  a.name = "HELI";
  a.model = "H135";
  a.antenna_position = AntennaPosition::UnderBlades;

  AircraftAntennaSpec ku;
  ku.type = AircraftAntennaType::ParabolicSteerable;
  ku.band = Band::Ku;
  ku.bandwidth_mhz = 36.0;
  ku.beamwidth_min_deg = ku.beamwidth_max_deg = 2.0;
  ku.max_gain_dbi = 41.4;

  AircraftAntennaSpec ka;
  ka.type = AircraftAntennaType::PhasedArraySteerable;
  ka.band = Band::Ka;
  ka.bandwidth_mhz = 400.0;
  ka.beamwidth_min_deg = 3.2;
  ka.beamwidth_max_deg = 4.4;
  ka.max_gain_dbi = 36.26;
  a.antennas = {ku, ka};

  // Rotor turns 3.2x slower than the Alpha 900. Offsets give t_int of about 2 ms at
  // 59 deg and 3.2 ms at 21 deg elevation.
  blade::RotorSpec r;
  r.n_blades = 4;
  r.blade_width_m = 0.30;
  r.rotor_rpm = 60000.0 / 46.5 / 3.2;
  r.rotor_height_m = 0.682;
  r.shaft_offset_m = 3.961;
  r.tip_radius_m = 5.1;
  a.rotor = r;
  return a;
}

phy::PhyConfig make_phy(std::optional<std::string> band, double carrier_ghz, double bw_mhz, int scs_khz, int n_rb,
                        phy::Modulation modulation) {
  phy::PhyConfig p;
  p.ntn_band = std::move(band);
  p.carrier_ghz = carrier_ghz;
  p.channel_bw_mhz = bw_mhz;
  p.scs_khz = scs_khz;
  p.n_rb = n_rb;
  p.mcs.modulation = modulation;
  p.mcs.code_rate = 0.5;
  p.mcs.coding_gain_db = 6.0;
  return p;
}

LoiterPattern loiter(double lat, double lon, double radius_km, double speed_m_s, double altitude_m, double hours) {
  return LoiterPattern{lat, lon, radius_km, speed_m_s, altitude_m, hours * 3600.0};
}

ScenarioSpec scenario_6() {
  ScenarioSpec s;
  s.id = "scenario-6";
  s.description = "UAV-1 uplink to LEO-2 in Ka band, 30 min survey loiter";
  s.aircraft = uav1();
  s.constellation = leo2();
  s.link_direction = LinkDirection::Uplink;
  s.band = Band::Ka;
  s.duration_h = 0.5;
  s.epoch_offset_s = 0.0;
  s.handover_threshold_deg = 35.0;
  s.flight = FlightRoute::from_loiter(loiter(52.0, 10.0, 3.0, 20.0, 120.0, s.duration_h));
  s.terminal_tx_power_dbw = 6.65;
  s.cnr_prime_bandwidth_mhz = 15.0;
  s.phy = make_phy("n511", 29.5, 50.0, 60, 66, phy::Modulation::QPSK);
  return s;
}

ScenarioSpec scenario_7() {
  ScenarioSpec s;
  s.id = "scenario-7";
  s.description = "UAV-2 (Alpha 900) uplink to LEO-1 in S band, 2 h inspection loiter";
  s.aircraft = uav2();
  s.constellation = leo1();
  s.link_direction = LinkDirection::Uplink;
  s.band = Band::S;
  s.duration_h = 2.0;
  s.epoch_offset_s = 600.0;
  s.handover_threshold_deg = 40.0;
  s.flight = FlightRoute::from_loiter(loiter(48.0, 0.0, 5.0, 25.0, 120.0, s.duration_h));
  s.terminal_tx_power_dbw = 24.95;
  s.cnr_prime_bandwidth_mhz = 5.0;
  s.phy = make_phy("n256", 2.0, 5.0, 30, 11, phy::Modulation::QPSK);
  return s;
}

ScenarioSpec scenario_11() {
  ScenarioSpec s;
  s.id = "scenario-11";
  s.description = "UAM downlink from MEO in Ka band, 1.45 h passenger shuttle";
  s.aircraft = uam();
  s.constellation = meo();
  s.link_direction = LinkDirection::Downlink;
  s.band = Band::Ka;
  s.duration_h = 1.45;
  s.epoch_offset_s = 0.0;
  s.handover_threshold_deg = 39.2;
  s.flight = FlightRoute::from_loiter(loiter(55.0, 60.0, 20.0, 50.0, 500.0, s.duration_h));
  s.terminal_noise_temperature_k = 5128.0;
  s.rain_profile = {{0.0, 0.0}, {1800.0, 0.0}, {2700.0, 10.0}, {3600.0, 0.0}};
  s.cnr_prime_bandwidth_mhz = 100.0;
  s.phy = make_phy("n510", 19.0, 400.0, 120, 264, phy::Modulation::QPSK);
  return s;
}

ScenarioSpec scenario_15a() {
  ScenarioSpec s;
  s.id = "scenario-15a";
  s.description = "HELI (H135) uplink to LEO-1 in Ka band, 2 h patrol";
  s.aircraft = heli();
  s.constellation = leo1();
  s.link_direction = LinkDirection::Uplink;
  s.band = Band::Ka;
  s.duration_h = 2.0;
  s.epoch_offset_s = 600.0;
  s.handover_threshold_deg = 39.5;
  s.flight = FlightRoute::from_loiter(loiter(48.0, 10.0, 20.0, 60.0, 1000.0, s.duration_h));
  s.rain_profile = {{0.0, 2.0}, {2400.0, 2.0}, {3600.0, 50.0}, {4800.0, 2.0}, {7200.0, 2.0}};
  s.terminal_tx_power_dbw = 5.17;
  s.cnr_prime_bandwidth_mhz = 200.0;
  s.phy = make_phy("n511", 29.5, 200.0, 120, 132, phy::Modulation::QPSK);
  return s;
}

ScenarioSpec scenario_15b() {
  ScenarioSpec s;
  s.id = "scenario-15b";
  s.description = "HELI (H135) uplink to GEO in Ku band, 2 h patrol";
  s.aircraft = heli();
  s.constellation = geo();
  s.link_direction = LinkDirection::Uplink;
  s.band = Band::Ku;
  s.duration_h = 2.0;
  s.epoch_offset_s = 0.0;
  s.handover_threshold_deg = 10.0;
  s.flight = FlightRoute::from_loiter(loiter(62.2, 0.0, 20.0, 60.0, 1000.0, s.duration_h));
  s.rain_profile = {{0.0, 2.0}, {2400.0, 10.0}, {3600.0, 25.0}, {4800.0, 10.0}, {7200.0, 2.0}};
  s.terminal_tx_power_dbw = 17.37;
  s.phy = make_phy(std::nullopt, 14.0, 30.0, 30, 78, phy::Modulation::QAM16);
  return s;
}

ScenarioSpec scenario_19() {
  ScenarioSpec s;
  s.id = "scenario-19";
  s.description = "HELI (H135) downlink from LEO-2 in Ka band, 2.5 h transfer";
  s.aircraft = heli();
  s.constellation = leo2();
  s.link_direction = LinkDirection::Downlink;
  s.band = Band::Ka;
  s.duration_h = 2.5;
  s.epoch_offset_s = 600.0;
  s.handover_threshold_deg = 34.5;
  s.flight = FlightRoute::from_loiter(loiter(52.0, 10.0, 20.0, 60.0, 1000.0, s.duration_h));
  s.rain_profile = {{0.0, 0.0}, {3300.0, 0.0}, {4500.0, 65.0}, {5700.0, 0.0}};
  s.terminal_noise_temperature_k = 39.4;
  s.phy = make_phy("n510", 19.0, 400.0, 120, 264, phy::Modulation::QAM16);
  return s;
}

}  // namespace

std::vector<AircraftSpec> builtin_aircraft() { return {uav1(), uav2(), uam(), heli()}; }

std::vector<ConstellationSpec> builtin_constellations() { return {geo(), meo(), leo1(), leo2()}; }

std::vector<ScenarioSpec> builtin_catalog() {
  return {scenario_6(), scenario_7(), scenario_11(), scenario_15a(), scenario_15b(), scenario_19()};
}

ScenarioSpec builtin_scenario(const std::string& id) {
  for (auto& s : builtin_catalog())
    if (s.id == id) return s;
  throw ReferenceError("unknown built-in scenario '" + id + "'");
}

}  // namespace ntnsim
