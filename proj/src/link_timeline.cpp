#include "ntnsim/link_timeline.hpp"

#include <algorithm>
#include <cmath>

#include "ntnsim/report.hpp"

namespace ntnsim {

namespace {

orbit::Vector3<double> enu_direction(double elevation_deg, double azimuth_deg) {
  const double el = deg2rad(elevation_deg);
  const double az = deg2rad(azimuth_deg);
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

}  // namespace

double pointing_offset(const AircraftAntennaSpec& antenna, const orbit::TopocentricView<double>& view,
                       double heading_deg) {
  if (antenna.steerable()) {
    const double zenith_angle = 90.0 - view.elevation_deg;
    return std::max(0.0, zenith_angle - antenna.steering_limit_deg);
  }
  const auto boresight = enu_direction(antenna.boresight_elevation_deg, antenna.boresight_azimuth_deg + heading_deg);
  const auto target = enu_direction(view.elevation_deg, view.azimuth_deg);
  const double c = std::clamp(boresight.dot(target), -1.0, 1.0);
  return rad2deg(std::acos(c));
}

std::vector<link::LinkSample> link_timeline(std::span<const AccessSample> access, const ScenarioSpec& scenario) {
  if (access.empty()) throw DomainError("link_timeline: empty access timeline");

  const AircraftAntennaSpec& antenna = scenario.terminal_antenna();
  const RfPayloadSpec& payload = scenario.payload();
  const double carrier = scenario.carrier_ghz();
  const double bandwidth = scenario.link_bandwidth_mhz();
  const bool uplink = scenario.link_direction == LinkDirection::Uplink;
  if (uplink && !scenario.terminal_tx_power_dbw)
    throw ConfigError(scenario.id + ": uplink needs terminal.tx_power_dbw");

  std::vector<link::LinkSample> out;
  out.reserve(access.size());
  for (const auto& a : access) {
    link::LinkSample s;
    s.time_s = a.time_s;
    s.bandwidth_mhz = bandwidth;
    if (!a.served()) {
      s.cnr_db = link::no_link_cnr;
      out.push_back(s);
      continue;
    }
    s.served = true;
    s.satellite_id = a.satellite_id;
    s.elevation_deg = a.view.elevation_deg;
    s.doppler_khz = a.doppler_khz;

    const double rain = rain_rate_at(scenario.rain_profile, a.time_s);
    const auto atm = link::atmospheric_loss(a.view.elevation_deg, carrier, rain, scenario.loss_model,
                                            a.aircraft.position.altitude_m * 1e-3);
    s.loss = link::LossBreakdown::from(link::fspl(a.view.slant_range_km, carrier), atm);

    const double offset = pointing_offset(antenna, a.view, a.aircraft.heading_deg);
    s.terminal_gain_dbi = link::off_boresight_gain(antenna.max_gain_dbi, antenna.beamwidth_min_deg, offset);
    const double penalty = antenna.max_gain_dbi - s.terminal_gain_dbi + scenario.link_margin_db;

    if (uplink) {
      s.tx_gain_dbi = antenna.max_gain_dbi;
      s.eirp_dbw = *scenario.terminal_tx_power_dbw + antenna.max_gain_dbi;
      s.rx_gain_over_t_db_k = payload.gt_db_k;
    } else {
      s.tx_gain_dbi = 0.0;
      s.eirp_dbw = payload.beam_eirp_dbw;
      s.rx_gain_over_t_db_k = antenna.max_gain_dbi - 10.0 * std::log10(scenario.terminal_noise_temperature_k);
    }
    s.cnr_db = link::compute_cnr(s.eirp_dbw, s.rx_gain_over_t_db_k, s.loss.total_db, penalty, bandwidth);
    out.push_back(s);
  }
  return out;
}

void write_link_csv(std::ostream& out, std::span<const link::LinkSample> samples) {
  out << "time_s,fspl_db,gas_db,rain_db,cloud_db,total_db,doppler_khz,cnr_db\n";
  for (const auto& s : samples) {
    out << report::fixed(s.time_s, 3) << ',';
    if (s.served) {
      out << report::fixed(s.loss.fspl_db, 6) << ',' << report::fixed(s.loss.gaseous_db, 6) << ','
          << report::fixed(s.loss.rain_db, 6) << ',' << report::fixed(s.loss.cloud_db, 6) << ','
          << report::fixed(s.loss.total_db, 6) << ',' << report::fixed(s.doppler_khz, 6) << ',';
    } else {
      out << ",,,,,,";
    }
    out << report::fixed(s.cnr_db, 6) << '\n';
  }
}

}  // namespace ntnsim
