#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "ntnsim/access.hpp"
#include "ntnsim/link_budget.hpp"
#include "ntnsim/scenario.hpp"

namespace ntnsim {

/// Angle between the aircraft antenna boresight and the satellite direction.
///
/// Steerable antennas track the satellite: 0 while its zenith angle is within the
/// steering limit, the excess beyond it otherwise. Fixed antennas point along their
/// body-frame boresight, level flight assumed; `heading_deg` turns the body frame.
double pointing_offset(const AircraftAntennaSpec& antenna, const orbit::TopocentricView<double>& view,
                       double heading_deg = 0.0);

/// Per-sample losses and CNR over the terminal antenna bandwidth. Outage samples carry
/// cnr = no_link_cnr and zero losses.
std::vector<link::LinkSample> link_timeline(std::span<const AccessSample> access, const ScenarioSpec& scenario);

/// Columns: time_s, fspl_db, gas_db, rain_db, cloud_db, total_db, doppler_khz, cnr_db.
void write_link_csv(std::ostream& out, std::span<const link::LinkSample> samples);

}  // namespace ntnsim
