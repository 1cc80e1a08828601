#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ntnsim/common.hpp"

namespace ntnsim::link {

/// Rain specific-attenuation coefficients gamma = k * R^alpha at one frequency.
struct RainCoefficient {
  double frequency_ghz = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  bool operator==(const RainCoefficient&) const = default;
};

/// Zenith gaseous and cloud attenuation for one band, dB.
struct ZenithLoss {
  double gaseous_db = 0.0;
  double cloud_db = 0.0;
  bool operator==(const ZenithLoss&) const = default;
};

/// Simplified Earth-space impairment model: cosecant-scaled zenith gas/cloud loss plus
/// power-law rain over a slant path through a uniform rain layer.
struct LossModelConfig {
  ZenithLoss s_band{0.035, 0.0};
  ZenithLoss ku_band{0.08, 0.05};
  ZenithLoss ka_band{0.25, 0.2};
  /// Rain layer top above mean sea level, km.
  double rain_height_km = 3.0;
  /// Upper bound on the slant path through rain, km.
  double max_rain_path_km = 10.0;
  /// Sorted by frequency; log-log interpolated for k, log-linear for alpha.
  std::vector<RainCoefficient> rain_table = default_rain_table();

  const ZenithLoss& zenith_for(double frequency_ghz) const;

  static std::vector<RainCoefficient> default_rain_table();
  bool operator==(const LossModelConfig&) const = default;
};

void validate(const LossModelConfig& cfg);

struct AtmosphericLoss {
  double gaseous_db = 0.0;
  double rain_db = 0.0;
  double cloud_db = 0.0;
};

struct LossBreakdown {
  double fspl_db = 0.0;
  double gaseous_db = 0.0;
  double rain_db = 0.0;
  double cloud_db = 0.0;
  double total_db = 0.0;

  static LossBreakdown from(double fspl_db, const AtmosphericLoss& atm) {
    LossBreakdown b{fspl_db, atm.gaseous_db, atm.rain_db, atm.cloud_db, 0.0};
    b.total_db = b.fspl_db + b.gaseous_db + b.rain_db + b.cloud_db;
    return b;
  }
};

/// One point of the link timeline. cnr_db is no_link_cnr when no satellite serves.
struct LinkSample {
  double time_s = 0.0;
  bool served = false;
  int satellite_id = -1;
  double elevation_deg = 0.0;
  double doppler_khz = 0.0;
  LossBreakdown loss;
  double eirp_dbw = 0.0;
  /// Aircraft antenna gain after pointing, dBi.
  double terminal_gain_dbi = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_over_t_db_k = 0.0;
  double cnr_db = 0.0;
  double bandwidth_mhz = 0.0;
};

/// Back-lobe floor applied by off_boresight_gain unless overridden.
inline constexpr double default_gain_floor_dbi = -10.0;

/// -inf marks a sample without a serving satellite.
inline constexpr double no_link_cnr = -std::numeric_limits<double>::infinity();

/// Band class used to pick zenith attenuations: below 8 GHz is S, below 17 GHz Ku, else Ka.
Band band_for_frequency(double frequency_ghz);

/// Free-space path loss, dB.
template <typename Scalar>
Scalar fspl(Scalar distance_km, Scalar frequency_ghz) {
  using std::log10;
  if (!(distance_km > Scalar(0)) || !(frequency_ghz > Scalar(0)))
    throw DomainError("fspl: distance and frequency must be > 0");
  return Scalar(92.45) + Scalar(20) * log10(distance_km) + Scalar(20) * log10(frequency_ghz);
}

/// k, alpha at the given frequency from the configured table.
RainCoefficient rain_coefficients(const LossModelConfig& cfg, double frequency_ghz);

/// Gas, rain and cloud attenuation on a slant path. `station_altitude_km` lowers the
/// effective rain layer thickness.
AtmosphericLoss atmospheric_loss(double elevation_deg, double frequency_ghz, double rain_rate_mm_h,
                                 const LossModelConfig& cfg, double station_altitude_km = 0.0);

/// Parabolic main-lobe gain, max_gain - 12 (offset/hpbw)^2, floored at `floor_dbi`.
template <typename Scalar>
Scalar off_boresight_gain(Scalar max_gain_dbi, Scalar hpbw_deg, Scalar offset_deg,
                          Scalar floor_dbi = Scalar(default_gain_floor_dbi)) {
  if (!(hpbw_deg > Scalar(0))) throw DomainError("off_boresight_gain: hpbw must be > 0");
  if (offset_deg < Scalar(0)) throw DomainError("off_boresight_gain: offset must be >= 0");
  const Scalar ratio = offset_deg / hpbw_deg;
  const Scalar g = max_gain_dbi - Scalar(12) * ratio * ratio;
  return g < floor_dbi ? floor_dbi : g;
}

/// Carrier-to-noise ratio over `bandwidth_mhz`, dB.
template <typename Scalar>
Scalar compute_cnr(Scalar eirp_dbw, Scalar gain_over_t_db_k, Scalar loss_total_db, Scalar pointing_penalty_db,
                   Scalar bandwidth_mhz) {
  using std::log10;
  if (!(bandwidth_mhz > Scalar(0))) throw DomainError("compute_cnr: bandwidth must be > 0");
  return eirp_dbw - pointing_penalty_db + gain_over_t_db_k - loss_total_db + Scalar(constants::boltzmann_db) -
         Scalar(10) * log10(bandwidth_mhz * Scalar(1e6));
}

/// CNR over a narrower channel: cnr + 10 log10(B / B').
template <typename Scalar>
Scalar rescale_cnr(Scalar cnr_db, Scalar bandwidth_mhz, Scalar reduced_bandwidth_mhz) {
  using std::log10;
  if (!(bandwidth_mhz > Scalar(0)) || !(reduced_bandwidth_mhz > Scalar(0)))
    throw DomainError("rescale_cnr: bandwidths must be > 0");
  if (reduced_bandwidth_mhz > bandwidth_mhz)
    throw DomainError("rescale_cnr: reduced bandwidth exceeds the original");
  return cnr_db + Scalar(10) * log10(bandwidth_mhz / reduced_bandwidth_mhz);
}

/// Same shift as rescale_cnr without the ordering restriction; used to move a CNR
/// between the link budget bandwidth and the PHY channel bandwidth.
inline double cnr_at_bandwidth(double cnr_db, double from_mhz, double to_mhz) {
  return cnr_db + 10.0 * std::log10(from_mhz / to_mhz);
}

}  // namespace ntnsim::link
