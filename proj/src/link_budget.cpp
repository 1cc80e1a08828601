#include "ntnsim/link_budget.hpp"

#include <algorithm>
#include <cmath>

namespace ntnsim::link {

std::vector<RainCoefficient> LossModelConfig::default_rain_table() {
  // Horizontal-polarisation power-law coefficients, 1-40 GHz.
  return {
      {1.0, 0.0000259, 0.9691}, {2.0, 0.0000847, 1.0664}, {4.0, 0.0001071, 1.6009},
      {6.0, 0.0007056, 1.5900}, {8.0, 0.004115, 1.3905},  {10.0, 0.01217, 1.2571},
      {12.0, 0.02386, 1.1825},  {15.0, 0.04481, 1.1233},  {20.0, 0.09164, 1.0568},
      {25.0, 0.1571, 0.9991},   {30.0, 0.2403, 0.9485},   {35.0, 0.3374, 0.9047},
      {40.0, 0.4431, 0.8673},
  };
}

const ZenithLoss& LossModelConfig::zenith_for(double frequency_ghz) const {
  switch (band_for_frequency(frequency_ghz)) {
    case Band::S: return s_band;
    case Band::Ku: return ku_band;
    case Band::Ka: return ka_band;
  }
  return ka_band;
}

void validate(const LossModelConfig& cfg) {
  for (const auto* z : {&cfg.s_band, &cfg.ku_band, &cfg.ka_band}) {
    if (!(z->gaseous_db >= 0.0) || !(z->cloud_db >= 0.0))
      throw ValidationError("loss_model.zenith", "zenith attenuations must be >= 0");
  }
  if (!(cfg.rain_height_km >= 0.0)) throw ValidationError("loss_model.rain_height_km", "must be >= 0");
  if (!(cfg.max_rain_path_km > 0.0)) throw ValidationError("loss_model.max_rain_path_km", "must be > 0");
  if (cfg.rain_table.empty()) throw ValidationError("loss_model.rain_table", "must not be empty");
  for (std::size_t i = 0; i < cfg.rain_table.size(); ++i) {
    const auto& c = cfg.rain_table[i];
    if (!(c.frequency_ghz > 0.0) || !(c.k > 0.0) || !(c.alpha > 0.0))
      throw ValidationError("loss_model.rain_table", "entries need positive frequency, k and alpha");
    if (i > 0 && !(c.frequency_ghz > cfg.rain_table[i - 1].frequency_ghz))
      throw ValidationError("loss_model.rain_table", "frequencies must be strictly increasing");
  }
}

Band band_for_frequency(double frequency_ghz) {
  if (frequency_ghz < 8.0) return Band::S;
  if (frequency_ghz < 17.0) return Band::Ku;
  return Band::Ka;
}

RainCoefficient rain_coefficients(const LossModelConfig& cfg, double frequency_ghz) {
  const auto& table = cfg.rain_table;
  if (frequency_ghz <= table.front().frequency_ghz) return {frequency_ghz, table.front().k, table.front().alpha};
  if (frequency_ghz >= table.back().frequency_ghz) return {frequency_ghz, table.back().k, table.back().alpha};

  auto hi = std::upper_bound(table.begin(), table.end(), frequency_ghz,
                             [](double f, const RainCoefficient& c) { return f < c.frequency_ghz; });
  auto lo = hi - 1;
  const double w = std::log(frequency_ghz / lo->frequency_ghz) / std::log(hi->frequency_ghz / lo->frequency_ghz);
  const double log_k = std::log(lo->k) + w * (std::log(hi->k) - std::log(lo->k));
  const double alpha = lo->alpha + w * (hi->alpha - lo->alpha);
  return {frequency_ghz, std::exp(log_k), alpha};
}

AtmosphericLoss atmospheric_loss(double elevation_deg, double frequency_ghz, double rain_rate_mm_h,
                                 const LossModelConfig& cfg, double station_altitude_km) {
  if (!(elevation_deg > 0.0)) throw DomainError("atmospheric_loss: elevation must be > 0");
  if (!(frequency_ghz > 0.0)) throw DomainError("atmospheric_loss: frequency must be > 0");
  if (rain_rate_mm_h < 0.0) throw DomainError("atmospheric_loss: rain rate must be >= 0");

  const double cosec = 1.0 / std::sin(deg2rad(std::min(elevation_deg, 90.0)));
  const ZenithLoss& zenith = cfg.zenith_for(frequency_ghz);

  AtmosphericLoss out;
  out.gaseous_db = zenith.gaseous_db * cosec;
  out.cloud_db = zenith.cloud_db * cosec;
  if (rain_rate_mm_h > 0.0) {
    const RainCoefficient c = rain_coefficients(cfg, frequency_ghz);
    const double specific = c.k * std::pow(rain_rate_mm_h, c.alpha);
    const double layer = std::max(0.0, cfg.rain_height_km - station_altitude_km);
    out.rain_db = specific * std::min(layer * cosec, cfg.max_rain_path_km);
  }
  return out;
}

}  // namespace ntnsim::link
