#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ntnsim/common.hpp"

namespace ntnsim {

namespace report {

/// Fixed-point text with `decimals` digits; "inf", "-inf" and "nan" for non-finite values.
std::string fixed(double value, int decimals);

struct Stats {
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  std::size_t count = 0;
};

class StatsAccumulator {
 public:
  void add(double value);
  std::optional<Stats> result() const;

 private:
  Stats stats_;
  double sum_ = 0.0;
};

}  // namespace report

/// Thrown when two reports do not share a schema.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Flight-level summary in the layout of the orbit and link budget table.
struct RunReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string mode;
  double step_s = 1.0;
  int n_frames = 0;

  std::optional<report::Stats> elevation_deg;
  /// Statistics of |Doppler|.
  std::optional<report::Stats> doppler_khz;
  std::optional<double> loss_avg_db;
  std::optional<report::Stats> cnr_db;
  std::optional<double> cnr_prime_bandwidth_mhz;
  std::optional<report::Stats> cnr_prime_db;
  double access_pct = 0.0;
  int handovers = 0;

  /// Mean blade figures over the simulated frames; absent without a rotor.
  std::optional<double> t_int_avg_ms;
  std::optional<double> t_lnk_avg_ms;
  std::optional<double> blade_duty_cycle_avg;

  double ber = 0.0;
  double data_rate_mbps = 0.0;
  double slot_loss_fraction = 0.0;
  std::int64_t total_slots = 0;
};

/// Every key is always present; unavailable values are null.
nlohmann::json to_json(const RunReport& report);

/// Per-field differences b - a over numeric leaves, keyed by dotted path:
/// {"field": {"a": .., "b": .., "delta": ..}}. Throws SchemaError when the key sets differ.
nlohmann::json compare(const nlohmann::json& report_a, const nlohmann::json& report_b);

}  // namespace ntnsim
