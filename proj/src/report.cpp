#include "ntnsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace ntnsim {

namespace report {

std::string fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  // Avoid "-0.000" so equal values always print the same way.
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void StatsAccumulator::add(double value) {
  if (stats_.count == 0) {
    stats_.min = stats_.max = value;
  } else {
    stats_.min = std::min(stats_.min, value);
    stats_.max = std::max(stats_.max, value);
  }
  sum_ += value;
  ++stats_.count;
}

std::optional<Stats> StatsAccumulator::result() const {
  if (stats_.count == 0) return std::nullopt;
  Stats s = stats_;
  s.avg = sum_ / static_cast<double>(s.count);
  // Rounding in the running sum must not push the mean outside the range.
  s.avg = std::clamp(s.avg, s.min, s.max);
  return s;
}

}  // namespace report

namespace {

using nlohmann::json;

json stats_json(const std::optional<report::Stats>& s) {
  if (!s) return json{{"min", nullptr}, {"max", nullptr}, {"avg", nullptr}};
  return json{{"min", s->min}, {"max", s->max}, {"avg", s->avg}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else {
    out[prefix] = j;
  }
}

}  // namespace

nlohmann::json to_json(const RunReport& r) {
  json cnr_prime = stats_json(r.cnr_prime_db);
  cnr_prime["bandwidth_mhz"] = optional_json(r.cnr_prime_bandwidth_mhz);
  return json{{"scenario_id", r.scenario_id},
              {"seed", r.seed},
              {"mode", r.mode},
              {"step_s", r.step_s},
              {"n_frames", r.n_frames},
              {"elevation_deg", stats_json(r.elevation_deg)},
              {"doppler_khz", stats_json(r.doppler_khz)},
              {"loss_avg_db", optional_json(r.loss_avg_db)},
              {"cnr_db", stats_json(r.cnr_db)},
              {"cnr_prime_db", cnr_prime},
              {"access_pct", r.access_pct},
              {"handovers", r.handovers},
              {"blade",
               {{"t_int_avg_ms", optional_json(r.t_int_avg_ms)},
                {"t_lnk_avg_ms", optional_json(r.t_lnk_avg_ms)},
                {"duty_cycle_avg", optional_json(r.blade_duty_cycle_avg)}}},
              {"ber", r.ber},
              {"data_rate_mbps", r.data_rate_mbps},
              {"slot_loss_fraction", r.slot_loss_fraction},
              {"total_slots", r.total_slots}};
}

nlohmann::json compare(const nlohmann::json& report_a, const nlohmann::json& report_b) {
  if (!report_a.is_object() || !report_b.is_object()) throw SchemaError("compare: reports must be JSON objects");
  std::map<std::string, json> a, b;
  flatten(report_a, "", a);
  flatten(report_b, "", b);

  for (const auto& [key, _] : a)
    if (!b.count(key)) throw SchemaError("compare: field '" + key + "' missing from the second report");
  for (const auto& [key, _] : b)
    if (!a.count(key)) throw SchemaError("compare: field '" + key + "' missing from the first report");

  json out = json::object();
  for (const auto& [key, va] : a) {
    const json& vb = b.at(key);
    const bool a_num = va.is_number(), b_num = vb.is_number();
    const bool a_null = va.is_null(), b_null = vb.is_null();
    if ((!a_num && !a_null) || (!b_num && !b_null)) {
      if (va.type() != vb.type()) throw SchemaError("compare: field '" + key + "' changes type");
      continue;
    }
    json delta = (a_num && b_num) ? json(vb.get<double>() - va.get<double>()) : json(nullptr);
    out[key] = json{{"a", va}, {"b", vb}, {"delta", delta}};
  }
  return out;
}

}  // namespace ntnsim
