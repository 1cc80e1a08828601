#include <algorithm>
#include <cmath>
#include <random>

#include "ntnsim/ntn_phy.hpp"

namespace ntnsim::phy {

std::uint64_t frame_seed(std::uint64_t root_seed, std::uint64_t frame_index) {
  // splitmix64 finaliser over the combined value.
  std::uint64_t z = root_seed + 0x9E3779B97F4A7C15ull * (frame_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double interpolate_cnr(std::span<const link::LinkSample> link, double time_s) {
  if (link.empty()) throw DomainError("interpolate_cnr: empty link timeline");
  if (link.size() == 1 || time_s <= link.front().time_s) return link.front().cnr_db;
  if (time_s >= link.back().time_s) return link.back().cnr_db;

  auto hi = std::upper_bound(link.begin(), link.end(), time_s,
                             [](double t, const link::LinkSample& s) { return t < s.time_s; });
  auto lo = hi - 1;
  if (!lo->served || !hi->served) return link::no_link_cnr;
  const double w = (time_s - lo->time_s) / (hi->time_s - lo->time_s);
  return lo->cnr_db + w * (hi->cnr_db - lo->cnr_db);
}

double blocked_fraction(std::span<const blade::Interval> erasures, double start_ms, double length_ms) {
  const double stop_ms = start_ms + length_ms;
  auto it = std::lower_bound(erasures.begin(), erasures.end(), start_ms,
                             [](const blade::Interval& iv, double t) { return iv.stop_ms <= t; });
  double covered = 0.0;
  for (; it != erasures.end() && it->start_ms < stop_ms; ++it)
    covered += std::min(it->stop_ms, stop_ms) - std::max(it->start_ms, start_ms);
  return std::clamp(covered / length_ms, 0.0, 1.0);
}

std::vector<SlotResult> simulate_frames(std::span<const link::LinkSample> link,
                                        std::span<const blade::Interval> erasures, const FrameSimConfig& cfg,
                                        int n_frames, std::uint64_t seed, double start_time_s,
                                        std::int64_t first_frame_index) {
  if (n_frames < 1) throw DomainError("simulate_frames: n_frames must be >= 1");
  if (link.empty()) throw DomainError("simulate_frames: empty link timeline");

  const Numerology& num = cfg.channel.numerology;
  const double slot_ms = num.slot_length_ms;
  const std::int64_t payload = transport_block_size(cfg.n_rb, cfg.mcs, cfg.overhead_fraction, num);
  // Tolerance absorbs rounding in the interval arithmetic at exact half-slot overlaps.
  constexpr double eps = 1e-9;

  std::vector<SlotResult> out;
  out.reserve(static_cast<std::size_t>(n_frames) * num.slots_per_frame);

  for (int f = 0; f < n_frames; ++f) {
    const std::int64_t frame_index = first_frame_index + f;
    std::mt19937_64 rng(frame_seed(seed, static_cast<std::uint64_t>(frame_index)));

    for (int j = 0; j < num.slots_per_frame; ++j) {
      const std::int64_t local = static_cast<std::int64_t>(f) * num.slots_per_frame + j;
      const double rel_ms = static_cast<double>(local) * slot_ms;

      SlotResult r;
      r.slot_index = frame_index * num.slots_per_frame + j;
      r.t_start_ms = start_time_s * 1e3 + rel_ms;
      r.payload_bits = payload;

      const double mid_s = start_time_s + (rel_ms + 0.5 * slot_ms) * 1e-3;
      const double link_cnr = interpolate_cnr(link, mid_s);
      r.cnr_db = std::isinf(link_cnr) ? link_cnr
                                      : link::cnr_at_bandwidth(link_cnr, link.front().bandwidth_mhz,
                                                               cfg.channel.bandwidth_mhz);

      const double blocked = blocked_fraction(erasures, rel_ms, slot_ms);
      r.erased = cfg.erasure_overlap_threshold <= 0.0 ? blocked > 0.0
                                                      : blocked >= cfg.erasure_overlap_threshold - eps;

      const double ber = awgn_ber(cfg.mcs, r.cnr_db);
      if (cfg.mode == SimMode::MonteCarlo) {
        // Draw even for erased slots so the stream does not depend on the blade pattern.
        std::binomial_distribution<std::int64_t> errors(payload, ber);
        const auto drawn = errors(rng);
        r.bit_errors = r.erased ? static_cast<double>(payload) : static_cast<double>(drawn);
        r.decoded = (!r.erased && drawn == 0) ? 1.0 : 0.0;
      } else {
        r.bit_errors = r.erased ? static_cast<double>(payload) : static_cast<double>(payload) * ber;
        r.decoded = r.erased ? 0.0 : 1.0 - block_error_probability(ber, payload);
      }
      out.push_back(r);
    }
  }
  return out;
}

Metrics aggregate(std::span<const SlotResult> results, double elapsed_s) {
  if (results.empty()) throw DomainError("aggregate: no slot results");
  if (!(elapsed_s > 0.0)) throw DomainError("aggregate: elapsed time must be > 0");

  Metrics m;
  double errors = 0.0;
  std::int64_t erased = 0;
  for (const auto& r : results) {
    m.total_bits += static_cast<double>(r.payload_bits);
    errors += r.bit_errors;
    if (r.erased) ++erased;
    else m.decoded_bits += static_cast<double>(r.payload_bits) * r.decoded;
  }
  m.total_slots = static_cast<std::int64_t>(results.size());
  m.ber = m.total_bits > 0.0 ? errors / m.total_bits : 0.0;
  m.data_rate_mbps = m.decoded_bits / elapsed_s * 1e-6;
  m.slot_loss_fraction = static_cast<double>(erased) / static_cast<double>(m.total_slots);
  return m;
}

}  // namespace ntnsim::phy
