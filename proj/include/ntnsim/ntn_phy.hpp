#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ntnsim/blade.hpp"
#include "ntnsim/common.hpp"
#include "ntnsim/link_budget.hpp"

namespace ntnsim::phy {

/// One row of the NR frame-structure table for a subcarrier spacing.
struct Numerology {
  int scs_khz = 0;
  int slots_per_frame = 0;
  double slot_length_ms = 0.0;
  int rb_min = 0;
  int rb_max = 0;
  double bw_min_mhz = 0.0;
  double bw_max_mhz = 0.0;
};

inline constexpr double frame_length_ms = 10.0;

/// Throws ConfigError for spacings other than 15/30/60/120 kHz.
Numerology numerology_for(int scs_khz);
std::span<const Numerology> numerologies();

enum class FrequencyRange { FR1, FR2 };

struct FrequencyRangeGhz {
  double low_ghz = 0.0;
  double high_ghz = 0.0;
  bool contains(double f_ghz) const { return f_ghz >= low_ghz && f_ghz <= high_ghz; }
};

struct NtnBand {
  std::string_view name;
  FrequencyRange range;
  FrequencyRangeGhz uplink;
  FrequencyRangeGhz downlink;
  std::vector<int> channel_bws_mhz;
  std::vector<int> scs_options_khz;
};

std::span<const NtnBand> ntn_bands();
/// Throws ReferenceError for unknown band names.
const NtnBand& ntn_band(std::string_view name);

class ChannelError : public ConfigError {
 public:
  enum class Reason { CarrierOutOfBand, BandwidthNotAllowed, ScsNotAllowed, UnsupportedScs, RbOutOfRange };
  ChannelError(Reason reason, const std::string& what) : ConfigError(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

struct ValidatedChannel {
  std::optional<std::string> band;
  LinkDirection direction = LinkDirection::Uplink;
  double carrier_ghz = 0.0;
  double bandwidth_mhz = 0.0;
  Numerology numerology;
};

ValidatedChannel validate_channel(const NtnBand& band, LinkDirection direction, double carrier_ghz,
                                  double bandwidth_mhz, int scs_khz);

/// Channel outside the NTN band plan (e.g. Ku comparisons): only the numerology's
/// bandwidth range is enforced.
ValidatedChannel validate_unbanded_channel(LinkDirection direction, double carrier_ghz, double bandwidth_mhz,
                                           int scs_khz);

enum class Modulation { QPSK, QAM16, QAM64 };

int bits_per_symbol(Modulation m);
std::string_view to_string(Modulation m);

struct McsConfig {
  Modulation modulation = Modulation::QPSK;
  double code_rate = 0.5;
  double coding_gain_db = 6.0;

  int bits_per_symbol() const { return phy::bits_per_symbol(modulation); }
  bool operator==(const McsConfig&) const = default;
};

void validate(const McsConfig& mcs);

/// Shared-channel payload per slot: n_rb * 12 * 14 * bits * rate * (1 - overhead), floored.
std::int64_t transport_block_size(int n_rb, const McsConfig& mcs, double overhead_fraction,
                                  const Numerology& numerology);

/// Gray-mapped hard-decision BER on AWGN for the given Eb/N0 (dB), without coding.
double uncoded_ber(Modulation m, double ebn0_db);

/// Coded BER at a CNR taken equal to Es/N0: the uncoded curve shifted by the coding gain.
double awgn_ber(const McsConfig& mcs, double cnr_db);

/// Block error probability for a transport block of `bits` at bit error rate `ber`.
double block_error_probability(double ber, std::int64_t bits);

/// Per-scenario PHY selection as stored in scenario files.
struct PhyConfig {
  /// NTN band name (n254 ... n512); empty for carriers outside the NTN band plan.
  std::optional<std::string> ntn_band;
  double carrier_ghz = 0.0;
  double channel_bw_mhz = 0.0;
  int scs_khz = 30;
  int n_rb = 0;
  McsConfig mcs;
  double overhead_fraction = 0.0;
  int n_frames = 100;
  /// Fraction of a slot that must be blocked for the slot to be lost; 0 means any overlap.
  double erasure_overlap_threshold = 0.5;

  bool operator==(const PhyConfig&) const = default;
};

ValidatedChannel validate(const PhyConfig& cfg, LinkDirection direction);

enum class SimMode { MonteCarlo, Expected };

struct SlotResult {
  std::int64_t slot_index = 0;
  double t_start_ms = 0.0;
  bool erased = false;
  /// CNR over the PHY channel bandwidth.
  double cnr_db = 0.0;
  std::int64_t payload_bits = 0;
  /// Integer in Monte-Carlo mode, expected value otherwise.
  double bit_errors = 0.0;
  /// 0/1 in Monte-Carlo mode, success probability otherwise.
  double decoded = 0.0;
};

struct FrameSimConfig {
  ValidatedChannel channel;
  McsConfig mcs;
  int n_rb = 0;
  double overhead_fraction = 0.0;
  double erasure_overlap_threshold = 0.5;
  SimMode mode = SimMode::MonteCarlo;
};

/// Seed for frame `frame_index` derived from a run's root seed.
std::uint64_t frame_seed(std::uint64_t root_seed, std::uint64_t frame_index);

/// Linear CNR interpolation on the link timeline; -inf next to outage samples.
double interpolate_cnr(std::span<const link::LinkSample> link, double time_s);

/// Fraction of [start, start + length) covered by the sorted, disjoint intervals.
double blocked_fraction(std::span<const blade::Interval> erasures, double start_ms, double length_ms);

/// Slot-level simulation of `n_frames` contiguous frames.
///
/// Slot k of the run starts at `start_time_s` + k * slot_length. Erasure intervals are
/// in ms relative to `start_time_s`, sorted and disjoint. Frame f draws from
/// frame_seed(seed, first_frame_index + f), so splitting a run into pieces with
/// matching `first_frame_index` reproduces it exactly.
std::vector<SlotResult> simulate_frames(std::span<const link::LinkSample> link,
                                        std::span<const blade::Interval> erasures, const FrameSimConfig& cfg,
                                        int n_frames, std::uint64_t seed, double start_time_s = 0.0,
                                        std::int64_t first_frame_index = 0);

struct Metrics {
  double ber = 0.0;
  double data_rate_mbps = 0.0;
  double slot_loss_fraction = 0.0;
  std::int64_t total_slots = 0;
  double total_bits = 0.0;
  double decoded_bits = 0.0;
};

Metrics aggregate(std::span<const SlotResult> results, double elapsed_s);

}  // namespace ntnsim::phy
