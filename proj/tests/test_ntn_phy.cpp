#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ntnsim/blade.hpp"
#include "ntnsim/ntn_phy.hpp"

using namespace ntnsim;
using namespace ntnsim::phy;

namespace {

// Gaussian tail by composite Simpson integration of the density; no erfc.
double q_function(double x) {
  const double upper = x + 40.0;
  const int n = 20000;
  const double h = (upper - x) / n;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * constants::pi); };
  double sum = pdf(x) + pdf(upper);
  for (int i = 1; i < n; ++i) sum += pdf(x + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Symbol-level Gray-mapped square QAM over AWGN with hard decisions, one PAM axis at a time.
struct SymbolSim {
  double ber;
  double n_bits;
};

SymbolSim simulate_qam(int bits_per_symbol, double ebn0_db, std::int64_t n_symbols, std::uint64_t seed) {
  const int axis_bits = bits_per_symbol / 2;
  const int levels = 1 << axis_bits;
  const double es = 2.0 * (levels * levels - 1) / 3.0;
  const double n0 = es / bits_per_symbol / std::pow(10.0, ebn0_db / 10.0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, levels - 1);
  std::normal_distribution<double> noise(0.0, std::sqrt(n0 / 2.0));
  auto gray = [](unsigned i) { return i ^ (i >> 1); };

  std::int64_t errors = 0;
  for (std::int64_t s = 0; s < n_symbols; ++s) {
    for (int axis = 0; axis < 2; ++axis) {
      const int i = pick(rng);
      const double rx = 2.0 * i - (levels - 1) + noise(rng);
      int j = static_cast<int>(std::lround((rx + (levels - 1)) / 2.0));
      j = std::clamp(j, 0, levels - 1);
      errors += std::popcount(gray(static_cast<unsigned>(i)) ^ gray(static_cast<unsigned>(j)));
    }
  }
  const double n_bits = static_cast<double>(n_symbols) * bits_per_symbol;
  return {static_cast<double>(errors) / n_bits, n_bits};
}

FrameSimConfig config(int scs_khz, double bw_mhz, int n_rb, Modulation m = Modulation::QPSK) {
  FrameSimConfig cfg;
  cfg.channel = validate_unbanded_channel(LinkDirection::Uplink, 2.0, bw_mhz, scs_khz);
  cfg.mcs.modulation = m;
  cfg.n_rb = n_rb;
  return cfg;
}

std::vector<link::LinkSample> constant_link(double cnr_db, double bw_mhz) {
  link::LinkSample s;
  s.served = true;
  s.satellite_id = 0;
  s.cnr_db = cnr_db;
  s.bandwidth_mhz = bw_mhz;
  return {s};
}

}  // namespace

TEST_CASE("numerology table") {
  for (const auto& n : numerologies()) {
    CAPTURE(n.scs_khz);
    CHECK(n.slots_per_frame * n.slot_length_ms == doctest::Approx(frame_length_ms).epsilon(1e-15));
  }
  const auto n30 = numerology_for(30);
  CHECK(n30.slots_per_frame == 20);
  CHECK(n30.slot_length_ms == 0.5);
  CHECK(n30.rb_min == 11);
  CHECK(n30.rb_max == 78);
  const auto n120 = numerology_for(120);
  CHECK(n120.slots_per_frame == 80);
  CHECK(n120.rb_max == 264);
  CHECK(n120.bw_max_mhz == 400.0);
  try {
    numerology_for(45);
    FAIL("expected ChannelError");
  } catch (const ChannelError& e) {
    CHECK(e.reason() == ChannelError::Reason::UnsupportedScs);
  }
}

TEST_CASE("band plan lookups") {
  CHECK(ntn_bands().size() == 6);
  CHECK(ntn_band("n256").uplink.low_ghz == 1.98);
  CHECK(ntn_band("n510").range == FrequencyRange::FR2);
  CHECK_THROWS_AS(ntn_band("n999"), ReferenceError);

  CHECK_NOTHROW(validate_channel(ntn_band("n256"), LinkDirection::Uplink, 2.0, 5.0, 30));
  CHECK_NOTHROW(validate_channel(ntn_band("n510"), LinkDirection::Downlink, 19.0, 400.0, 120));

  auto reason_of = [](auto&& fn) {
    try {
      fn();
    } catch (const ChannelError& e) {
      return e.reason();
    }
    FAIL("expected ChannelError");
    return ChannelError::Reason::UnsupportedScs;
  };
  CHECK(reason_of([] { validate_channel(ntn_band("n254"), LinkDirection::Uplink, 1.62, 30.0, 30); }) ==
        ChannelError::Reason::BandwidthNotAllowed);
  CHECK(reason_of([] { validate_channel(ntn_band("n511"), LinkDirection::Uplink, 29.0, 100.0, 15); }) ==
        ChannelError::Reason::ScsNotAllowed);
  CHECK(reason_of([] { validate_channel(ntn_band("n256"), LinkDirection::Downlink, 2.0, 5.0, 30); }) ==
        ChannelError::Reason::CarrierOutOfBand);
}

TEST_CASE("band edges are inclusive in both directions") {
  for (const auto& band : ntn_bands()) {
    const double bw = band.channel_bws_mhz.front();
    const int scs = band.scs_options_khz.front();
    for (auto dir : {LinkDirection::Uplink, LinkDirection::Downlink}) {
      const auto& r = dir == LinkDirection::Uplink ? band.uplink : band.downlink;
      CAPTURE(band.name);
      CHECK_NOTHROW(validate_channel(band, dir, r.low_ghz, bw, scs));
      CHECK_NOTHROW(validate_channel(band, dir, r.high_ghz, bw, scs));
      CHECK_THROWS_AS(validate_channel(band, dir, std::nextafter(r.low_ghz, 0.0), bw, scs), ChannelError);
      CHECK_THROWS_AS(validate_channel(band, dir, std::nextafter(r.high_ghz, 100.0), bw, scs), ChannelError);
    }
  }
}

TEST_CASE("transport block size") {
  McsConfig qpsk;
  const auto n15 = numerology_for(15);
  CHECK(transport_block_size(25, qpsk, 0.0, n15) == 4200);
  CHECK(transport_block_size(50, qpsk, 0.0, n15) == 8400);
  CHECK(transport_block_size(25, qpsk, 1.0, n15) == 0);
  McsConfig qam64{Modulation::QAM64, 0.75, 6.0};
  CHECK(transport_block_size(25, qam64, 0.1, n15) == static_cast<std::int64_t>(std::floor(4200.0 * 3.0 * 1.5 * 0.9)));
  CHECK_THROWS_AS(transport_block_size(24, qpsk, 0.0, n15), ChannelError);
  CHECK_THROWS_AS(transport_block_size(161, qpsk, 0.0, n15), ChannelError);
}

TEST_CASE("uncoded BER against the Q-function") {
  // QPSK: Q(sqrt(2 Eb/N0)).
  for (double ebn0 : {0.0, 3.0, 6.0, 9.6, 12.0}) {
    CAPTURE(ebn0);
    const double expected = q_function(std::sqrt(2.0 * std::pow(10.0, ebn0 / 10.0)));
    CHECK(uncoded_ber(Modulation::QPSK, ebn0) == doctest::Approx(expected).epsilon(1e-8));
  }
  const double at_9_6 = uncoded_ber(Modulation::QPSK, 9.6);
  CHECK(at_9_6 == doctest::Approx(9.7362e-6).epsilon(1e-4));
  CHECK(at_9_6 / 1e-5 < 1.3);
  CHECK(1e-5 / at_9_6 < 1.3);

  // 16QAM Gray: (3 Q(x) + 2 Q(3x) - Q(5x)) / 4 with x = sqrt(4/5 Eb/N0).
  for (double ebn0 : {2.0, 6.0, 10.0}) {
    const double x = std::sqrt(0.8 * std::pow(10.0, ebn0 / 10.0));
    const double expected = (3.0 * q_function(x) + 2.0 * q_function(3.0 * x) - q_function(5.0 * x)) / 4.0;
    CHECK(uncoded_ber(Modulation::QAM16, ebn0) == doctest::Approx(expected).epsilon(1e-8));
  }

  CHECK(uncoded_ber(Modulation::QPSK, -std::numeric_limits<double>::infinity()) == 0.5);
  CHECK(uncoded_ber(Modulation::QAM64, std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("uncoded BER against a symbol-level simulation") {
  struct Point {
    Modulation m;
    double ebn0;
  };
  std::uint64_t seed = 100;
  for (const Point p : {Point{Modulation::QPSK, 4.0}, Point{Modulation::QPSK, 7.0}, Point{Modulation::QAM16, 6.0},
                        Point{Modulation::QAM16, 9.0}, Point{Modulation::QAM64, 10.0}, Point{Modulation::QAM64, 13.0}}) {
    CAPTURE(static_cast<int>(p.m));
    CAPTURE(p.ebn0);
    const auto sim = simulate_qam(bits_per_symbol(p.m), p.ebn0, 200000, ++seed);
    const double analytic = uncoded_ber(p.m, p.ebn0);
    const double sigma = std::sqrt(analytic * (1.0 - analytic) / sim.n_bits);
    CHECK(std::abs(sim.ber - analytic) <= 3.0 * sigma);
  }
}

TEST_CASE("coded BER ordering") {
  const McsConfig qpsk{Modulation::QPSK, 0.5, 6.0};
  const McsConfig qam16{Modulation::QAM16, 0.5, 6.0};
  const McsConfig qam64{Modulation::QAM64, 0.5, 6.0};
  for (double cnr = -10.0; cnr <= 20.0; cnr += 0.5) {
    CHECK(awgn_ber(qam16, cnr) >= awgn_ber(qpsk, cnr));
    CHECK(awgn_ber(qam64, cnr) >= awgn_ber(qam16, cnr));
    CHECK(awgn_ber(qpsk, cnr + 0.5) <= awgn_ber(qpsk, cnr));
  }
  CHECK(awgn_ber(qpsk, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(awgn_ber(qpsk, link::no_link_cnr) == 0.5);
  CHECK_THROWS_AS(awgn_ber(qpsk, std::nan("")), DomainError);
}

TEST_CASE("block error probability") {
  CHECK(block_error_probability(1e-3, 1000) == doctest::Approx(1.0 - std::pow(0.999, 1000)));
  CHECK(block_error_probability(0.0, 1000) == 0.0);
  CHECK(block_error_probability(0.1, 0) == 0.0);
  CHECK(block_error_probability(1.0, 10) == 1.0);
}

TEST_CASE("Monte-Carlo bit errors follow the analytic BER") {
  struct Point {
    Modulation m;
    double cnr;
  };
  for (const Point p : {Point{Modulation::QPSK, -3.0}, Point{Modulation::QAM16, 4.0}, Point{Modulation::QAM64, 9.0}}) {
    auto cfg = config(30, 5.0, 11, p.m);
    const auto link = constant_link(p.cnr, 5.0);
    const auto slots = simulate_frames(link, {}, cfg, 40, 77);
    double errors = 0.0, bits = 0.0;
    for (const auto& s : slots) {
      errors += s.bit_errors;
      bits += static_cast<double>(s.payload_bits);
    }
    REQUIRE(bits >= 1e6);
    const double p_hat = errors / bits;
    const double expected = awgn_ber(cfg.mcs, p.cnr);
    CAPTURE(expected);
    CHECK(std::abs(p_hat - expected) <= 3.0 * std::sqrt(expected * (1.0 - expected) / bits));
  }
}

TEST_CASE("blade erasures give three lost slots then twenty-eight clear ones") {
  const auto cfg = config(30, 5.0, 11);
  const auto link = constant_link(40.0, 5.0);
  blade::BladeSchedule sched;
  sched.t_int_ms = 1.6;
  sched.t_lnk_ms = 13.9;
  const int frames = 100;
  const auto erasures = blade::erasure_schedule(sched, frames * frame_length_ms);

  SUBCASE("majority overlap rule") {
    const auto slots = simulate_frames(link, erasures, cfg, frames, 1);
    REQUIRE(slots.size() == 2000);
    for (std::size_t i = 0; i + 31 <= slots.size(); i += 31) {
      for (std::size_t j = 0; j < 31; ++j) CHECK(slots[i + j].erased == (j < 3));
    }
    const auto m = aggregate(slots, frames * 0.01);
    CHECK(m.slot_loss_fraction == doctest::Approx(3.0 / 31.0).epsilon(0.01));
    CHECK(m.ber == doctest::Approx(m.slot_loss_fraction).epsilon(1e-12));
  }
  SUBCASE("any-overlap rule") {
    auto any = cfg;
    any.erasure_overlap_threshold = 0.0;
    const auto slots = simulate_frames(link, erasures, any, frames, 1);
    for (std::size_t j = 0; j < 31; ++j) CHECK(slots[j].erased == (j < 4));
  }
}

TEST_CASE("erased slots lose their whole payload") {
  const auto cfg = config(30, 5.0, 11);
  const auto link = constant_link(0.0, 5.0);
  const std::vector<blade::Interval> blocked{{2.0, 7.0}};
  const auto slots = simulate_frames(link, blocked, cfg, 2, 5);
  for (const auto& s : slots) {
    CHECK(s.bit_errors <= static_cast<double>(s.payload_bits));
    CHECK(s.bit_errors >= 0.0);
    if (s.erased) {
      CHECK(s.bit_errors == static_cast<double>(s.payload_bits));
      CHECK(s.decoded == 0.0);
    }
  }
  CHECK(slots[4].erased);
  CHECK(slots[13].erased);
  CHECK_FALSE(slots[14].erased);
}

TEST_CASE("fully blocked and fully clear spans") {
  const auto cfg = config(30, 5.0, 11);
  const auto clear = simulate_frames(constant_link(std::numeric_limits<double>::infinity(), 5.0), {}, cfg, 3, 1);
  const auto m = aggregate(clear, 0.03);
  CHECK(m.ber == 0.0);
  CHECK(m.slot_loss_fraction == 0.0);
  CHECK(m.data_rate_mbps == doctest::Approx(60.0 * 1848.0 / 0.03 * 1e-6));

  const std::vector<blade::Interval> all{{0.0, 30.0}};
  const auto blocked = simulate_frames(constant_link(30.0, 5.0), all, cfg, 3, 1);
  const auto mb = aggregate(blocked, 0.03);
  CHECK(mb.ber == 1.0);
  CHECK(mb.data_rate_mbps == 0.0);
  CHECK(mb.slot_loss_fraction == 1.0);
}

TEST_CASE("aggregate") {
  std::vector<SlotResult> slots(100);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    slots[i].payload_bits = 1000;
    slots[i].decoded = 1.0;
    if (i < 10) {
      slots[i].erased = true;
      slots[i].bit_errors = 1000;
      slots[i].decoded = 0.0;
    }
  }
  const auto m = aggregate(slots, 0.05);
  CHECK(m.ber == doctest::Approx(0.1));
  CHECK(m.slot_loss_fraction == doctest::Approx(0.1));
  CHECK(m.data_rate_mbps == doctest::Approx(90 * 1000 / 0.05 * 1e-6));
  CHECK(m.total_slots == 100);

  std::vector<SlotResult> period(31);
  for (int i = 0; i < 3; ++i) period[i].erased = true;
  for (auto& s : period) s.payload_bits = 1;
  CHECK(aggregate(period, 1.0).slot_loss_fraction == doctest::Approx(0.0968).epsilon(1e-3));

  CHECK_THROWS_AS(aggregate({}, 1.0), DomainError);
  CHECK_THROWS_AS(aggregate(slots, 0.0), DomainError);
}

TEST_CASE("determinism and seeds") {
  const auto cfg = config(30, 5.0, 11);
  const auto link = constant_link(-3.0, 5.0);
  const auto a = simulate_frames(link, {}, cfg, 5, 9);
  const auto b = simulate_frames(link, {}, cfg, 5, 9);
  const auto c = simulate_frames(link, {}, cfg, 5, 10);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].bit_errors == b[i].bit_errors);
    if (a[i].bit_errors != c[i].bit_errors) differs = true;
  }
  CHECK(differs);

  // Splitting a run on frame boundaries reproduces it.
  const auto head = simulate_frames(link, {}, cfg, 2, 9, 0.0, 0);
  const auto tail = simulate_frames(link, {}, cfg, 3, 9, 0.02, 2);
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(head[i].bit_errors == a[i].bit_errors);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    CHECK(tail[i].bit_errors == a[head.size() + i].bit_errors);
    CHECK(tail[i].slot_index == a[head.size() + i].slot_index);
  }
  CHECK(frame_seed(1, 0) != frame_seed(1, 1));
  CHECK(frame_seed(1, 0) != frame_seed(2, 0));
}

TEST_CASE("expected-value mode is monotone in CNR") {
  auto cfg = config(30, 5.0, 11);
  cfg.mode = SimMode::Expected;
  double prev_ber = 1.0, prev_rate = -1.0;
  for (double cnr = -10.0; cnr <= 10.0; cnr += 0.5) {
    const auto m = aggregate(simulate_frames(constant_link(cnr, 5.0), {}, cfg, 1, 1), 0.01);
    CHECK(m.ber <= prev_ber);
    CHECK(m.data_rate_mbps >= prev_rate);
    prev_ber = m.ber;
    prev_rate = m.data_rate_mbps;
  }
}

TEST_CASE("slot loss tracks the blade duty cycle") {
  const auto cfg = config(30, 5.0, 11);
  const auto link = constant_link(40.0, 5.0);

  SUBCASE("slot-aligned blockages") {
    blade::BladeSchedule s;
    s.n_blades = 4;
    s.t_int_ms = 1.5;
    s.t_lnk_ms = 13.5;
    s.rotation_time_ms = 4 * 15.0;
    const int frames = 60;
    const auto slots = simulate_frames(link, blade::erasure_schedule(s, frames * 10.0), cfg, frames, 1);
    const auto m = aggregate(slots, frames * 0.01);
    CHECK(std::abs(m.slot_loss_fraction - s.duty_cycle()) <= 1.0 / m.total_slots);
  }
  SUBCASE("property: arbitrary schedules and phases") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> tint(0.2, 4.0), tlnk(2.0, 40.0), phase(0.0, 50.0);
    for (int i = 0; i < 100; ++i) {
      blade::BladeSchedule s;
      s.n_blades = 1;
      s.t_int_ms = tint(rng);
      s.t_lnk_ms = tlnk(rng);
      s.rotation_time_ms = s.period_ms();
      const int frames = 20;
      const auto iv = blade::erasure_schedule(s, frames * 10.0, phase(rng));
      const auto m = aggregate(simulate_frames(link, iv, cfg, frames, 1), frames * 0.01);
      // Up to one slot of rounding per blockage, plus the blockage cut off at the end of the span.
      const double bound = (static_cast<double>(iv.size()) + s.t_int_ms / 0.5) / static_cast<double>(m.total_slots);
      CHECK(std::abs(m.slot_loss_fraction - s.duty_cycle()) <= bound);
    }
  }
}

TEST_CASE("PHY configuration validation") {
  PhyConfig cfg;
  cfg.ntn_band = "n256";
  cfg.carrier_ghz = 2.0;
  cfg.channel_bw_mhz = 5.0;
  cfg.scs_khz = 30;
  cfg.n_rb = 11;
  CHECK(validate(cfg, LinkDirection::Uplink).numerology.scs_khz == 30);
  CHECK_THROWS_AS(validate(cfg, LinkDirection::Downlink), ChannelError);
  auto bad = cfg;
  bad.n_frames = 0;
  CHECK_THROWS_AS(validate(bad, LinkDirection::Uplink), ValidationError);
  bad = cfg;
  bad.mcs.code_rate = 1.0;
  CHECK_THROWS_AS(validate(bad, LinkDirection::Uplink), ValidationError);
  bad = cfg;
  bad.n_rb = 100;
  CHECK_THROWS_AS(validate(bad, LinkDirection::Uplink), ChannelError);
}
