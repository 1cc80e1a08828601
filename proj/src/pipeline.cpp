#include "ntnsim/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ntnsim/link_timeline.hpp"

namespace ntnsim {

namespace {

// Schedules are rebuilt only when the interference time moves by more than this.
constexpr double schedule_refresh_fraction = 0.05;

std::string slot_value(double v) { return report::fixed(v, v == std::floor(v) ? 0 : 6); }

bool keeps_schedule(const BladeSample& active, const BladeSample& next) {
  if (active.continuous || next.continuous) return active.continuous == next.continuous;
  const double a = active.schedule.t_int_ms;
  const double b = next.schedule.t_int_ms;
  if (a == 0.0 || b == 0.0) return a == b;
  return std::abs(b - a) <= schedule_refresh_fraction * a;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

phy::FrameSimConfig frame_config(const ScenarioSpec& scenario, phy::SimMode mode) {
  phy::FrameSimConfig cfg;
  cfg.channel = phy::validate(scenario.phy, scenario.link_direction);
  cfg.mcs = scenario.phy.mcs;
  cfg.n_rb = scenario.phy.n_rb;
  cfg.overhead_fraction = scenario.phy.overhead_fraction;
  cfg.erasure_overlap_threshold = scenario.phy.erasure_overlap_threshold;
  cfg.mode = mode;
  return cfg;
}

std::optional<BladeSample> blade_state(const AircraftSpec& aircraft, double elevation_deg,
                                       double relative_azimuth_deg) {
  if (!aircraft.rotor) return std::nullopt;
  const blade::RotorSpec& rotor = *aircraft.rotor;

  BladeSample b;
  b.elevation_deg = elevation_deg;
  b.d_rotor_m = blade::interference_point(rotor, elevation_deg, relative_azimuth_deg);
  if (!b.d_rotor_m) {
    b.schedule = blade::clear_schedule(rotor);
    return b;
  }
  if (*b.d_rotor_m <= 0.0) {
    // Beam through the hub: blocked the whole time.
    b.phi_deg = 360.0;
    b.continuous = true;
    b.schedule = blade::clear_schedule(rotor);
    return b;
  }
  const blade::BladeGeometry geom = blade::geometry(rotor, *b.d_rotor_m);
  b.phi_deg = geom.phi_deg;
  if (blade::occludes_continuously(rotor.n_blades, rotor.rotor_rpm, geom.phi_deg)) {
    b.continuous = true;
    b.schedule = blade::clear_schedule(rotor);
    return b;
  }
  b.schedule = blade::schedule(rotor, geom);
  return b;
}

std::vector<blade::Interval> frame_erasures(const BladeSample& blades, double initial_phase_ms, double start_ms,
                                            double span_ms) {
  if (blades.continuous) return {blade::Interval{0.0, span_ms}};
  const double period = blades.schedule.period_ms();
  if (!(blades.schedule.t_int_ms > 0.0) || !(period > 0.0)) return {};
  // Blade edges sit at initial_phase + k * period in absolute time.
  const double phase = std::fmod(initial_phase_ms - std::fmod(start_ms, period), period);
  return blade::erasure_schedule(blades.schedule, span_ms, phase);
}

RunResult run(const ScenarioSpec& scenario, const RunOptions& options) {
  validate(scenario);
  if (!(options.step_s > 0.0)) throw ValidationError("step_s", "must be > 0");
  const int n_frames = options.n_frames.value_or(scenario.phy.n_frames);
  if (n_frames < 1) throw ValidationError("n_frames", "must be >= 1");

  RunResult result;
  result.scenario = scenario;
  result.options = options;
  result.access = build_access_timeline(scenario, options.step_s);
  if (result.access.samples.empty()) throw SimulationError(scenario.id + ": flight shorter than one time step");
  result.link = link_timeline(result.access.samples, scenario);

  const phy::FrameSimConfig cfg = frame_config(scenario, options.mode);
  const double initial_phase = scenario.aircraft.rotor ? scenario.aircraft.rotor->initial_phase_ms : 0.0;
  const double duration = scenario.duration_s();
  const auto& access = result.access.samples;

  std::optional<BladeSample> active;
  result.slots.reserve(static_cast<std::size_t>(n_frames) * cfg.channel.numerology.slots_per_frame);

  for (int k = 0; k < n_frames; ++k) {
    const double t = (k + 0.5) * duration / n_frames;
    const auto idx = std::min(access.size() - 1, static_cast<std::size_t>(t / options.step_s));
    const AccessSample& a = access[idx];

    std::vector<blade::Interval> erasures;
    if (scenario.aircraft.rotor && a.served()) {
      auto next = blade_state(scenario.aircraft, a.view.elevation_deg, a.view.azimuth_deg - a.aircraft.heading_deg);
      if (!active || !keeps_schedule(*active, *next)) active = next;
      BladeSample used = *active;
      used.time_s = t;
      used.elevation_deg = a.view.elevation_deg;
      erasures = frame_erasures(used, initial_phase, t * 1e3, phy::frame_length_ms);
      result.blades.push_back(used);
    }

    auto frame = phy::simulate_frames(result.link, erasures, cfg, 1, options.seed, t, k);
    result.slots.insert(result.slots.end(), frame.begin(), frame.end());
  }

  // Report.
  RunReport& r = result.report;
  r.scenario_id = scenario.id;
  r.seed = options.seed;
  r.mode = options.mode == phy::SimMode::MonteCarlo ? "mc" : "expected";
  r.step_s = options.step_s;
  r.n_frames = n_frames;
  r.access_pct = result.access.access_percentage();
  r.handovers = result.access.handovers;

  report::StatsAccumulator elevation, doppler, cnr, cnr_prime, loss;
  const double bw = scenario.link_bandwidth_mhz();
  for (const auto& s : result.link) {
    if (!s.served) continue;
    elevation.add(s.elevation_deg);
    doppler.add(std::abs(s.doppler_khz));
    loss.add(s.loss.total_db);
    cnr.add(s.cnr_db);
    if (scenario.cnr_prime_bandwidth_mhz)
      cnr_prime.add(link::rescale_cnr(s.cnr_db, bw, *scenario.cnr_prime_bandwidth_mhz));
  }
  r.elevation_deg = elevation.result();
  r.doppler_khz = doppler.result();
  if (auto l = loss.result()) r.loss_avg_db = l->avg;
  r.cnr_db = cnr.result();
  r.cnr_prime_bandwidth_mhz = scenario.cnr_prime_bandwidth_mhz;
  r.cnr_prime_db = cnr_prime.result();

  if (!result.blades.empty()) {
    double t_int = 0.0, t_lnk = 0.0, duty = 0.0;
    for (const auto& b : result.blades) {
      t_int += b.schedule.t_int_ms;
      t_lnk += b.continuous ? 0.0 : b.schedule.t_lnk_ms;
      duty += b.continuous ? 1.0 : b.schedule.duty_cycle();
    }
    const double n = static_cast<double>(result.blades.size());
    r.t_int_avg_ms = t_int / n;
    r.t_lnk_avg_ms = t_lnk / n;
    r.blade_duty_cycle_avg = duty / n;
  }

  const auto metrics = phy::aggregate(result.slots, n_frames * phy::frame_length_ms * 1e-3);
  r.ber = metrics.ber;
  r.data_rate_mbps = metrics.data_rate_mbps;
  r.slot_loss_fraction = metrics.slot_loss_fraction;
  r.total_slots = metrics.total_slots;
  return result;
}

void write_slots_csv(std::ostream& out, std::span<const phy::SlotResult> slots) {
  out << "slot_index,t_start_ms,erased,cnr_db,payload_bits,bit_errors,decoded\n";
  for (const auto& s : slots) {
    out << s.slot_index << ',' << report::fixed(s.t_start_ms, 4) << ',' << (s.erased ? 1 : 0) << ','
        << report::fixed(s.cnr_db, 6) << ',' << s.payload_bits << ',' << slot_value(s.bit_errors) << ','
        << slot_value(s.decoded) << '\n';
  }
}

void write_blades_csv(std::ostream& out, std::span<const BladeSample> blades) {
  out << "time_s,elevation_deg,d_rotor_m,phi_deg,t_int_ms,t_lnk_ms,duty_cycle\n";
  for (const auto& b : blades) {
    out << report::fixed(b.time_s, 3) << ',' << report::fixed(b.elevation_deg, 6) << ','
        << (b.d_rotor_m ? report::fixed(*b.d_rotor_m, 6) : std::string()) << ',' << report::fixed(b.phi_deg, 6)
        << ',';
    if (b.continuous)
      out << "inf,0,1";
    else
      out << report::fixed(b.schedule.t_int_ms, 6) << ',' << report::fixed(b.schedule.t_lnk_ms, 6) << ','
          << report::fixed(b.schedule.duty_cycle(), 6);
    out << '\n';
  }
}

std::filesystem::path write_artifacts(const RunResult& result, const std::filesystem::path& out_dir) {
  const auto dir = out_dir / result.scenario.id;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimulationError("cannot create '" + dir.string() + "': " + ec.message());

  {
    auto out = open_for_write(dir / "access.csv");
    write_access_csv(out, result.access.samples);
  }
  {
    auto out = open_for_write(dir / "link.csv");
    write_link_csv(out, result.link);
  }
  {
    auto out = open_for_write(dir / "slots.csv");
    write_slots_csv(out, result.slots);
  }
  {
    auto out = open_for_write(dir / "blades.csv");
    write_blades_csv(out, result.blades);
  }
  {
    auto out = open_for_write(dir / "report.json");
    out << to_json(result.report).dump(2) << '\n';
  }
  return dir;
}

std::vector<double> linear_grid(double min_db, double max_db, int points) {
  if (points < 1) throw ValidationError("points", "must be >= 1");
  if (!(max_db >= min_db)) throw ValidationError("cnr_max", "must be >= cnr_min");
  if (points == 1) return {min_db};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = min_db + (max_db - min_db) * i / (points - 1);
  return grid;
}

std::vector<SweepPoint> sweep(const ScenarioSpec& scenario, const SweepOptions& options) {
  validate(scenario);
  if (options.cnr_grid_db.empty()) throw ValidationError("cnr_grid", "must not be empty");
  if (options.n_frames < 1) throw ValidationError("n_frames", "must be >= 1");

  const phy::FrameSimConfig cfg = frame_config(scenario, options.mode);
  const double span_ms = options.n_frames * phy::frame_length_ms;

  std::vector<blade::Interval> erasures;
  if (scenario.aircraft.rotor) {
    const auto access = build_access_timeline(scenario, options.step_s);
    report::StatsAccumulator elevation;
    for (const auto& a : access.samples)
      if (a.served()) elevation.add(a.view.elevation_deg);
    if (const auto el = elevation.result()) {
      const auto blades = blade_state(scenario.aircraft, el->avg);
      erasures = frame_erasures(*blades, scenario.aircraft.rotor->initial_phase_ms, 0.0, span_ms);
    }
  }

  std::vector<SweepPoint> out;
  out.reserve(options.cnr_grid_db.size());
  for (std::size_t i = 0; i < options.cnr_grid_db.size(); ++i) {
    link::LinkSample sample;
    sample.served = true;
    sample.cnr_db = options.cnr_grid_db[i];
    sample.bandwidth_mhz = cfg.channel.bandwidth_mhz;
    const std::vector<link::LinkSample> link{sample};

    const auto slots = phy::simulate_frames(link, erasures, cfg, options.n_frames, phy::frame_seed(options.seed, i));
    const auto m = phy::aggregate(slots, span_ms * 1e-3);
    out.push_back({sample.cnr_db, m.ber, m.data_rate_mbps, m.slot_loss_fraction});
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "cnr_db,ber,data_rate_mbps,slot_loss_fraction\n";
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.9e", p.ber);
    out << report::fixed(p.cnr_db, 4) << ',' << buf << ',' << report::fixed(p.data_rate_mbps, 6) << ','
        << report::fixed(p.slot_loss_fraction, 6) << '\n';
  }
}

}  // namespace ntnsim
