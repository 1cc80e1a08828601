#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ntnsim/pipeline.hpp"
#include "ntnsim/report.hpp"
#include "ntnsim/scenario.hpp"

using namespace ntnsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ntnsim_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunOptions quick(std::uint64_t seed = 1) {
  RunOptions o;
  o.step_s = 10.0;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("runs are reproducible byte for byte") {
  const auto sc = builtin_scenario("scenario-7");
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto da = write_artifacts(run(sc, quick(7)), a);
  const auto db = write_artifacts(run(sc, quick(7)), b);
  for (const char* f : {"access.csv", "link.csv", "slots.csv", "blades.csv", "report.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(da / f));
    CHECK(slurp(da / f) == slurp(db / f));
  }
  const auto c = scratch("det_c");
  const auto dc = write_artifacts(run(sc, quick(8)), c);
  CHECK(slurp(da / "access.csv") == slurp(dc / "access.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST_CASE("report figures can be recomputed from the CSV artifacts") {
  const auto sc = builtin_scenario("scenario-15a");
  const auto out = scratch("recompute");
  const auto result = run(sc, quick());
  const auto dir = write_artifacts(result, out);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));

  double loss = 0.0, cnr = 0.0;
  int served = 0;
  for (const auto& row : read_csv(dir / "link.csv")) {
    if (row[1].empty()) continue;
    loss += std::stod(row[5]);
    cnr += std::stod(row[7]);
    ++served;
  }
  REQUIRE(served > 0);
  CHECK(report["loss_avg_db"].get<double>() == doctest::Approx(loss / served).epsilon(1e-6));
  CHECK(report["cnr_db"]["avg"].get<double>() == doctest::Approx(cnr / served).epsilon(1e-6));

  double errors = 0.0, bits = 0.0;
  std::int64_t erased = 0, slots = 0;
  for (const auto& row : read_csv(dir / "slots.csv")) {
    erased += std::stoi(row[2]);
    bits += std::stod(row[4]);
    errors += std::stod(row[5]);
    ++slots;
  }
  CHECK(report["total_slots"].get<std::int64_t>() == slots);
  CHECK(report["ber"].get<double>() == doctest::Approx(errors / bits).epsilon(1e-9));
  CHECK(report["slot_loss_fraction"].get<double>() == doctest::Approx(double(erased) / slots).epsilon(1e-12));

  std::size_t access_rows = read_csv(dir / "access.csv").size();
  CHECK(access_rows == result.access.samples.size());
  CHECK(read_csv(dir / "blades.csv").size() == result.blades.size());
  fs::remove_all(out);
}

TEST_CASE("report schema") {
  const auto r = to_json(run(builtin_scenario("scenario-11"), quick()).report);
  for (const char* key : {"scenario_id", "seed", "mode", "step_s", "n_frames", "elevation_deg", "doppler_khz",
                          "loss_avg_db", "cnr_db", "cnr_prime_db", "access_pct", "handovers", "blade", "ber",
                          "data_rate_mbps", "slot_loss_fraction", "total_slots"})
    CHECK(r.contains(key));
  CHECK(r["blade"]["t_int_avg_ms"].is_null());
  CHECK(r["scenario_id"] == "scenario-11");
  CHECK(r["slot_loss_fraction"].get<double>() == 0.0);
  CHECK(r["data_rate_mbps"].get<double>() > 0.0);
}

TEST_CASE("built-in flights land near the reference envelopes") {
  SUBCASE("light rotorcraft in S band") {
    const auto r = run(builtin_scenario("scenario-7"), quick()).report;
    REQUIRE(r.t_int_avg_ms.has_value());
    CHECK(std::abs(r.slot_loss_fraction - 0.10) < 0.03);
    CHECK(*r.t_int_avg_ms > 1.0);
    CHECK(*r.t_int_avg_ms < 2.5);
  }
  SUBCASE("GEO Ku uplink") {
    const auto r = run(builtin_scenario("scenario-15b"), quick()).report;
    REQUIRE(r.elevation_deg.has_value());
    CHECK(std::abs(r.elevation_deg->avg - 21.4) < 2.0);
    CHECK(r.handovers == 0);
    CHECK(r.access_pct == 100.0);
  }
}

TEST_CASE("run options") {
  auto opts = quick();
  opts.n_frames = 3;
  opts.mode = phy::SimMode::Expected;
  const auto r = run(builtin_scenario("scenario-19"), opts);
  CHECK(r.report.n_frames == 3);
  CHECK(r.report.mode == "expected");
  CHECK(r.slots.size() == 3 * 80);

  opts.step_s = 0.0;
  CHECK_THROWS_AS(run(builtin_scenario("scenario-19"), opts), ValidationError);
}

TEST_CASE("sweep") {
  SweepOptions opts;
  opts.n_frames = 20;

  SUBCASE("empty grid") { CHECK_THROWS_AS(sweep(builtin_scenario("scenario-11"), opts), ValidationError); }
  SUBCASE("grid helper") {
    CHECK(linear_grid(0.0, 10.0, 5) == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
    CHECK(linear_grid(3.0, 3.0, 1) == std::vector<double>{3.0});
    CHECK_THROWS_AS(linear_grid(0.0, 10.0, 0), ValidationError);
    CHECK_THROWS_AS(linear_grid(10.0, 0.0, 3), ValidationError);
  }
  SUBCASE("blade-free aircraft at high CNR") {
    opts.cnr_grid_db = {30.0};
    const auto pts = sweep(builtin_scenario("scenario-11"), opts);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].ber < 1e-4);
    CHECK(pts[0].slot_loss_fraction == 0.0);
  }
  SUBCASE("blade-limited aircraft levels off at the slot loss") {
    opts.cnr_grid_db = linear_grid(-5.0, 30.0, 8);
    const auto pts = sweep(builtin_scenario("scenario-7"), opts);
    REQUIRE(pts.size() == 8);
    CHECK(std::abs(pts.back().ber - pts.back().slot_loss_fraction) < 1e-9);
    CHECK(std::abs(pts.back().slot_loss_fraction - 0.10) < 0.03);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].data_rate_mbps >= pts[i - 1].data_rate_mbps);
    CHECK(pts.front().ber > pts.back().ber);
  }
  SUBCASE("csv layout") {
    opts.cnr_grid_db = {0.0, 10.0};
    std::ostringstream out;
    write_sweep_csv(out, sweep(builtin_scenario("scenario-11"), opts));
    const auto text = out.str();
    CHECK(text.rfind("cnr_db,ber,data_rate_mbps,slot_loss_fraction\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  }
}

TEST_CASE("compare") {
  const auto a = to_json(run(builtin_scenario("scenario-15a"), quick()).report);
  const auto b = to_json(run(builtin_scenario("scenario-15b"), quick()).report);

  SUBCASE("identical reports") {
    const auto d = compare(a, a);
    for (const auto& [key, entry] : d.items())
      if (!entry["delta"].is_null()) CHECK(entry["delta"].get<double>() == 0.0);
  }
  SUBCASE("LEO vs GEO helicopter") {
    const auto d = compare(a, b);
    REQUIRE(d.contains("loss_avg_db"));
    CHECK(std::abs(d["loss_avg_db"]["delta"].get<double>() - 21.0) < 2.0);
    CHECK(d["cnr_prime_db.avg"]["b"].is_null());
    CHECK(d["cnr_prime_db.avg"]["delta"].is_null());
  }
  SUBCASE("schema mismatch") {
    auto broken = b;
    broken.erase("ber");
    CHECK_THROWS_AS(compare(a, broken), SchemaError);
  }
}

TEST_CASE("report number formatting") {
  CHECK(report::fixed(1.23456, 2) == "1.23");
  CHECK(report::fixed(-0.0001, 2) == "0.00");
  CHECK(report::fixed(-std::numeric_limits<double>::infinity(), 3) == "-inf");
  report::StatsAccumulator acc;
  CHECK_FALSE(acc.result().has_value());
  for (double v : {3.0, 1.0, 2.0}) acc.add(v);
  const auto s = *acc.result();
  CHECK(s.min == 1.0);
  CHECK(s.max == 3.0);
  CHECK(s.avg == 2.0);
  CHECK(s.count == 3);
}
