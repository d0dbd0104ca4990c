#include "twopath/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twopath;

namespace {

std::string events_text(const EventLog& log) {
  std::ostringstream out;
  write_events_csv(log, out);
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "twopath_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_error(const std::string& body) {
  std::istringstream in(body);
  try {
    (void)read_events_csv(in);
  } catch (const IoError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty log is just the header") {
  CHECK(events_text(EventLog{}) == std::string(kEventsHeader) + "\n");
  std::istringstream in(events_text(EventLog{}));
  CHECK(read_events_csv(in).events.empty());
}

TEST_CASE("single events serialize field by field") {
  EventLog log;
  DetectionEvent a;
  a.event_id = 0;
  a.experiment = Scenario::young_micromaser;
  a.screen_x = -0.0125;
  a.whichway = WhichWayRecord{1, 0, false};
  log.events.push_back(a);
  DetectionEvent b;
  b.event_id = 65536;
  b.experiment = Scenario::mz_weak_screen;
  b.scatter_xy = std::array<double, 2>{2.5e-7, 0.0};
  b.stream_id = 1;
  log.events.push_back(b);
  DetectionEvent c;
  c.event_id = 7;
  c.experiment = Scenario::mz_with_bs2;
  c.mz_port = Port::y;
  log.events.push_back(c);

  std::istringstream lines(events_text(log));
  std::string line;
  std::getline(lines, line);
  CHECK(line == kEventsHeader);
  std::getline(lines, line);
  CHECK(line == "0,young_micromaser,-0.0125,,1,0,,,0");
  std::getline(lines, line);
  CHECK(line == "65536,mz_weak_screen,,,,,2.5e-07,0,1");
  std::getline(lines, line);
  CHECK(line == "7,mz_with_bs2,,y,,,,,0");
  CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("events round-trip through the CSV format") {
  for (const auto s : kAllScenarios) {
    CAPTURE(to_string(s));
    const auto log = run_experiment(build_preset(s), 3000, 19);
    std::istringstream in(events_text(log));
    const auto back = read_events_csv(in);
    CHECK(back.events == log.events);
    CHECK(events_text(back) == events_text(log));
  }
}

TEST_CASE("identical runs write identical files") {
  const auto c = build_preset(Scenario::young_random_phase);
  const auto p1 = scratch("a.csv"), p2 = scratch("b.csv");
  emit_events_csv(run_experiment(c, 5000, 99), p1);
  emit_events_csv(run_experiment(c, 5000, 99), p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(read_events_csv(p1).events.size() == 5000);
}

TEST_CASE("malformed event files are rejected with a line number") {
  const std::string h = std::string(kEventsHeader) + "\n";
  CHECK(read_error("id,x\n").find("line 1") != std::string::npos);
  CHECK(read_error(h + "0,young_baseline,0.1,,,,,,0\n1,young_baseline,0.1\n").find("line 3") !=
        std::string::npos);
  CHECK(read_error(h + "0,young_nothing,0.1,,,,,,0\n").find("line 2") != std::string::npos);
  CHECK(!read_error(h + "0,young_baseline,abc,,,,,,0\n").empty());
  CHECK(!read_error(h + "0,mz_with_bs2,,z,,,,,0\n").empty());
  CHECK(!read_error(h + "-1,young_baseline,0.1,,,,,,0\n").empty());
  CHECK(!read_error(h + "0,young_micromaser,0.1,,1,,,,0\n").empty());
  CHECK_THROWS_AS((void)read_events_csv(std::filesystem::path("/nonexistent/events.csv")), IoError);
}

TEST_CASE("unwritable paths raise IoError") {
  CHECK_THROWS_AS(emit_events_csv(EventLog{}, "/nonexistent/dir/events.csv"), IoError);
  CHECK_THROWS_AS(emit_histogram_csv(FringeHistogram::uniform(0, 1, 2), "/nonexistent/dir/h.csv"),
                  IoError);
}

TEST_CASE("histogram, metrics and sweep formats") {
  auto h = FringeHistogram::uniform(0.0, 1.0, 4);
  h.counts << 0, 5, 10, 2.5;
  std::ostringstream hc;
  write_histogram_csv(h, hc);
  CHECK(hc.str() == "bin_lo,bin_hi,count\n0,0.25,0\n0.25,0.5,5\n0.5,0.75,10\n0.75,1,2.5\n");

  std::ostringstream pgm;
  write_histogram_pgm(h, pgm);
  const std::string expected_pgm = std::string("P5\n4 1\n255\n") + char(0) + char(128) + char(255) +
                                   char(64);
  CHECK(pgm.str() == expected_pgm);

  std::ostringstream mc;
  write_metrics_csv({{"visibility", Metric::of(0.5)}, {"fringe_spacing", Metric::missing(kInsufficientFringes)}},
                    mc);
  CHECK(mc.str() == "metric,value,flag\nvisibility,0.5,\nfringe_spacing,,insufficient_fringes\n");

  std::ostringstream sc;
  write_sweep_csv({{0.25, Metric::of(0.25), Metric::of(0.75), Metric::missing("x")}}, sc);
  CHECK(sc.str() == "param_value,visibility,distinguishability,duality_lhs\n0.25,0.25,0.75,\n");

  const auto p = scratch("h.pgm");
  emit_histogram_pgm(h, p);
  CHECK(slurp(p) == expected_pgm);
}
