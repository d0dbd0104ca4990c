#include "twopath/analysis.hpp"
#include "twopath/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace twopath;

namespace {

int terminal_fields(const DetectionEvent& ev) {
  return int(ev.screen_x.has_value()) + int(ev.mz_port.has_value()) + int(ev.scatter_xy.has_value());
}

double port_x_fraction(const EventLog& log) {
  double x = 0;
  for (const auto& ev : log.events) x += ev.mz_port == Port::x;
  return x / double(log.events.size());
}

}  // namespace

TEST_CASE("a single event carries the expected fields") {
  for (const auto s : kAllScenarios) {
    CAPTURE(to_string(s));
    const auto log = run_experiment(build_preset(s), 1, 7);
    REQUIRE(log.events.size() == 1);
    const auto& ev = log.events[0];
    CHECK(ev.event_id == 0);
    CHECK(ev.stream_id == 0);
    CHECK(ev.experiment == s);
    CHECK(terminal_fields(ev) == 1);
    CHECK(ev.screen_x.has_value() == uses_two_slit(s));
    CHECK(ev.whichway.has_value() == has_micromaser(s));
    CHECK(log.config_digest.size() == 16);
  }
}

TEST_CASE("event ids are dense and fields are consistent") {
  for (const auto s : kAllScenarios) {
    CAPTURE(to_string(s));
    const std::uint64_t n = kEventsPerStream + 1234;
    const auto config = build_preset(s);
    const auto log = run_experiment(config, n, 3);
    REQUIRE(log.events.size() == n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto& ev = log.events[i];
      CHECK(ev.event_id == i);
      CHECK(ev.stream_id == i / kEventsPerStream);
      CHECK(terminal_fields(ev) == 1);
      CHECK(ev.whichway.has_value() == has_micromaser(s));
      if (ev.screen_x) {
        const auto& sc = config.slits().screen;
        CHECK(*ev.screen_x >= sc.x_min);
        CHECK(*ev.screen_x <= sc.x_max);
      }
      if (ev.scatter_xy) CHECK(s == Scenario::mz_weak_screen);
    }
  }
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  const auto c = build_preset(Scenario::young_micromaser);
  const auto a = run_experiment(c, 150000, 42, 1);
  const auto b = run_experiment(c, 150000, 42, 1);
  const auto t = run_experiment(c, 150000, 42, 3);
  CHECK(a == b);
  CHECK(a == t);
  CHECK_FALSE(a == run_experiment(c, 150000, 43, 1));
}

TEST_CASE("config digest tracks the configuration") {
  const auto a = build_preset(Scenario::young_baseline);
  auto b = a;
  b.beam.wavelength = 6e-7;
  CHECK(config_digest(a) == config_digest(build_preset(Scenario::young_baseline)));
  CHECK(config_digest(a) != config_digest(b));
  CHECK(config_digest(a).find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("separate streams draw from the same distribution") {
  const ExperimentEngine engine(build_preset(Scenario::young_baseline));
  const auto s0 = run_stream(engine, 0, 50000, 11, 0);
  const auto s1 = run_stream(engine, 50000, 50000, 11, 1);
  auto hist = [](const std::vector<DetectionEvent>& evs) {
    std::vector<double> xs;
    for (const auto& e : evs) xs.push_back(*e.screen_x);
    return bin_values(xs, 64, -0.1, 0.1).histogram;
  };
  const auto t = chi_square_two_sample(hist(s0), hist(s1));
  CAPTURE(t.statistic);
  CHECK(t.p_value > 0.001);
  // but not the same draws
  CHECK(s0[0].screen_x != s1[0].screen_x);
}

TEST_CASE("merge orders by stream then id") {
  DetectionEvent a, b, c;
  a.event_id = 5;
  a.stream_id = 1;
  b.event_id = 9;
  b.stream_id = 0;
  c.event_id = 2;
  c.stream_id = 1;
  const auto m = merge_streams({{a, c}, {b}});
  REQUIRE(m.size() == 3);
  CHECK(m[0] == b);
  CHECK(m[1] == c);
  CHECK(m[2] == a);
}

TEST_CASE("invalid requests are rejected before sampling") {
  auto c = build_preset(Scenario::young_micromaser);
  c.detector_overlap->magnitude = 1.5;
  CHECK_THROWS_AS((void)run_experiment(c, 10, 1), ConfigError);
  CHECK_THROWS_AS((void)ExperimentEngine(c), ConfigError);
  CHECK_THROWS_AS((void)run_experiment(build_preset(Scenario::young_baseline), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("Mach-Zehnder port statistics") {
  const std::uint64_t n = 100000;
  const double sigma = std::sqrt(0.25 / double(n));
  CHECK(std::abs(port_x_fraction(run_experiment(build_preset(Scenario::mz_without_bs2), n, 1)) - 0.5) <
        3 * sigma);
  auto c = build_preset(Scenario::mz_with_bs2);
  CHECK(port_x_fraction(run_experiment(c, 1000, 1)) == 1.0);
  for (const double phi : {0.5, 2.0, 3.0}) {
    std::get<MZGeometryd>(c.geometry).phase_difference = phi;
    const double p = (1 + std::cos(phi)) / 2;
    const double s = std::sqrt(p * (1 - p) / double(n));
    CHECK(std::abs(port_x_fraction(run_experiment(c, n, 2)) - p) < 3 * s);
  }
}

TEST_CASE("random phase noise randomizes the Mach-Zehnder ports") {
  auto c = build_preset(Scenario::mz_with_bs2);
  c.noise.kind = PhaseNoise::Kind::uniform;
  c.noise.high = 2 * std::numbers::pi;
  const std::uint64_t n = 100000;
  CHECK(std::abs(port_x_fraction(run_experiment(c, n, 4)) - 0.5) < 3 * std::sqrt(0.25 / double(n)));
}

TEST_CASE("micromaser records follow the slit populations") {
  auto c = build_preset(Scenario::young_micromaser);
  std::get<TwoSlitGeometryd>(c.geometry).slit_amplitudes = {2.0, 1.0};
  const std::uint64_t n = 100000;
  const auto log = run_experiment(c, n, 8);
  double first = 0;
  for (const auto& ev : log.events) {
    REQUIRE(ev.whichway);
    CHECK(ev.whichway->cavity1_photons + ev.whichway->cavity2_photons == 1);
    first += ev.whichway->cavity1_photons;
  }
  CHECK(std::abs(first / double(n) - 0.8) < 3 * std::sqrt(0.16 / double(n)));
  CHECK(distinguishability(log) == 1.0);

  const auto single = run_experiment(build_preset(Scenario::young_single_cavity), 20000, 8);
  double empty = 0;
  for (const auto& ev : single.events) {
    REQUIRE(ev.whichway);
    CHECK(ev.whichway->single_cavity_mode);
    CHECK(ev.whichway->cavity2_photons == 0);
    empty += ev.whichway->cavity1_photons == 0;
  }
  CHECK(std::abs(empty / 20000.0 - 0.5) < 3 * std::sqrt(0.25 / 20000.0));
}

TEST_CASE("weak screen runs mix scatter and port records") {
  const auto log = run_experiment(build_preset(Scenario::mz_weak_screen), 200000, 5);
  double scattered = 0;
  for (const auto& ev : log.events) {
    if (ev.scatter_xy) {
      ++scattered;
      CHECK_FALSE(ev.mz_port);
    } else {
      CHECK(ev.mz_port);
    }
  }
  // absorbed particles are redrawn, so the scatter share is s / (T + s)
  CHECK(std::abs(scattered / 200000.0 - 0.01) < 3 * std::sqrt(0.01 * 0.99 / 200000.0));
}
