#include "twopath/config.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>

using namespace twopath;

namespace {

std::string error_of(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::size_t line_of(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

bool contains(const std::string& s, std::string_view part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("scenario names round-trip") {
  for (const auto s : kAllScenarios) CHECK(scenario_from_string(to_string(s)) == s);
  try {
    (void)scenario_from_string("young");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "young_baseline"));
    CHECK(contains(e.what(), "eraser_modulation"));
  }
}

TEST_CASE("every preset validates and survives serialization") {
  for (const auto s : kAllScenarios) {
    CAPTURE(to_string(s));
    const auto c = build_preset(s);
    CHECK_NOTHROW(c.validate());
    CHECK(c.two_slit() == uses_two_slit(s));
    const auto text = serialize(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("preset contents") {
  const auto rp = build_preset(Scenario::young_random_phase);
  CHECK(rp.noise.kind == PhaseNoise::Kind::uniform);
  CHECK(rp.noise.independent_per_branch);

  const auto mm = build_preset(Scenario::young_micromaser);
  REQUIRE(mm.detector_overlap);
  CHECK(mm.detector_overlap->magnitude == 0.0);
  CHECK(mm.pattern_convention == PatternConvention::literal);
  CHECK(has_micromaser(Scenario::young_micromaser));
  CHECK_FALSE(has_micromaser(Scenario::young_baseline));

  CHECK(build_preset(Scenario::young_single_cavity).single_cavity);
  CHECK(build_preset(Scenario::eraser_modulation).pattern_convention ==
        PatternConvention::measurement_mediated);

  CHECK(build_preset(Scenario::mz_with_bs2).mz().bs2_present);
  CHECK_FALSE(build_preset(Scenario::mz_without_bs2).mz().bs2_present);
  const auto ws = build_preset(Scenario::mz_weak_screen);
  REQUIRE(ws.weak_screen);
  CHECK(ws.weak_screen->transmittance == 0.99);
  CHECK(ws.weak_screen->scatter_fraction == 0.01);
  CHECK(ws.mz().crossing_wavenumber == ws.beam.wavenumber());
}

TEST_CASE("parsing overrides preset fields") {
  const auto c = parse_config(
      "# micromaser with a partial detector\n"
      "scenario = young_micromaser\n"
      "detector_overlap = 0.5   # trailing comment\n"
      "detector_overlap.phase = 0.25\n"
      "slits.amplitude2 = (0.5,-0.5)\n"
      "noise.distribution = gaussian\n"
      "noise.sigma = 0.3\n"
      "\n"
      "screen.points = 1024\n");
  REQUIRE(c.detector_overlap);
  CHECK(c.detector_overlap->magnitude == 0.5);
  CHECK(c.detector_overlap->phase == 0.25);
  CHECK(c.slits().slit_amplitudes[1] == std::complex<double>(0.5, -0.5));
  CHECK(c.noise.kind == PhaseNoise::Kind::gaussian);
  CHECK(c.noise.sigma == 0.3);
  CHECK(c.slits().screen.n_points == 1024);

  const auto st = c.composite_state();
  CHECK(std::abs(overlap_factor(st) - std::polar(0.5, 0.25)) < 1e-15);
}

TEST_CASE("the crossing wavenumber follows the wavelength unless set") {
  const auto a = parse_config("scenario = mz_with_bs2\nbeam.wavelength = 6.5e-7\n");
  CHECK(a.mz().crossing_wavenumber == doctest::Approx(a.beam.wavenumber()).epsilon(1e-15));
  const auto b = parse_config("scenario = mz_with_bs2\nbeam.wavelength = 6.5e-7\nmz.crossing_wavenumber = 1e6\n");
  CHECK(b.mz().crossing_wavenumber == 1e6);
}

TEST_CASE("missing scenario") {
  CHECK(contains(error_of("beam.wavelength = 5e-7\n"), "missing required key 'scenario'"));
  CHECK(contains(error_of("scenario =\n"), "missing required key 'scenario'"));
  CHECK(contains(error_of(""), "missing required key 'scenario'"));
}

TEST_CASE("out-of-range overlap names its line") {
  const std::string text = "scenario = young_micromaser\n# detector\ndetector_overlap = 1.5\n";
  const auto msg = error_of(text);
  CHECK(contains(msg, "line 3"));
  CHECK(contains(msg, "detector_overlap"));
  CHECK(contains(msg, "[0,1]"));
  CHECK(line_of(text) == 3);
  CHECK(line_of("scenario = young_micromaser\ninternal_overlap = -0.1\n") == 2);
}

TEST_CASE("syntax and key errors") {
  CHECK(contains(error_of("scenario = young_baseline\nbogus.key = 1\n"), "unknown key"));
  CHECK(line_of("scenario = young_baseline\nbogus.key = 1\n") == 2);
  CHECK(contains(error_of("scenario = young_baseline\nbeam.wavelength = 1e-7\nbeam.wavelength = 2e-7\n"),
                 "duplicate key"));
  CHECK(line_of("scenario = young_baseline\nbeam.wavelength = 1e-7\nbeam.wavelength = 2e-7\n") == 3);
  CHECK(contains(error_of("scenario = young_baseline\nno equals sign\n"), "key = value"));
  CHECK(contains(error_of("scenario = young_baseline\na = b = c\n"), "'='"));
  CHECK(contains(error_of("scenario = nonsense\n"), "unknown scenario"));
  CHECK(contains(error_of("scenario = young_baseline\nbeam.wavelength = fast\n"), "invalid value"));
  CHECK(contains(error_of("scenario = young_baseline\nbeam.wavelength = -1\n"), "wavelength"));
  CHECK(contains(error_of("scenario = young_baseline\nmz.bs2_present = true\n"), "does not apply"));
  CHECK(contains(error_of("scenario = mz_with_bs2\nslits.separation = 1e-5\n"), "does not apply"));
  CHECK(contains(error_of("scenario = mz_with_bs2\nmz.bs2_present = false\n"), "bs2_present"));
  CHECK(contains(error_of("scenario = young_baseline\nslits.amplitude1 = 0\nslits.amplitude2 = 0\n"),
                 "slit amplitude"));
  CHECK(contains(error_of("scenario = young_baseline\nslits.width = 2e-5\n"), "slit_width"));
  CHECK(contains(error_of("scenario = mz_weak_screen\nweak_screen.transmittance = 0\n"
                          "weak_screen.scatter_fraction = 0\n"),
                 "absorbs"));
  CHECK(contains(error_of("scenario = mz_weak_screen\nweak_screen.position_y = 1\n"), "crossing region"));
}

TEST_CASE("set_config_value") {
  auto c = build_preset(Scenario::young_micromaser);
  set_config_value(c, "detector_overlap", "0.75");
  CHECK(c.detector_overlap->magnitude == 0.75);
  CHECK_THROWS_AS(set_config_value(c, "scenario", "young_baseline"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
  try {
    set_config_value(c, "detector_overlap", "2");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "detector_overlap");
    CHECK(e.line() == 0);
  }
  const auto& keys = config_keys();
  CHECK(std::find(keys.begin(), keys.end(), "detector_overlap") != keys.end());
  CHECK(std::find(keys.begin(), keys.end(), "weak_screen.scatter_fraction") != keys.end());
}

TEST_CASE("validation rejects inconsistent configurations") {
  auto c = build_preset(Scenario::young_micromaser);
  c.detector_overlap.reset();
  CHECK_THROWS_AS(c.validate(), ConfigError);

  auto w = build_preset(Scenario::mz_with_bs2);
  w.weak_screen = WeakScreen{};
  CHECK_THROWS_AS(w.validate(), ConfigError);

  auto g = build_preset(Scenario::young_baseline);
  g.geometry = MZGeometryd{};
  CHECK_THROWS_AS(g.validate(), ConfigError);

  auto s = build_preset(Scenario::young_baseline);
  s.single_cavity = true;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("effective measurement uses the state's internal states") {
  auto c = parse_config("scenario = young_internal_incoherent\nmeasurement.mode = internal\n"
                        "measurement.g12 = 0.5\nmeasurement.g21 = 0.5\n");
  const auto m = c.effective_measurement();
  REQUIRE(m);
  const auto st = c.composite_state();
  CHECK(m->internal_targets[0] == st.branches[0].internal);
  CHECK(m->internal_targets[1] == st.branches[1].internal);
  CHECK(m->matrix_elements(0, 1) == std::complex<double>(0.5));
  CHECK(parse_config(serialize(c)) == c);
}
