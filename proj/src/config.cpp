#include "twopath/config.hpp"

#include "twopath/text.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace twopath {

namespace {

std::string with_line(const std::string& message, std::size_t line) {
  return line == 0 ? message : "line " + std::to_string(line) + ": " + message;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::size_t line, std::string key)
    : std::runtime_error(with_line(message, line)), line_(line), key_(std::move(key)) {}

// ─── Scenarios ──────────────────────────────────────────────────────────────

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::young_baseline: return "young_baseline";
    case Scenario::young_random_phase: return "young_random_phase";
    case Scenario::young_internal_incoherent: return "young_internal_incoherent";
    case Scenario::young_micromaser: return "young_micromaser";
    case Scenario::young_single_cavity: return "young_single_cavity";
    case Scenario::mz_with_bs2: return "mz_with_bs2";
    case Scenario::mz_without_bs2: return "mz_without_bs2";
    case Scenario::mz_weak_screen: return "mz_weak_screen";
    case Scenario::eraser_modulation: return "eraser_modulation";
  }
  return "?";
}

Scenario scenario_from_string(std::string_view name) {
  for (const auto s : kAllScenarios)
    if (to_string(s) == name) return s;
  std::string valid;
  for (const auto s : kAllScenarios) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(s);
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "' (valid: " + valid + ")", 0,
                    "scenario");
}

bool uses_two_slit(Scenario s) {
  return s != Scenario::mz_with_bs2 && s != Scenario::mz_without_bs2 &&
         s != Scenario::mz_weak_screen;
}

bool has_micromaser(Scenario s) {
  return s == Scenario::young_micromaser || s == Scenario::young_single_cavity ||
         s == Scenario::eraser_modulation;
}

// ─── Presets ────────────────────────────────────────────────────────────────

ExperimentConfig build_preset(Scenario s) {
  ExperimentConfig c;
  c.scenario = s;
  if (!uses_two_slit(s)) {
    MZGeometryd mz;
    mz.crossing_wavenumber = c.beam.wavenumber();
    mz.bs2_present = s == Scenario::mz_with_bs2;
    c.geometry = mz;
  }
  switch (s) {
    case Scenario::young_baseline:
    case Scenario::mz_with_bs2:
    case Scenario::mz_without_bs2:
      break;
    case Scenario::young_random_phase:
      c.noise.kind = PhaseNoise::Kind::uniform;
      c.noise.low = 0.0;
      c.noise.high = 2.0 * std::numbers::pi;
      c.noise.independent_per_branch = true;
      break;
    case Scenario::young_internal_incoherent:
      c.internal_overlap = Overlap{0.0, 0.0};
      break;
    case Scenario::young_micromaser:
      // atom leaves both cavities in the same ground state
      c.internal_overlap = Overlap{1.0, 0.0};
      c.detector_overlap = Overlap{0.0, 0.0};
      break;
    case Scenario::young_single_cavity:
      c.internal_overlap = Overlap{0.0, 0.0};
      c.detector_overlap = Overlap{0.0, 0.0};
      c.single_cavity = true;
      c.pattern_convention = PatternConvention::measurement_mediated;
      break;
    case Scenario::mz_weak_screen:
      c.weak_screen = WeakScreen{};
      break;
    case Scenario::eraser_modulation:
      c.internal_overlap = Overlap{1.0, 0.0};
      c.detector_overlap = Overlap{0.0, 0.0};
      c.pattern_convention = PatternConvention::measurement_mediated;
      break;
  }
  return c;
}

// ─── Accessors ──────────────────────────────────────────────────────────────

const TwoSlitGeometryd& ExperimentConfig::slits() const {
  if (!two_slit()) throw std::logic_error("configuration has no two-slit geometry");
  return std::get<TwoSlitGeometryd>(geometry);
}

const MZGeometryd& ExperimentConfig::mz() const {
  if (two_slit()) throw std::logic_error("configuration has no Mach-Zehnder geometry");
  return std::get<MZGeometryd>(geometry);
}

CompositeState ExperimentConfig::composite_state() const {
  CompositeState st;
  st.geometry = slits();
  st.beam = beam;
  st.convention = pattern_convention;
  if (internal_overlap) {
    auto [a, b] = overlapping_pair(internal_overlap->magnitude, internal_overlap->phase);
    st.branches[0].internal = std::move(a);
    st.branches[1].internal = std::move(b);
  }
  if (detector_overlap) {
    auto [a, b] = overlapping_pair(detector_overlap->magnitude, detector_overlap->phase);
    st.branches[0].detector = std::move(a);
    st.branches[1].detector = std::move(b);
  }
  return st;
}

std::optional<MeasurementOperator> ExperimentConfig::effective_measurement() const {
  if (!measurement) return std::nullopt;
  MeasurementOperator m = *measurement;
  if (m.mode == MeasurementMode::internal) {
    const auto st = composite_state();
    m.internal_targets = {st.branches[0].internal, st.branches[1].internal};
  }
  return m;
}

// ─── Validation ─────────────────────────────────────────────────────────────

namespace {

void check_overlap(const std::optional<Overlap>& o, const char* key) {
  if (!o) return;
  if (!(o->magnitude >= 0.0 && o->magnitude <= 1.0))
    throw ConfigError(std::string(key) + " must lie in [0,1] (got " +
                          text::format_double(o->magnitude) + ")",
                      0, key);
  if (!std::isfinite(o->phase))
    throw ConfigError(std::string(key) + ".phase must be finite", 0, std::string(key) + ".phase");
}

template <typename F>
void rethrow_as(const char* key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, key);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  rethrow_as("beam.wavelength", [&] { beam.validate(); });
  if (beam.amplitude == std::complex<double>{0.0})
    throw ConfigError("beam.amplitude must be nonzero", 0, "beam.amplitude");
  if (two_slit() != uses_two_slit(scenario))
    throw ConfigError("geometry does not match scenario " + std::string(to_string(scenario)), 0,
                      "scenario");
  if (sampling_points < 2)
    throw ConfigError("sampling.points must be at least 2", 0, "sampling.points");
  rethrow_as("noise.distribution", [&] { noise.validate(); });
  check_overlap(internal_overlap, "internal_overlap");
  check_overlap(detector_overlap, "detector_overlap");

  if (two_slit()) {
    rethrow_as("slits.separation", [&] { slits().validate(); });
    const auto& sa = slits().slit_amplitudes;
    if (sa[0] == std::complex<double>{0.0} && sa[1] == std::complex<double>{0.0})
      throw ConfigError("at least one slit amplitude must be nonzero", 0, "slits.amplitude1");
    if (has_micromaser(scenario) && !detector_overlap)
      throw ConfigError("scenario " + std::string(to_string(scenario)) +
                            " requires detector_overlap",
                        0, "detector_overlap");
    if (single_cavity && !has_micromaser(scenario))
      throw ConfigError("single_cavity needs a micromaser scenario", 0, "single_cavity");
    if (weak_screen) throw ConfigError("weak_screen needs a Mach-Zehnder scenario", 0, "weak_screen");
    if (measurement) rethrow_as("measurement.mode", [&] { effective_measurement()->validate(); });
  } else {
    rethrow_as("mz.phase_difference", [&] { mz().validate(); });
    const bool want_bs2 = scenario == Scenario::mz_with_bs2;
    if (mz().bs2_present != want_bs2)
      throw ConfigError("scenario " + std::string(to_string(scenario)) + " requires mz.bs2_present = " +
                            (want_bs2 ? "true" : "false"),
                        0, "mz.bs2_present");
    if (internal_overlap || detector_overlap || measurement || single_cavity)
      throw ConfigError("overlaps and measurements apply to two-slit scenarios only", 0, "scenario");
    if (scenario == Scenario::mz_weak_screen) {
      if (!weak_screen)
        throw ConfigError("mz_weak_screen requires a weak screen", 0, "weak_screen.transmittance");
      rethrow_as("weak_screen.transmittance", [&] { weak_screen->validate(); });
      if (!(weak_screen->transmittance + weak_screen->scatter_fraction > 0.0))
        throw ConfigError("weak screen absorbs every particle", 0, "weak_screen.transmittance");
      const auto& r = mz().crossing_region;
      if (weak_screen->position_y < r.y_min || weak_screen->position_y > r.y_max)
        throw ConfigError("weak_screen.position_y lies outside the crossing region", 0,
                          "weak_screen.position_y");
    } else if (weak_screen) {
      throw ConfigError("weak screen applies to mz_weak_screen only", 0, "weak_screen.transmittance");
    }
  }
}

// ─── Key table ──────────────────────────────────────────────────────────────

namespace {

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;
using Getter = std::function<std::optional<std::string>(const ExperimentConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;  // nullopt: key not written for this config
};

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + key + " (expected " +
                        expected + ")",
                    0, key);
}

[[noreturn]] void not_applicable(const std::string& key, const ExperimentConfig& c) {
  throw ConfigError("key " + key + " does not apply to scenario " +
                        std::string(to_string(c.scenario)),
                    0, key);
}

double number(const std::string& key, std::string_view v) {
  if (const auto d = text::parse_double(v)) return *d;
  bad_value(key, v, "a finite number");
}

std::complex<double> complex_number(const std::string& key, std::string_view v) {
  if (const auto z = text::parse_complex(v)) return *z;
  bad_value(key, v, "a number or (re,im)");
}

bool boolean(const std::string& key, std::string_view v) {
  if (const auto b = text::parse_bool(v)) return *b;
  bad_value(key, v, "true or false");
}

TwoSlitGeometryd& slits_of(ExperimentConfig& c, const std::string& key) {
  if (!c.two_slit()) not_applicable(key, c);
  return std::get<TwoSlitGeometryd>(c.geometry);
}

MZGeometryd& mz_of(ExperimentConfig& c, const std::string& key) {
  if (c.two_slit()) not_applicable(key, c);
  return std::get<MZGeometryd>(c.geometry);
}

std::optional<std::string> num(double v) { return text::format_double(v); }
std::optional<std::string> cplx(std::complex<double> v) { return text::format_complex(v); }
std::optional<std::string> flag(bool b) { return std::string(b ? "true" : "false"); }

std::string_view noise_name(PhaseNoise::Kind k) {
  switch (k) {
    case PhaseNoise::Kind::none: return "none";
    case PhaseNoise::Kind::constant: return "constant";
    case PhaseNoise::Kind::uniform: return "uniform";
    case PhaseNoise::Kind::gaussian: return "gaussian";
  }
  return "?";
}

// Two-slit field accessor pair: setter edits through slits_of, getter reads.
template <typename Ref>
Field slit_field(std::string key, Ref ref) {
  Setter set = [key, ref](ExperimentConfig& c, std::string_view v) {
    auto& g = slits_of(c, key);
    if constexpr (std::is_same_v<decltype(ref(g)), std::complex<double>&>) {
      ref(g) = complex_number(key, v);
    } else {
      ref(g) = number(key, v);
    }
  };
  Getter get = [ref](const ExperimentConfig& c) -> std::optional<std::string> {
    if (!c.two_slit()) return std::nullopt;
    auto g = c.slits();
    if constexpr (std::is_same_v<decltype(ref(g)), std::complex<double>&>)
      return cplx(ref(g));
    else
      return num(ref(g));
  };
  return {std::move(key), std::move(set), std::move(get)};
}

template <typename Ref>
Field mz_field(std::string key, Ref ref) {
  Setter set = [key, ref](ExperimentConfig& c, std::string_view v) {
    ref(mz_of(c, key)) = number(key, v);
  };
  Getter get = [ref](const ExperimentConfig& c) -> std::optional<std::string> {
    if (c.two_slit()) return std::nullopt;
    auto g = c.mz();
    return num(ref(g));
  };
  return {std::move(key), std::move(set), std::move(get)};
}

template <typename Ref>
Field noise_field(std::string key, Ref ref) {
  Setter set = [key, ref](ExperimentConfig& c, std::string_view v) { ref(c.noise) = number(key, v); };
  Getter get = [ref](const ExperimentConfig& c) -> std::optional<std::string> {
    auto n = c.noise;
    return num(ref(n));
  };
  return {std::move(key), std::move(set), std::move(get)};
}

// `overlap = none | magnitude` and `overlap.phase = radians` for one freedom.
void add_overlap_fields(std::vector<Field>& fields, const std::string& key,
                        std::optional<Overlap> ExperimentConfig::*member) {
  fields.push_back({key,
                    [key, member](ExperimentConfig& c, std::string_view v) {
                      if (!c.two_slit()) not_applicable(key, c);
                      if (text::trim(v) == "none") {
                        c.*member = std::nullopt;
                        return;
                      }
                      const double m = number(key, v);
                      if (!(m >= 0.0 && m <= 1.0))
                        throw ConfigError(key + " must lie in [0,1] (got " + std::string(text::trim(v)) +
                                              ")",
                                          0, key);
                      const double phase = (c.*member) ? (c.*member)->phase : 0.0;
                      c.*member = Overlap{m, phase};
                    },
                    [member](const ExperimentConfig& c) -> std::optional<std::string> {
                      if (!c.two_slit()) return std::nullopt;
                      if (!(c.*member)) return std::string("none");
                      return num((c.*member)->magnitude);
                    }});
  const std::string phase_key = key + ".phase";
  fields.push_back({phase_key,
                    [key, phase_key, member](ExperimentConfig& c, std::string_view v) {
                      if (!c.two_slit()) not_applicable(phase_key, c);
                      if (!(c.*member))
                        throw ConfigError(phase_key + " requires " + key + " to be set", 0,
                                          phase_key);
                      (c.*member)->phase = number(phase_key, v);
                    },
                    [member](const ExperimentConfig& c) -> std::optional<std::string> {
                      if (!c.two_slit() || !(c.*member)) return std::nullopt;
                      return num((c.*member)->phase);
                    }});
}

WeakScreen& screen_of(ExperimentConfig& c, const std::string& key) {
  if (c.scenario != Scenario::mz_weak_screen) not_applicable(key, c);
  if (!c.weak_screen) c.weak_screen = WeakScreen{};
  return *c.weak_screen;
}

template <typename Ref>
Field screen_field(std::string key, Ref ref) {
  Setter set = [key, ref](ExperimentConfig& c, std::string_view v) {
    ref(screen_of(c, key)) = number(key, v);
  };
  Getter get = [ref](const ExperimentConfig& c) -> std::optional<std::string> {
    if (!c.weak_screen) return std::nullopt;
    auto s = *c.weak_screen;
    return num(ref(s));
  };
  return {std::move(key), std::move(set), std::move(get)};
}

MeasurementOperator& measurement_of(ExperimentConfig& c, const std::string& key) {
  if (!c.two_slit()) not_applicable(key, c);
  if (!c.measurement) c.measurement = MeasurementOperator{};
  return *c.measurement;
}

Field matrix_element_field(std::string key, int j, int i) {
  Setter set = [key, j, i](ExperimentConfig& c, std::string_view v) {
    measurement_of(c, key).matrix_elements(j, i) = complex_number(key, v);
  };
  Getter get = [j, i](const ExperimentConfig& c) -> std::optional<std::string> {
    if (!c.measurement) return std::nullopt;
    return cplx(c.measurement->matrix_elements(j, i));
  };
  return {std::move(key), std::move(set), std::move(get)};
}

std::vector<Field> build_fields() {
  std::vector<Field> f;
  f.push_back({"pattern_convention",
               [](ExperimentConfig& c, std::string_view v) {
                 v = text::trim(v);
                 if (v == "literal")
                   c.pattern_convention = PatternConvention::literal;
                 else if (v == "measurement_mediated")
                   c.pattern_convention = PatternConvention::measurement_mediated;
                 else
                   bad_value("pattern_convention", v, "literal or measurement_mediated");
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 return std::string(c.pattern_convention == PatternConvention::literal
                                        ? "literal"
                                        : "measurement_mediated");
               }});
  f.push_back({"single_cavity",
               [](ExperimentConfig& c, std::string_view v) {
                 if (!has_micromaser(c.scenario)) not_applicable("single_cavity", c);
                 c.single_cavity = boolean("single_cavity", v);
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 if (!has_micromaser(c.scenario)) return std::nullopt;
                 return flag(c.single_cavity);
               }});
  f.push_back({"sampling.points",
               [](ExperimentConfig& c, std::string_view v) {
                 const auto n = text::parse_integer(v);
                 if (!n || *n < 2) bad_value("sampling.points", v, "an integer >= 2");
                 c.sampling_points = static_cast<Eigen::Index>(*n);
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 return std::to_string(c.sampling_points);
               }});
  f.push_back({"beam.wavelength",
               [](ExperimentConfig& c, std::string_view v) {
                 c.beam.wavelength = number("beam.wavelength", v);
               },
               [](const ExperimentConfig& c) { return num(c.beam.wavelength); }});
  f.push_back({"beam.amplitude",
               [](ExperimentConfig& c, std::string_view v) {
                 c.beam.amplitude = complex_number("beam.amplitude", v);
               },
               [](const ExperimentConfig& c) { return cplx(c.beam.amplitude); }});

  f.push_back(slit_field("slits.separation", [](auto& g) -> double& { return g.slit_separation; }));
  f.push_back(slit_field("slits.width", [](auto& g) -> double& { return g.slit_width; }));
  f.push_back(slit_field("slits.distance", [](auto& g) -> double& { return g.screen_distance; }));
  f.push_back(slit_field("slits.amplitude1",
                         [](auto& g) -> std::complex<double>& { return g.slit_amplitudes[0]; }));
  f.push_back(slit_field("slits.amplitude2",
                         [](auto& g) -> std::complex<double>& { return g.slit_amplitudes[1]; }));
  f.push_back(slit_field("screen.x_min", [](auto& g) -> double& { return g.screen.x_min; }));
  f.push_back(slit_field("screen.x_max", [](auto& g) -> double& { return g.screen.x_max; }));
  f.push_back({"screen.points",
               [](ExperimentConfig& c, std::string_view v) {
                 auto& g = slits_of(c, "screen.points");
                 const auto n = text::parse_integer(v);
                 if (!n || *n < 2) bad_value("screen.points", v, "an integer >= 2");
                 g.screen.n_points = static_cast<Eigen::Index>(*n);
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 if (!c.two_slit()) return std::nullopt;
                 return std::to_string(c.slits().screen.n_points);
               }});

  f.push_back({"mz.bs2_present",
               [](ExperimentConfig& c, std::string_view v) {
                 mz_of(c, "mz.bs2_present").bs2_present = boolean("mz.bs2_present", v);
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 if (c.two_slit()) return std::nullopt;
                 return flag(c.mz().bs2_present);
               }});
  f.push_back(mz_field("mz.phase_difference", [](auto& g) -> double& { return g.phase_difference; }));
  f.push_back(
      mz_field("mz.crossing_wavenumber", [](auto& g) -> double& { return g.crossing_wavenumber; }));
  f.push_back(mz_field("mz.region.x_min", [](auto& g) -> double& { return g.crossing_region.x_min; }));
  f.push_back(mz_field("mz.region.x_max", [](auto& g) -> double& { return g.crossing_region.x_max; }));
  f.push_back(mz_field("mz.region.y_min", [](auto& g) -> double& { return g.crossing_region.y_min; }));
  f.push_back(mz_field("mz.region.y_max", [](auto& g) -> double& { return g.crossing_region.y_max; }));

  f.push_back({"noise.distribution",
               [](ExperimentConfig& c, std::string_view v) {
                 v = text::trim(v);
                 for (const auto k : {PhaseNoise::Kind::none, PhaseNoise::Kind::constant,
                                      PhaseNoise::Kind::uniform, PhaseNoise::Kind::gaussian})
                   if (noise_name(k) == v) {
                     c.noise.kind = k;
                     return;
                   }
                 bad_value("noise.distribution", v, "none, constant, uniform or gaussian");
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 return std::string(noise_name(c.noise.kind));
               }});
  f.push_back(noise_field("noise.value", [](PhaseNoise& n) -> double& { return n.value; }));
  f.push_back(noise_field("noise.low", [](PhaseNoise& n) -> double& { return n.low; }));
  f.push_back(noise_field("noise.high", [](PhaseNoise& n) -> double& { return n.high; }));
  f.push_back(noise_field("noise.sigma", [](PhaseNoise& n) -> double& { return n.sigma; }));
  f.push_back({"noise.independent",
               [](ExperimentConfig& c, std::string_view v) {
                 c.noise.independent_per_branch = boolean("noise.independent", v);
               },
               [](const ExperimentConfig& c) { return flag(c.noise.independent_per_branch); }});

  add_overlap_fields(f, "internal_overlap", &ExperimentConfig::internal_overlap);
  add_overlap_fields(f, "detector_overlap", &ExperimentConfig::detector_overlap);

  f.push_back(screen_field("weak_screen.transmittance",
                           [](WeakScreen& s) -> double& { return s.transmittance; }));
  f.push_back(screen_field("weak_screen.scatter_fraction",
                           [](WeakScreen& s) -> double& { return s.scatter_fraction; }));
  f.push_back(
      screen_field("weak_screen.position_y", [](WeakScreen& s) -> double& { return s.position_y; }));
  f.push_back(screen_field("weak_screen.transmission_phase_sigma",
                           [](WeakScreen& s) -> double& { return s.transmission_phase_sigma; }));

  f.push_back({"measurement.mode",
               [](ExperimentConfig& c, std::string_view v) {
                 if (!c.two_slit()) not_applicable("measurement.mode", c);
                 v = text::trim(v);
                 if (v == "none") {
                   c.measurement = std::nullopt;
                 } else if (v == "center_of_mass") {
                   measurement_of(c, "measurement.mode").mode = MeasurementMode::center_of_mass;
                 } else if (v == "internal") {
                   measurement_of(c, "measurement.mode").mode = MeasurementMode::internal;
                 } else {
                   bad_value("measurement.mode", v, "none, center_of_mass or internal");
                 }
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 if (!c.two_slit()) return std::nullopt;
                 if (!c.measurement) return std::string("none");
                 return std::string(c.measurement->mode == MeasurementMode::center_of_mass
                                        ? "center_of_mass"
                                        : "internal");
               }});
  f.push_back({"measurement.com_factor",
               [](ExperimentConfig& c, std::string_view v) {
                 measurement_of(c, "measurement.com_factor").com_factor =
                     complex_number("measurement.com_factor", v);
               },
               [](const ExperimentConfig& c) -> std::optional<std::string> {
                 if (!c.measurement) return std::nullopt;
                 return cplx(c.measurement->com_factor);
               }});
  f.push_back(matrix_element_field("measurement.g11", 0, 0));
  f.push_back(matrix_element_field("measurement.g12", 0, 1));
  f.push_back(matrix_element_field("measurement.g21", 1, 0));
  f.push_back(matrix_element_field("measurement.g22", 1, 1));
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = build_fields();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

std::size_t field_rank(std::string_view key) {
  const auto& t = fields();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i].key == key) return i;
  return t.size();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{"scenario"};
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
  if (key == "scenario")
    throw ConfigError("scenario cannot be overridden; start from a new preset", 0, "scenario");
  const Field* f = find_field(key);
  if (f == nullptr) throw ConfigError("unknown key '" + std::string(key) + "'", 0, std::string(key));
  f->set(config, value);
}

std::string serialize(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "scenario = " << to_string(config.scenario) << '\n';
  for (const auto& f : fields())
    if (const auto v = f.get(config)) out << f.key << " = " << *v << '\n';
  return out.str();
}

// ─── Parser ─────────────────────────────────────────────────────────────────

namespace {

struct Line {
  std::size_t number;
  std::string key;
  std::string value;
};

bool valid_key(std::string_view k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
  });
}

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = text::trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value'", number);
    const auto key = text::trim(raw.substr(0, eq));
    const auto value = text::trim(raw.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("malformed key '" + std::string(key) + "'", number);
    if (value.find('=') != std::string_view::npos)
      throw ConfigError("more than one '=' on a line", number, std::string(key));
    lines.push_back({number, std::string(key), std::string(value)});
  }
  return lines;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  const auto lines = tokenize(text);

  std::map<std::string, std::size_t> line_of;
  for (const auto& l : lines) {
    if (const auto [it, fresh] = line_of.emplace(l.key, l.number); !fresh)
      throw ConfigError("duplicate key '" + l.key + "' (first set on line " +
                            std::to_string(it->second) + ")",
                        l.number, l.key);
    if (l.key != "scenario" && find_field(l.key) == nullptr)
      throw ConfigError("unknown key '" + l.key + "'", l.number, l.key);
  }

  const auto scen = std::find_if(lines.begin(), lines.end(),
                                 [](const Line& l) { return l.key == "scenario"; });
  if (scen == lines.end() || scen->value.empty())
    throw ConfigError("missing required key 'scenario'", scen == lines.end() ? 0 : scen->number,
                      "scenario");
  ExperimentConfig config;
  try {
    config = build_preset(scenario_from_string(scen->value));
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), scen->number, "scenario");
  }

  // Table order, so an overlap magnitude is always applied before its phase.
  std::vector<const Line*> ordered;
  for (const auto& l : lines)
    if (l.key != "scenario") ordered.push_back(&l);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Line* a, const Line* b) {
    return field_rank(a->key) < field_rank(b->key);
  });
  for (const Line* l : ordered) {
    try {
      set_config_value(config, l->key, l->value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), l->number, l->key);
    }
  }

  // An MZ crossing wavenumber follows the beam unless given explicitly.
  if (!config.two_slit() && line_of.contains("beam.wavelength") &&
      !line_of.contains("mz.crossing_wavenumber"))
    std::get<MZGeometryd>(config.geometry).crossing_wavenumber = config.beam.wavenumber();

  try {
    config.validate();
  } catch (const ConfigError& e) {
    std::size_t line = 0;
    if (const auto it = line_of.find(e.key()); it != line_of.end()) line = it->second;
    throw ConfigError(e.what(), line, e.key());
  }
  return config;
}

}  // namespace twopath
