/**
 * config.hpp — experiment configuration, presets and the text format.
 *
 * Configuration files are line-oriented:
 *
 *     # comment
 *     scenario = young_micromaser
 *     detector_overlap = 0.5
 *     weak_screen.transmittance = 0.99
 *
 * The scenario is read first and its preset supplies every default; the
 * remaining lines override individual fields. serialize() writes every
 * field, so parse_config(serialize(c)) == c.
 */

#pragma once

#include "twopath/composite.hpp"
#include "twopath/measurement.hpp"
#include "twopath/wavefield.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twopath {

/// Configuration problem. `line` is 1-based, 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0, std::string key = {});

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

enum class Scenario {
  young_baseline,
  young_random_phase,
  young_internal_incoherent,
  young_micromaser,
  young_single_cavity,
  mz_with_bs2,
  mz_without_bs2,
  mz_weak_screen,
  eraser_modulation,
};

inline constexpr std::array kAllScenarios{
    Scenario::young_baseline,      Scenario::young_random_phase, Scenario::young_internal_incoherent,
    Scenario::young_micromaser,    Scenario::young_single_cavity, Scenario::mz_with_bs2,
    Scenario::mz_without_bs2,      Scenario::mz_weak_screen,     Scenario::eraser_modulation,
};

[[nodiscard]] std::string_view to_string(Scenario s);
/// Throws ConfigError listing the valid names.
[[nodiscard]] Scenario scenario_from_string(std::string_view name);

[[nodiscard]] bool uses_two_slit(Scenario s);
/// Micromaser cavities record the path of every particle.
[[nodiscard]] bool has_micromaser(Scenario s);

/// <first|second> = magnitude e^{i phase}.
struct Overlap {
  double magnitude{0.0};
  double phase{0.0};

  friend bool operator==(const Overlap&, const Overlap&) = default;
};

struct ExperimentConfig {
  Scenario scenario{Scenario::young_baseline};
  BeamSpecd beam{};
  std::variant<TwoSlitGeometryd, MZGeometryd> geometry{TwoSlitGeometryd{}};
  PhaseNoise noise{};
  std::optional<Overlap> internal_overlap;  // nullopt: trivial internal space
  std::optional<Overlap> detector_overlap;  // nullopt: no detector
  std::optional<WeakScreen> weak_screen;
  std::optional<MeasurementOperator> measurement;
  PatternConvention pattern_convention{PatternConvention::literal};
  bool single_cavity{false};
  Eigen::Index sampling_points{4096};

  /// Throws ConfigError whose key() names the offending field.
  void validate() const;

  [[nodiscard]] bool two_slit() const {
    return std::holds_alternative<TwoSlitGeometryd>(geometry);
  }
  [[nodiscard]] const TwoSlitGeometryd& slits() const;
  [[nodiscard]] const MZGeometryd& mz() const;

  /// Two-slit scenarios only.
  [[nodiscard]] CompositeState composite_state() const;
  /// The configured measurement with internal targets taken from the state.
  [[nodiscard]] std::optional<MeasurementOperator> effective_measurement() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

[[nodiscard]] ExperimentConfig build_preset(Scenario s);

[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
[[nodiscard]] std::string serialize(const ExperimentConfig& config);

/// Applies one `key = value` override. Throws ConfigError (line 0) on an
/// unknown key, a key that does not apply to the scenario, or a bad value.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Every key accepted by set_config_value, in serialization order.
[[nodiscard]] const std::vector<std::string>& config_keys();

}  // namespace twopath
