/**
 * montecarlo.hpp — per-particle event generation.
 *
 * Events are produced in fixed-size chunks; chunk k draws from
 * RngStream(seed, k), so a run is reproducible for any thread count and
 * chunks can be generated in parallel.
 */

#pragma once

#include "twopath/config.hpp"
#include "twopath/measurement.hpp"
#include "twopath/rng.hpp"
#include "twopath/sampling.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twopath {

struct DetectionEvent {
  std::uint64_t event_id{0};
  Scenario experiment{Scenario::young_baseline};
  std::optional<double> screen_x;
  std::optional<Port> mz_port;
  std::optional<WhichWayRecord> whichway;
  std::optional<std::array<double, 2>> scatter_xy;
  std::uint64_t stream_id{0};

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

struct EventLog {
  std::vector<DetectionEvent> events;
  std::string config_digest;

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

inline constexpr std::uint64_t kEventsPerStream = std::uint64_t{1} << 16;

/// FNV-1a 64 of serialize(config), as 16 hex digits.
[[nodiscard]] std::string config_digest(const ExperimentConfig& config);

/// Precomputed samplers for one configuration.
class ExperimentEngine {
 public:
  /// Validates; throws ConfigError before anything is sampled.
  explicit ExperimentEngine(const ExperimentConfig& config);

  [[nodiscard]] DetectionEvent generate(std::uint64_t event_id, RngStream& rng) const;
  [[nodiscard]] const ExperimentConfig& config() const { return config_; }

  /// Screen signal as direct + Re[cross z] on the sampling cells (two-slit only).
  [[nodiscard]] const FringeTerms& screen_terms() const { return terms_; }
  [[nodiscard]] const CellGrid& screen_cells() const { return cells_; }

 private:
  [[nodiscard]] std::array<double, 2> path_probabilities(const std::array<double, 2>& phases,
                                                        double x) const;

  ExperimentConfig config_;
  std::optional<CompositeState> state_;
  FringeTerms terms_;
  CellGrid cells_{};
  std::optional<FringeSampler> sampler_;
  std::optional<WeakScreenModel> screen_;
};

/// `count` events with ids first_id, first_id + 1, ... drawn from RngStream(seed, stream_id).
[[nodiscard]] std::vector<DetectionEvent> run_stream(const ExperimentEngine& engine,
                                                     std::uint64_t first_id, std::uint64_t count,
                                                     std::uint64_t seed, std::uint64_t stream_id);

/// Concatenation ordered by (stream_id, event_id).
[[nodiscard]] std::vector<DetectionEvent> merge_streams(
    std::vector<std::vector<DetectionEvent>> streams);

[[nodiscard]] EventLog run_experiment(const ExperimentConfig& config, std::uint64_t n_events,
                                      std::uint64_t seed, unsigned threads = 1);

}  // namespace twopath
