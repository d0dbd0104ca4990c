#include "twopath/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace twopath {

std::string config_digest(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

namespace {

FringeTerms screen_signal(const ExperimentConfig& config, const CompositeState& state,
                          const Eigen::ArrayXd& xs) {
  if (const auto m = config.effective_measurement()) {
    if (config.pattern_convention == PatternConvention::measurement_mediated)
      return measured_terms(*m, state, xs);
    return fringe_terms(apply_measurement(*m, state), xs, PatternConvention::literal);
  }
  return fringe_terms(state, xs, config.pattern_convention);
}

}  // namespace

ExperimentEngine::ExperimentEngine(const ExperimentConfig& config) : config_(config) {
  config_.validate();
  if (config_.two_slit()) {
    state_ = config_.composite_state();
    const auto& screen = config_.slits().screen;
    cells_ = CellGrid{screen.x_min, screen.x_max, config_.sampling_points};
    terms_ = screen_signal(config_, *state_, cells_.centers());
    const double scale = terms_.direct.abs().maxCoeff();
    if (((terms_.direct - terms_.cross.abs()) < -1e-12 * scale).any())
      throw ConfigError("configured measurement yields a negative detection rate", 0,
                        "measurement.mode");
    if (!(terms_.direct.sum() > 0.0))
      throw ConfigError("no intensity reaches the screen range", 0, "screen.x_min");
    sampler_.emplace(terms_.direct, terms_.cross, cells_);
  } else if (config_.weak_screen) {
    screen_.emplace(*config_.weak_screen, config_.mz(), config_.beam, config_.sampling_points);
  }
}

std::array<double, 2> ExperimentEngine::path_probabilities(const std::array<double, 2>& phases,
                                                          double x) const {
  CompositeState st = *state_;
  st.branches[0].extra_phase = phases[0];
  st.branches[1].extra_phase = phases[1];
  const auto amps = branch_amplitudes(st, x);
  std::array<double, 2> p{std::norm(amps[0]), std::norm(amps[1])};

  if (config_.pattern_convention == PatternConvention::literal) {
    // Project the composite vector onto the detector basis at the sampled x.
    const Eigen::VectorXcd v = composite_vector(st, x);
    const Eigen::Index dd = st.branches[0].detector.dimension();
    if (dd == 2) {
      std::array<double, 2> q{0.0, 0.0};
      for (Eigen::Index k = 0; k < v.size(); ++k) q[static_cast<std::size_t>(k % dd)] += std::norm(v(k));
      if (q[0] + q[1] > 0.0) p = q;
    }
  }
  const double total = p[0] + p[1];
  if (!(total > 0.0)) return {0.5, 0.5};
  return {p[0] / total, p[1] / total};
}

DetectionEvent ExperimentEngine::generate(std::uint64_t event_id, RngStream& rng) const {
  DetectionEvent ev;
  ev.event_id = event_id;
  ev.experiment = config_.scenario;
  ev.stream_id = rng.stream_id();

  const auto phases = draw_phases(config_.noise, rng);
  const auto z = std::polar(1.0, phases[1] - phases[0]);

  if (sampler_) {
    const double x = sampler_->sample(z, rng);
    ev.screen_x = x;
    if (has_micromaser(config_.scenario))
      ev.whichway = micromaser_record(path_probabilities(phases, x), config_.single_cavity, rng);
    return ev;
  }

  const auto& mz = config_.mz();
  if (screen_) {
    for (;;) {
      const auto outcome = screen_->interact(rng, z);
      if (const auto* s = std::get_if<Scattered>(&outcome)) {
        ev.scatter_xy = std::array<double, 2>{s->x, s->y};
        return ev;
      }
      if (std::holds_alternative<Transmitted>(outcome)) {
        ev.mz_port = rng.bernoulli(0.5) ? Port::x : Port::y;
        return ev;
      }
    }
  }
  double px = 0.5;
  if (mz.bs2_present) {
    MZGeometryd shifted = mz;
    shifted.phase_difference += phases[1] - phases[0];
    const double ix = mz_port_intensity(shifted, config_.beam, Port::x);
    const double iy = mz_port_intensity(shifted, config_.beam, Port::y);
    px = ix / (ix + iy);
  }
  ev.mz_port = rng.bernoulli(px) ? Port::x : Port::y;
  return ev;
}

std::vector<DetectionEvent> run_stream(const ExperimentEngine& engine, std::uint64_t first_id,
                                       std::uint64_t count, std::uint64_t seed,
                                       std::uint64_t stream_id) {
  RngStream rng(seed, stream_id);
  std::vector<DetectionEvent> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(engine.generate(first_id + i, rng));
  return out;
}

std::vector<DetectionEvent> merge_streams(std::vector<std::vector<DetectionEvent>> streams) {
  std::vector<DetectionEvent> out;
  for (auto& s : streams) out.insert(out.end(), s.begin(), s.end());
  std::stable_sort(out.begin(), out.end(), [](const DetectionEvent& a, const DetectionEvent& b) {
    return a.stream_id != b.stream_id ? a.stream_id < b.stream_id : a.event_id < b.event_id;
  });
  return out;
}

EventLog run_experiment(const ExperimentConfig& config, std::uint64_t n_events, std::uint64_t seed,
                        unsigned threads) {
  const ExperimentEngine engine(config);
  if (n_events < 1) throw std::invalid_argument("n_events must be at least 1");

  const std::uint64_t chunks = (n_events + kEventsPerStream - 1) / kEventsPerStream;
  std::vector<std::vector<DetectionEvent>> parts(chunks);
  auto work = [&](std::uint64_t k) {
    const std::uint64_t first = k * kEventsPerStream;
    parts[k] = run_stream(engine, first, std::min(kEventsPerStream, n_events - first), seed, k);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::uint64_t k = 0; k < chunks; ++k) work(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t k = w; k < chunks; k += workers) work(k);
      });
  }

  EventLog log;
  log.config_digest = config_digest(config);
  log.events = merge_streams(std::move(parts));
  return log;
}

}  // namespace twopath
