#include "twopath/composite.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>

namespace twopath {

StateVector::StateVector(Eigen::VectorXcd components) : components_(std::move(components)) {
  if (components_.size() < 1) throw std::invalid_argument("state vector needs dimension >= 1");
  if (!components_.allFinite()) throw std::invalid_argument("state vector has non-finite entries");
  const double n = components_.norm();
  if (!(n > 0.0)) throw std::invalid_argument("state vector has zero norm");
  components_ /= n;
}

StateVector StateVector::basis(Eigen::Index dimension, Eigen::Index k) {
  if (k < 0 || k >= dimension) throw std::invalid_argument("basis index out of range");
  return StateVector(Eigen::VectorXcd::Unit(dimension, k));
}

std::complex<double> inner(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("inner product of states with different dimensions");
  return a.components().dot(b.components());
}

std::pair<StateVector, StateVector> overlapping_pair(double magnitude, double phase) {
  if (!(magnitude >= 0.0 && magnitude <= 1.0))
    throw std::invalid_argument("overlap magnitude must lie in [0,1]");
  Eigen::VectorXcd partner(2);
  partner << std::polar(magnitude, phase), std::sqrt(1.0 - magnitude * magnitude);
  return {StateVector::basis(2, 0), StateVector(partner)};
}

void CompositeState::validate() const {
  geometry.validate();
  beam.validate();
  if (branches[0].path != Slit::one || branches[1].path != Slit::two)
    throw std::invalid_argument("composite state needs branches for slit 1 and slit 2 in order");
  if (branches[0].internal.dimension() != branches[1].internal.dimension())
    throw std::invalid_argument("internal state dimensions differ between branches");
  if (branches[0].detector.dimension() != branches[1].detector.dimension())
    throw std::invalid_argument("detector state dimensions differ between branches");
  for (const auto& b : branches)
    if (!std::isfinite(b.extra_phase) || !std::isfinite(std::abs(b.com_scale)))
      throw std::invalid_argument("branch phase and scale must be finite");
}

std::complex<double> overlap_factor(const CompositeState& state) {
  const auto& [b1, b2] = state.branches;
  return inner(b1.internal, b2.internal) * inner(b1.detector, b2.detector);
}

std::array<std::complex<double>, 2> branch_amplitudes(const CompositeState& state, double x) {
  const auto psi = slit_fields(state.geometry, state.beam, x);
  std::array<std::complex<double>, 2> out;
  for (int i = 0; i < 2; ++i) {
    const auto& b = state.branches[i];
    out[i] = b.com_scale * psi[i] * std::polar(1.0, b.extra_phase);
  }
  return out;
}

Eigen::VectorXcd composite_vector(const CompositeState& state, double x) {
  const auto psi = branch_amplitudes(state, x);
  const auto& [b1, b2] = state.branches;
  Eigen::VectorXcd v = psi[0] * Eigen::kroneckerProduct(b1.internal.components(),
                                                        b1.detector.components()).eval();
  v += psi[1] * Eigen::kroneckerProduct(b2.internal.components(), b2.detector.components()).eval();
  return v;
}

FringeTerms fringe_terms(const CompositeState& state, const Eigen::Ref<const Eigen::ArrayXd>& xs,
                         PatternConvention convention) {
  const std::complex<double> gamma =
      convention == PatternConvention::literal ? overlap_factor(state) : std::complex<double>{1.0};
  const auto s1 = state.branches[0].com_scale;
  const auto s2 = state.branches[1].com_scale;
  FringeTerms t{Eigen::ArrayXd(xs.size()), Eigen::ArrayXcd(xs.size())};
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const auto psi = slit_fields(state.geometry, state.beam, xs(i));
    const auto p1 = s1 * psi[0], p2 = s2 * psi[1];
    t.direct(i) = std::norm(p1) + std::norm(p2);
    t.cross(i) = 2.0 * gamma * std::conj(p1) * p2;
  }
  return t;
}

std::complex<double> branch_phase_factor(const CompositeState& state) {
  return std::polar(1.0, state.branches[1].extra_phase - state.branches[0].extra_phase);
}

double literal_pattern(const CompositeState& state, double x) {
  return literal_pattern(state, Eigen::ArrayXd::Constant(1, x))(0);
}

Eigen::ArrayXd literal_pattern(const CompositeState& state,
                               const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  return fringe_terms(state, xs, PatternConvention::literal).evaluate(branch_phase_factor(state));
}

Eigen::ArrayXd screen_pattern(const CompositeState& state,
                              const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  return fringe_terms(state, xs, state.convention).evaluate(branch_phase_factor(state));
}

double local_visibility(const CompositeState& state, double x) {
  const auto t = fringe_terms(state, Eigen::ArrayXd::Constant(1, x), PatternConvention::literal);
  return t.direct(0) > 0.0 ? std::abs(t.cross(0)) / t.direct(0) : 0.0;
}

void PhaseNoise::validate() const {
  if (!std::isfinite(value) || !std::isfinite(low) || !std::isfinite(high) || !std::isfinite(sigma))
    throw std::invalid_argument("phase noise parameters must be finite");
  if (kind == Kind::uniform && !(low <= high))
    throw std::invalid_argument("uniform phase noise requires low <= high");
  if (kind == Kind::gaussian && !(sigma >= 0.0))
    throw std::invalid_argument("gaussian phase noise requires sigma >= 0");
}

std::array<double, 2> draw_phases(const PhaseNoise& noise, RngStream& rng) {
  auto one = [&] {
    return noise.kind == PhaseNoise::Kind::uniform ? rng.uniform(noise.low, noise.high)
                                                   : noise.sigma * rng.normal();
  };
  switch (noise.kind) {
    case PhaseNoise::Kind::none:
      return {0.0, 0.0};
    case PhaseNoise::Kind::constant:
      return {noise.value, noise.value};
    case PhaseNoise::Kind::uniform:
    case PhaseNoise::Kind::gaussian: {
      const double first = one();
      return {first, noise.independent_per_branch ? one() : first};
    }
  }
  return {0.0, 0.0};
}

CompositeState dephase(const CompositeState& state, const PhaseNoise& noise, RngStream& rng) {
  noise.validate();
  if (noise.kind == PhaseNoise::Kind::none) return state;
  CompositeState out = state;
  const auto phases = draw_phases(noise, rng);
  out.branches[0].extra_phase = phases[0];
  out.branches[1].extra_phase = phases[1];
  return out;
}

Eigen::ArrayXd ensemble_pattern(const CompositeState& state, const PhaseNoise& noise,
                                std::size_t n_draws, RngStream& rng,
                                const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  if (n_draws == 0) throw std::invalid_argument("ensemble needs at least one draw");
  noise.validate();
  // Each draw contributes direct + Re[cross z_k]; averaging the profiles is
  // averaging z_k.
  std::complex<double> sum{0.0};
  for (std::size_t k = 0; k < n_draws; ++k) sum += branch_phase_factor(dephase(state, noise, rng));
  const auto terms = fringe_terms(state, xs, state.convention);
  return terms.evaluate(sum / static_cast<double>(n_draws));
}

}  // namespace twopath
