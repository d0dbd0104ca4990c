#include "twopath/measurement.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twopath {

MeasurementOperator MeasurementOperator::center_of_mass(std::complex<double> factor) {
  MeasurementOperator m;
  m.mode = MeasurementMode::center_of_mass;
  m.com_factor = factor;
  m.validate();
  return m;
}

MeasurementOperator MeasurementOperator::internal(std::array<StateVector, 2> targets,
                                                  const Eigen::Matrix2cd& elements) {
  MeasurementOperator m;
  m.mode = MeasurementMode::internal;
  m.internal_targets = std::move(targets);
  m.matrix_elements = elements;
  m.validate();
  return m;
}

MeasurementOperator MeasurementOperator::internal_from_matrix(const Eigen::MatrixXcd& op,
                                                              const CompositeState& state,
                                                              std::array<StateVector, 2> targets) {
  const Eigen::Index dim = state.branches[0].internal.dimension();
  if (op.rows() != dim || op.cols() != dim || targets[0].dimension() != dim ||
      targets[1].dimension() != dim)
    throw std::invalid_argument("measurement operator does not act on the internal space");
  Eigen::Matrix2cd g;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      g(j, i) = state.branches[j].internal.components().dot(op * targets[i].components());
  return internal(std::move(targets), g);
}

void MeasurementOperator::validate() const {
  switch (mode) {
    case MeasurementMode::center_of_mass:
      if (!std::isfinite(com_factor.real()) || !std::isfinite(com_factor.imag()) ||
          com_factor == std::complex<double>{0.0})
        throw std::invalid_argument("center-of-mass factor must be finite and nonzero");
      break;
    case MeasurementMode::internal:
      if (internal_targets[0].dimension() != internal_targets[1].dimension())
        throw std::invalid_argument("internal targets have different dimensions");
      if (!matrix_elements.allFinite())
        throw std::invalid_argument("internal matrix elements must be finite");
      break;
  }
}

CompositeState apply_measurement(const MeasurementOperator& m, const CompositeState& state) {
  m.validate();
  CompositeState out = state;
  if (m.mode == MeasurementMode::center_of_mass) {
    for (auto& b : out.branches) b.com_scale *= m.com_factor;
  } else {
    if (m.internal_targets[0].dimension() != state.branches[0].internal.dimension())
      throw std::invalid_argument("internal targets do not match the state's internal space");
    out.branches[0].internal = m.internal_targets[0];
    out.branches[1].internal = m.internal_targets[1];
  }
  return out;
}

double measured_signal(const MeasurementOperator& m, const CompositeState& state, double x) {
  m.validate();
  const auto psi = branch_amplitudes(state, x);
  if (m.mode == MeasurementMode::center_of_mass) {
    const auto cross = std::conj(psi[0]) * psi[1];
    return std::norm(m.com_factor) *
           (std::norm(psi[0]) + std::norm(psi[1]) + 2.0 * cross.real());
  }
  const auto& g = m.matrix_elements;
  const std::complex<double> total = std::norm(psi[0]) * g(0, 0) + std::norm(psi[1]) * g(1, 1) +
                                     std::conj(psi[0]) * psi[1] * g(0, 1) +
                                     psi[0] * std::conj(psi[1]) * g(1, 0);
  return total.real();
}

Eigen::ArrayXd measured_signal(const MeasurementOperator& m, const CompositeState& state,
                               const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  Eigen::ArrayXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = measured_signal(m, state, xs(i));
  return out;
}

FringeTerms measured_terms(const MeasurementOperator& m, const CompositeState& state,
                           const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  m.validate();
  if (m.mode == MeasurementMode::center_of_mass) {
    auto t = fringe_terms(state, xs, PatternConvention::measurement_mediated);
    const double scale = std::norm(m.com_factor);
    t.direct *= scale;
    t.cross *= scale;
    return t;
  }
  const auto& g = m.matrix_elements;
  const auto s1 = state.branches[0].com_scale;
  const auto s2 = state.branches[1].com_scale;
  FringeTerms t{Eigen::ArrayXd(xs.size()), Eigen::ArrayXcd(xs.size())};
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const auto psi = slit_fields(state.geometry, state.beam, xs(i));
    const auto p1 = s1 * psi[0], p2 = s2 * psi[1];
    t.direct(i) = std::norm(p1) * g(0, 0).real() + std::norm(p2) * g(1, 1).real();
    // Re[c12 z + c21 conj(z)] = Re[(c12 + conj(c21)) z]
    t.cross(i) = std::conj(p1) * p2 * g(0, 1) + std::conj(p1 * std::conj(p2) * g(1, 0));
  }
  return t;
}

FringeHistogram path_reference_histogram(const CompositeState& state, Slit slit,
                                         const FringeHistogram& binning, double count,
                                         double screen_lo, double screen_hi) {
  if (!(screen_lo < screen_hi)) throw std::invalid_argument("screen interval must be nonempty");
  const int i = index_of(slit);
  auto density = [&](double x) { return std::norm(branch_amplitudes(state, x)[i]); };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto integrate = [&](double a, double b) {
    return b > a ? Quadrature::integrate(density, a, b, 12, 1e-12) : 0.0;
  };
  const double total = integrate(screen_lo, screen_hi);
  if (!(total > 0.0)) throw std::invalid_argument("path carries no intensity on the screen");
  FringeHistogram out = binning;
  for (Eigen::Index b = 0; b < out.bins(); ++b) {
    const double lo = std::max(out.edges(b), screen_lo);
    const double hi = std::min(out.edges(b + 1), screen_hi);
    out.counts(b) = count * integrate(lo, hi) / total;
  }
  return out;
}

void WeakScreen::validate() const {
  const double T = transmittance, s = scatter_fraction;
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("transmittance must lie in [0,1]");
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("scatter fraction must lie in [0,1]");
  if (T + s > 1.0 + 1e-12)
    throw std::invalid_argument("transmittance + scatter fraction must not exceed 1");
  if (!std::isfinite(position_y)) throw std::invalid_argument("screen position must be finite");
  if (!(transmission_phase_sigma >= 0.0) || !std::isfinite(transmission_phase_sigma))
    throw std::invalid_argument("transmission phase sigma must be finite and >= 0");
}

namespace {

FringeSampler screen_line_sampler(const WeakScreen& screen, const MZGeometryd& mz,
                                  const BeamSpecd& beam, Eigen::Index cells) {
  screen.validate();
  mz.validate();
  const auto& r = mz.crossing_region;
  if (screen.position_y < r.y_min || screen.position_y > r.y_max)
    throw std::invalid_argument("weak screen line lies outside the crossing region");
  const CellGrid grid{r.x_min, r.x_max, cells};
  const Eigen::ArrayXd xs = grid.centers();
  const double I0 = std::norm(beam.amplitude);
  const double k0 = mz.crossing_wavenumber;
  // 1 + cos(k0 x - k0 y + dphi) as direct + Re[cross]
  const Eigen::ArrayXd direct = Eigen::ArrayXd::Constant(cells, I0);
  Eigen::ArrayXcd cross(cells);
  for (Eigen::Index i = 0; i < cells; ++i)
    cross(i) = I0 * std::polar(1.0, k0 * xs(i) - k0 * screen.position_y + mz.phase_difference);
  return FringeSampler(direct, cross, grid);
}

}  // namespace

WeakScreenModel::WeakScreenModel(const WeakScreen& screen, const MZGeometryd& mz,
                                 const BeamSpecd& beam, Eigen::Index cells)
    : screen_(screen), sampler_(screen_line_sampler(screen, mz, beam, cells)) {}

ScreenOutcome WeakScreenModel::interact(RngStream& rng, std::complex<double> z) const {
  const double u = rng.uniform();
  if (u < screen_.scatter_fraction) return Scattered{sampler_.sample(z, rng), screen_.position_y};
  if (u < screen_.scatter_fraction + screen_.transmittance) {
    if (screen_.transmission_phase_sigma > 0.0)
      return Transmitted{screen_.transmission_phase_sigma * rng.normal()};
    return Transmitted{};
  }
  return Absorbed{};
}

ScreenOutcome weak_screen_interact(const WeakScreen& screen, const MZGeometryd& mz,
                                   const BeamSpecd& beam, RngStream& rng) {
  return WeakScreenModel(screen, mz, beam).interact(rng);
}

WhichWayRecord micromaser_record(std::array<double, 2> p, bool single_cavity, RngStream& rng) {
  if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || p[0] < 0.0 || p[1] < 0.0 ||
      std::abs(p[0] + p[1] - 1.0) > 1e-9)
    throw std::invalid_argument("slit probabilities must be nonnegative and sum to 1");
  const bool through_first = rng.uniform() < p[0];
  WhichWayRecord r;
  r.single_cavity_mode = single_cavity;
  if (through_first)
    r.cavity1_photons = 1;
  else if (!single_cavity)
    r.cavity2_photons = 1;
  return r;
}

FringeHistogram coincidence_modulate(const FringeHistogram& joint, const FringeHistogram& single1,
                                     const FringeHistogram& single2, double gamma) {
  if (!joint.same_binning(single1) || !joint.same_binning(single2))
    throw std::invalid_argument("coincidence modulation needs identical binning");
  if (!(gamma >= -1.0 && gamma <= 1.0))
    throw std::invalid_argument("modulation factor must lie in [-1,1]");
  FringeHistogram out = joint;
  const Eigen::ArrayXd background = single1.counts + single2.counts;
  out.counts = ((1.0 - gamma) * background + gamma * joint.counts).max(0.0);
  return out;
}

}  // namespace twopath
