/**
 * composite.hpp — quantum objects carrying internal and detector freedoms.
 *
 * A two-branch state
 *
 *     Psi(x) = psi_1(x) e^{i dphi_1} phi_1 (x) chi_1 + psi_2(x) e^{i dphi_2} phi_2 (x) chi_2
 *
 * pairs the center-of-mass screen amplitude of each slit with a unit vector in
 * an internal space (phi) and one in a which-way detector space (chi). The
 * literal screen pattern is the squared norm of Psi(x):
 *
 *     |psi_1|^2 + |psi_2|^2 + 2 Re[<phi_1|phi_2><chi_1|chi_2> conj(psi_1) psi_2 e^{i(dphi_2 - dphi_1)}]
 *
 * Both the pattern and its ensemble average over random branch phases are
 * linear in z = e^{i(dphi_2 - dphi_1)}, which FringeTerms exposes directly.
 */

#pragma once

#include "twopath/rng.hpp"
#include "twopath/wavefield.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <utility>

namespace twopath {

/// Unit vector in a small Hilbert space. Always normalized on construction.
class StateVector {
 public:
  /// The trivial one-dimensional space.
  StateVector() : components_(Eigen::VectorXcd::Ones(1)) {}
  explicit StateVector(Eigen::VectorXcd components);

  static StateVector basis(Eigen::Index dimension, Eigen::Index k);

  [[nodiscard]] Eigen::Index dimension() const { return components_.size(); }
  [[nodiscard]] const Eigen::VectorXcd& components() const { return components_; }
  [[nodiscard]] bool trivial() const { return dimension() == 1; }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.dimension() == b.dimension() && a.components_ == b.components_;
  }

 private:
  Eigen::VectorXcd components_;
};

/// <a|b>, conjugate-linear in `a`. Throws std::invalid_argument on dimension mismatch.
[[nodiscard]] std::complex<double> inner(const StateVector& a, const StateVector& b);

/// Two 2-d unit vectors with <first|second> = magnitude * e^{i phase}.
[[nodiscard]] std::pair<StateVector, StateVector> overlapping_pair(double magnitude,
                                                                   double phase = 0.0);

enum class PatternConvention { literal, measurement_mediated };

struct Branch {
  Slit path{Slit::one};
  std::complex<double> com_scale{1.0};
  StateVector internal{};
  StateVector detector{};
  double extra_phase{0.0};

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct CompositeState {
  TwoSlitGeometryd geometry{};
  BeamSpecd beam{};
  std::array<Branch, 2> branches{Branch{Slit::one}, Branch{Slit::two}};
  PatternConvention convention{PatternConvention::literal};

  void validate() const;

  friend bool operator==(const CompositeState&, const CompositeState&) = default;
};

/// <phi_1|phi_2><chi_1|chi_2>; the default trivial states contribute 1.
[[nodiscard]] std::complex<double> overlap_factor(const CompositeState& state);

/// psi_i(x) including the branch scale and extra phase.
[[nodiscard]] std::array<std::complex<double>, 2> branch_amplitudes(const CompositeState& state,
                                                                    double x);

/// Kronecker-assembled Psi(x) in internal (x) detector space.
[[nodiscard]] Eigen::VectorXcd composite_vector(const CompositeState& state, double x);

/// Pattern split as direct(x) + Re[cross(x) z]; branch extra phases are left
/// out so the caller supplies z.
struct FringeTerms {
  Eigen::ArrayXd direct;
  Eigen::ArrayXcd cross;

  [[nodiscard]] Eigen::ArrayXd evaluate(std::complex<double> z) const {
    return direct + (cross * z).real();
  }
};

[[nodiscard]] FringeTerms fringe_terms(const CompositeState& state,
                                       const Eigen::Ref<const Eigen::ArrayXd>& xs,
                                       PatternConvention convention);

/// e^{i(dphi_2 - dphi_1)} for the state's current branch phases.
[[nodiscard]] std::complex<double> branch_phase_factor(const CompositeState& state);

[[nodiscard]] double literal_pattern(const CompositeState& state, double x);
[[nodiscard]] Eigen::ArrayXd literal_pattern(const CompositeState& state,
                                             const Eigen::Ref<const Eigen::ArrayXd>& xs);

/// Pattern under the state's convention: literal |Psi|^2, or the
/// center-of-mass-only signal that ignores internal and detector overlaps.
[[nodiscard]] Eigen::ArrayXd screen_pattern(const CompositeState& state,
                                            const Eigen::Ref<const Eigen::ArrayXd>& xs);

/// Local fringe contrast |cross(x)| / direct(x) of the literal pattern.
[[nodiscard]] double local_visibility(const CompositeState& state, double x);

struct PhaseNoise {
  enum class Kind { none, constant, uniform, gaussian };

  Kind kind{Kind::none};
  double value{0.0};  // constant
  double low{0.0};    // uniform
  double high{0.0};
  double sigma{0.0};  // gaussian, zero mean
  bool independent_per_branch{true};

  void validate() const;
  [[nodiscard]] bool random() const { return kind == Kind::uniform || kind == Kind::gaussian; }

  friend bool operator==(const PhaseNoise&, const PhaseNoise&) = default;
};

/// One draw of (dphi_1, dphi_2). Kind::none yields nothing and consumes no randomness.
[[nodiscard]] std::array<double, 2> draw_phases(const PhaseNoise& noise, RngStream& rng);

[[nodiscard]] CompositeState dephase(const CompositeState& state, const PhaseNoise& noise,
                                     RngStream& rng);

/// Average of screen_pattern over `n_draws` dephased copies.
[[nodiscard]] Eigen::ArrayXd ensemble_pattern(const CompositeState& state, const PhaseNoise& noise,
                                              std::size_t n_draws, RngStream& rng,
                                              const Eigen::Ref<const Eigen::ArrayXd>& xs);

}  // namespace twopath
