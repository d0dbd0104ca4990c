/**
 * measurement.hpp — measurement operators and which-way instruments.
 *
 * A measurement acts either on the center-of-mass amplitudes (a linear
 * factor A applied to both branches) or on the internal freedom (the branch
 * internal states are mapped to new states). In the internal case the
 * recorded signal is
 *
 *     Re[ |psi_1|^2 g11 + |psi_2|^2 g22 + conj(psi_1) psi_2 g12 + psi_1 conj(psi_2) g21 ]
 *
 * with g_ji = <phi_j| M |phi_i,M>.
 *
 * Instruments are ideal state maps: the weak screen scatters a fixed
 * fraction of particles with probability proportional to the local crossing
 * intensity, and the micromaser cavities gain exactly one photon on the
 * traversed path.
 */

#pragma once

#include "twopath/composite.hpp"
#include "twopath/histogram.hpp"
#include "twopath/rng.hpp"
#include "twopath/sampling.hpp"
#include "twopath/wavefield.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <variant>

namespace twopath {

enum class MeasurementMode { center_of_mass, internal };

struct MeasurementOperator {
  MeasurementMode mode{MeasurementMode::center_of_mass};
  std::complex<double> com_factor{1.0};
  std::array<StateVector, 2> internal_targets{};
  Eigen::Matrix2cd matrix_elements{Eigen::Matrix2cd::Ones()};  // (j, i) = <phi_j|M|phi_i,M>

  static MeasurementOperator center_of_mass(std::complex<double> factor);
  static MeasurementOperator internal(std::array<StateVector, 2> targets,
                                      const Eigen::Matrix2cd& elements);
  /// Matrix elements computed from an explicit operator on the internal space.
  static MeasurementOperator internal_from_matrix(const Eigen::MatrixXcd& op,
                                                  const CompositeState& state,
                                                  std::array<StateVector, 2> targets);

  void validate() const;

  friend bool operator==(const MeasurementOperator&, const MeasurementOperator&) = default;
};

[[nodiscard]] CompositeState apply_measurement(const MeasurementOperator& m,
                                               const CompositeState& state);

[[nodiscard]] double measured_signal(const MeasurementOperator& m, const CompositeState& state,
                                     double x);
[[nodiscard]] Eigen::ArrayXd measured_signal(const MeasurementOperator& m,
                                             const CompositeState& state,
                                             const Eigen::Ref<const Eigen::ArrayXd>& xs);

/// measured_signal split as direct + Re[cross z], branch extra phases left
/// out (z = e^{i(dphi_2 - dphi_1)}).
[[nodiscard]] FringeTerms measured_terms(const MeasurementOperator& m, const CompositeState& state,
                                         const Eigen::Ref<const Eigen::ArrayXd>& xs);

/// Expected counts per bin from slit `slit` alone, scaled to `count` events
/// over the screen interval [screen_lo, screen_hi].
[[nodiscard]] FringeHistogram path_reference_histogram(const CompositeState& state, Slit slit,
                                                       const FringeHistogram& binning,
                                                       double count, double screen_lo,
                                                       double screen_hi);

// ─── Weak scattering screen in the crossing region ──────────────────────────

struct WeakScreen {
  double transmittance{0.99};
  double scatter_fraction{0.01};
  double position_y{0.0};                // screen line y = position_y
  double transmission_phase_sigma{0.0};  // optional kick on transmitted particles

  void validate() const;

  friend bool operator==(const WeakScreen&, const WeakScreen&) = default;
};

struct Scattered {
  double x;
  double y;
};
struct Transmitted {
  double phase_kick{0.0};
};
struct Absorbed {};

using ScreenOutcome = std::variant<Scattered, Transmitted, Absorbed>;

/// Screen with its scatter-position sampler precomputed along the screen line.
class WeakScreenModel {
 public:
  WeakScreenModel(const WeakScreen& screen, const MZGeometryd& mz, const BeamSpecd& beam,
                  Eigen::Index cells = 4096);

  /// `z` multiplies the fringe term, carrying any per-particle phase offset.
  [[nodiscard]] ScreenOutcome interact(RngStream& rng, std::complex<double> z = 1.0) const;
  [[nodiscard]] const WeakScreen& screen() const { return screen_; }

 private:
  WeakScreen screen_;
  FringeSampler sampler_;
};

[[nodiscard]] ScreenOutcome weak_screen_interact(const WeakScreen& screen, const MZGeometryd& mz,
                                                 const BeamSpecd& beam, RngStream& rng);

// ─── Micromaser which-way detector ──────────────────────────────────────────

struct WhichWayRecord {
  int cavity1_photons{0};
  int cavity2_photons{0};
  bool single_cavity_mode{false};

  /// Slit 1 iff cavity 1 holds the photon; otherwise slit 2 (in single-cavity
  /// mode an empty cavity implies the other slit).
  [[nodiscard]] Slit inferred_path() const { return cavity1_photons == 1 ? Slit::one : Slit::two; }
  [[nodiscard]] bool determines_path() const {
    return single_cavity_mode ? cavity1_photons + cavity2_photons <= 1
                              : cavity1_photons + cavity2_photons == 1;
  }

  friend bool operator==(const WhichWayRecord&, const WhichWayRecord&) = default;
};

[[nodiscard]] WhichWayRecord micromaser_record(std::array<double, 2> slit_probabilities,
                                               bool single_cavity, RngStream& rng);

// ─── Coincidence modulation ─────────────────────────────────────────────────

/// (1 - gamma)(single1 + single2) + gamma joint, bin by bin. Bins
/// that would go negative (possible only for gamma < 0) are clamped to 0.
[[nodiscard]] FringeHistogram coincidence_modulate(const FringeHistogram& joint,
                                                   const FringeHistogram& single1,
                                                   const FringeHistogram& single2, double gamma);

}  // namespace twopath
