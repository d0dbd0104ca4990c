/**
 * wavefield.hpp — analytic scalar-wave layer.
 *
 * Two-slit screen fields in the paraxial (Fraunhofer-envelope) regime,
 * Mach-Zehnder output-port intensities, and the plane-wave field in the
 * region where the two interferometer arms cross.
 *
 *   transport phase   phi_i(x) = k (L + (x -+ d/2)^2 / (2L))
 *   phase difference  dphi(x)  = phi_1 - phi_2 = -k d x / L
 *   envelope          A(x)     = sin(u)/u,  u = k a x / (2L)
 *   screen intensity  I(x)     = A^2 [|p1|^2 + |p2|^2 + 2|p1||p2| cos(dphi + arg p1 - arg p2)]
 *   crossing field    psi(x,y) = psi0 (e^{i k0 x} + e^{i k0 y - i dphi}) / sqrt(2)
 *   crossing pattern  I(x,y)   = |psi0|^2 [1 + cos(k0 x - k0 y + dphi)]
 *
 * Everything is templated on the scalar type and header-only; `...d` aliases
 * name the double instantiations.
 */

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twopath {

enum class Slit { one = 1, two = 2 };
enum class Port { x, y };

[[nodiscard]] inline int index_of(Slit s) { return s == Slit::one ? 0 : 1; }

template <typename Scalar>
struct BeamSpec {
  Scalar wavelength{Scalar(500e-9)};
  std::complex<Scalar> amplitude{Scalar(1)};

  [[nodiscard]] Scalar wavenumber() const {
    return Scalar(2) * std::numbers::pi_v<Scalar> / wavelength;
  }

  void validate() const {
    if (!(wavelength > Scalar(0)) || !std::isfinite(wavelength))
      throw std::invalid_argument("beam wavelength must be finite and > 0");
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
      throw std::invalid_argument("beam amplitude must be finite");
  }

  friend bool operator==(const BeamSpec&, const BeamSpec&) = default;
};

/// Evenly spaced evaluation points, endpoints included.
template <typename Scalar>
struct ScreenGrid {
  Scalar x_min{Scalar(-0.25)};
  Scalar x_max{Scalar(0.25)};
  Eigen::Index n_points{4096};

  [[nodiscard]] Scalar spacing() const {
    return (x_max - x_min) / Scalar(n_points - 1);
  }
  [[nodiscard]] Eigen::Array<Scalar, Eigen::Dynamic, 1> points() const {
    return Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(n_points, x_min, x_max);
  }

  friend bool operator==(const ScreenGrid&, const ScreenGrid&) = default;
};

template <typename Scalar>
struct TwoSlitGeometry {
  Scalar slit_separation{Scalar(10e-6)};
  Scalar slit_width{Scalar(2e-6)};
  Scalar screen_distance{Scalar(1)};
  std::array<std::complex<Scalar>, 2> slit_amplitudes{std::complex<Scalar>(1),
                                                      std::complex<Scalar>(1)};
  ScreenGrid<Scalar> screen{};

  void validate() const {
    const Scalar d = slit_separation, a = slit_width, L = screen_distance;
    if (!(a > Scalar(0)) || !(a < d))
      throw std::invalid_argument("slit geometry requires 0 < slit_width < slit_separation");
    if (!std::isfinite(L) || !(L >= Scalar(100) * d))
      throw std::invalid_argument("paraxial regime requires screen_distance >= 100 * slit_separation");
    if (screen.n_points < 2)
      throw std::invalid_argument("screen grid needs at least 2 points");
    if (!(screen.x_min < screen.x_max))
      throw std::invalid_argument("screen grid requires x_min < x_max");
    for (const auto& p : slit_amplitudes)
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
        throw std::invalid_argument("slit amplitudes must be finite");
  }

  /// Distance from the axis to the first envelope zero, lambda L / a.
  [[nodiscard]] Scalar central_lobe_half_width(const BeamSpec<Scalar>& beam) const {
    return beam.wavelength * screen_distance / slit_width;
  }
  /// Nominal fringe period lambda L / d.
  [[nodiscard]] Scalar fringe_period(const BeamSpec<Scalar>& beam) const {
    return beam.wavelength * screen_distance / slit_separation;
  }

  friend bool operator==(const TwoSlitGeometry&, const TwoSlitGeometry&) = default;
};

template <typename Scalar>
struct CrossingRegion {
  Scalar x_min{Scalar(-1e-6)};
  Scalar x_max{Scalar(1e-6)};
  Scalar y_min{Scalar(-1e-6)};
  Scalar y_max{Scalar(1e-6)};

  [[nodiscard]] bool contains(Scalar x, Scalar y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  friend bool operator==(const CrossingRegion&, const CrossingRegion&) = default;
};

template <typename Scalar>
struct MZGeometry {
  bool bs2_present{true};
  Scalar phase_difference{Scalar(0)};
  Scalar crossing_wavenumber{Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(500e-9)};
  CrossingRegion<Scalar> crossing_region{};

  void validate() const {
    if (!std::isfinite(phase_difference))
      throw std::invalid_argument("phase difference must be finite");
    if (!(crossing_wavenumber > Scalar(0)) || !std::isfinite(crossing_wavenumber))
      throw std::invalid_argument("crossing wavenumber must be finite and > 0");
    const auto& r = crossing_region;
    if (!(r.x_min < r.x_max) || !(r.y_min < r.y_max))
      throw std::invalid_argument("crossing region bounds must be ordered");
  }

  friend bool operator==(const MZGeometry&, const MZGeometry&) = default;
};

using BeamSpecd = BeamSpec<double>;
using ScreenGridd = ScreenGrid<double>;
using TwoSlitGeometryd = TwoSlitGeometry<double>;
using CrossingRegiond = CrossingRegion<double>;
using MZGeometryd = MZGeometry<double>;

namespace detail {
template <typename Scalar>
void require_finite(Scalar x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + " must be finite");
}
}  // namespace detail

// ─── Two-slit screen ────────────────────────────────────────────────────────

template <typename Scalar>
[[nodiscard]] Scalar transport_phase(const TwoSlitGeometry<Scalar>& geom,
                                     const BeamSpec<Scalar>& beam, Slit slit, Scalar x) {
  detail::require_finite(x, "screen coordinate");
  const Scalar L = geom.screen_distance;
  const Scalar offset = slit == Slit::one ? x - geom.slit_separation / Scalar(2)
                                          : x + geom.slit_separation / Scalar(2);
  return beam.wavenumber() * (L + offset * offset / (Scalar(2) * L));
}

/// phi_1 - phi_2 in closed form; free of the cancellation in subtracting two
/// phases of order k L.
template <typename Scalar>
[[nodiscard]] Scalar phase_difference(const TwoSlitGeometry<Scalar>& geom,
                                      const BeamSpec<Scalar>& beam, Scalar x) {
  detail::require_finite(x, "screen coordinate");
  return -beam.wavenumber() * geom.slit_separation * x / geom.screen_distance;
}

template <typename Scalar>
[[nodiscard]] Scalar envelope(const TwoSlitGeometry<Scalar>& geom,
                              const BeamSpec<Scalar>& beam, Scalar x) {
  const Scalar u = beam.wavenumber() * geom.slit_width * x / (Scalar(2) * geom.screen_distance);
  if (std::abs(u) < Scalar(1e-8)) return Scalar(1) - u * u / Scalar(6);
  return std::sin(u) / u;
}

/// Per-slit screen amplitudes psi_1(x), psi_2(x). Both carry the same rounded
/// common phase (phi_1 + phi_2)/2 so products like conj(psi_1) psi_2 depend
/// only on the closed-form phase difference.
template <typename Scalar>
[[nodiscard]] std::array<std::complex<Scalar>, 2> slit_fields(const TwoSlitGeometry<Scalar>& geom,
                                                              const BeamSpec<Scalar>& beam,
                                                              Scalar x) {
  detail::require_finite(x, "screen coordinate");
  const Scalar k = beam.wavenumber();
  const Scalar L = geom.screen_distance;
  const Scalar half_d = geom.slit_separation / Scalar(2);
  const Scalar common = std::fmod(k * (L + (x * x + half_d * half_d) / (Scalar(2) * L)),
                                  Scalar(2) * std::numbers::pi_v<Scalar>);
  const Scalar half_diff = phase_difference(geom, beam, x) / Scalar(2);
  const Scalar A = envelope(geom, beam, x);
  return {A * geom.slit_amplitudes[0] * std::polar(Scalar(1), common + half_diff),
          A * geom.slit_amplitudes[1] * std::polar(Scalar(1), common - half_diff)};
}

template <typename Scalar>
[[nodiscard]] std::complex<Scalar> two_slit_field(const TwoSlitGeometry<Scalar>& geom,
                                                  const BeamSpec<Scalar>& beam, Scalar x) {
  const auto psi = slit_fields(geom, beam, x);
  return psi[0] + psi[1];
}

template <typename Scalar>
[[nodiscard]] Scalar two_slit_intensity(const TwoSlitGeometry<Scalar>& geom,
                                        const BeamSpec<Scalar>& beam, Scalar x) {
  const Scalar A = envelope(geom, beam, x);
  const auto& p = geom.slit_amplitudes;
  const Scalar m1 = std::abs(p[0]), m2 = std::abs(p[1]);
  const Scalar rel = (m1 > 0 && m2 > 0) ? std::arg(p[0]) - std::arg(p[1]) : Scalar(0);
  return A * A *
         (m1 * m1 + m2 * m2 + Scalar(2) * m1 * m2 * std::cos(phase_difference(geom, beam, x) + rel));
}

template <typename Scalar, typename Derived>
[[nodiscard]] Eigen::Array<Scalar, Eigen::Dynamic, 1> two_slit_intensity(
    const TwoSlitGeometry<Scalar>& geom, const BeamSpec<Scalar>& beam,
    const Eigen::ArrayBase<Derived>& xs) {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = two_slit_intensity(geom, beam, xs(i));
  return out;
}

// ─── Mach-Zehnder ───────────────────────────────────────────────────────────

/// Sum of the two arm plane waves. The y-arm term is oriented so that the
/// squared modulus is the crossing pattern, whose fringes run along x = y.
template <typename Scalar>
[[nodiscard]] std::complex<Scalar> crossing_field(const MZGeometry<Scalar>& mz,
                                                  const BeamSpec<Scalar>& beam, Scalar x,
                                                  Scalar y) {
  const Scalar k0 = mz.crossing_wavenumber;
  return beam.amplitude *
         (std::polar(Scalar(1), k0 * x) + std::polar(Scalar(1), k0 * y - mz.phase_difference)) /
         std::sqrt(Scalar(2));
}

template <typename Scalar>
[[nodiscard]] Scalar crossing_intensity(const MZGeometry<Scalar>& mz, const BeamSpec<Scalar>& beam,
                                        Scalar x, Scalar y) {
  detail::require_finite(x, "crossing coordinate x");
  detail::require_finite(y, "crossing coordinate y");
  if (!mz.crossing_region.contains(x, y))
    throw std::domain_error("point lies outside the crossing region");
  const Scalar k0 = mz.crossing_wavenumber;
  return std::norm(beam.amplitude) * (Scalar(1) + std::cos(k0 * x - k0 * y + mz.phase_difference));
}

/// Output-port intensity. With BS2 in place the ports are complementary
/// (1 +- cos dphi)/2; without it each arm carries half the beam.
template <typename Scalar>
[[nodiscard]] Scalar mz_port_intensity(const MZGeometry<Scalar>& mz, const BeamSpec<Scalar>& beam,
                                       Port port) {
  const Scalar I0 = std::norm(beam.amplitude);
  if (!mz.bs2_present) return I0 / Scalar(2);
  const Scalar c = std::cos(mz.phase_difference);
  return port == Port::x ? I0 * (Scalar(1) + c) / Scalar(2) : I0 * (Scalar(1) - c) / Scalar(2);
}

}  // namespace twopath
