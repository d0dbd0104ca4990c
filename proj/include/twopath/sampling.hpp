// Inverse-CDF sampling of positions from intensity profiles tabulated on
// equal-width cells.

#pragma once

#include "twopath/rng.hpp"

#include <Eigen/Dense>

#include <complex>

namespace twopath {

/// Cells of equal width covering [lo, hi); profile values belong to cell centers.
struct CellGrid {
  double lo{0};
  double hi{1};
  Eigen::Index cells{1};

  [[nodiscard]] double width() const { return (hi - lo) / static_cast<double>(cells); }
  [[nodiscard]] Eigen::ArrayXd centers() const;
  void validate() const;
};

/// Samples cell indices proportionally to a fixed nonnegative profile, then
/// places the point uniformly inside the chosen cell.
class DiscreteSampler {
 public:
  DiscreteSampler(const Eigen::Ref<const Eigen::ArrayXd>& profile, CellGrid grid);

  [[nodiscard]] Eigen::Index sample_cell(RngStream& rng) const;
  [[nodiscard]] double sample(RngStream& rng) const;
  [[nodiscard]] const CellGrid& grid() const { return grid_; }

 private:
  CellGrid grid_;
  Eigen::ArrayXd cdf_;  // inclusive prefix sums
};

/// Profiles of the form direct(x) + Re[cross(x) z] for a per-draw phase
/// factor z. The CDF is linear in z, so it is assembled lazily from three
/// prefix sums during the binary search instead of being rebuilt per draw.
class FringeSampler {
 public:
  FringeSampler(const Eigen::Ref<const Eigen::ArrayXd>& direct,
                const Eigen::Ref<const Eigen::ArrayXcd>& cross, CellGrid grid);

  [[nodiscard]] Eigen::Index sample_cell(std::complex<double> z, RngStream& rng) const;
  [[nodiscard]] double sample(std::complex<double> z, RngStream& rng) const;
  [[nodiscard]] const CellGrid& grid() const { return grid_; }

 private:
  [[nodiscard]] double cdf(Eigen::Index i, std::complex<double> z) const {
    return direct_(i) + z.real() * cross_re_(i) - z.imag() * cross_im_(i);
  }

  CellGrid grid_;
  Eigen::ArrayXd direct_, cross_re_, cross_im_;  // inclusive prefix sums
};

/// One draw from `profile` over `grid`. Throws std::invalid_argument when
/// the profile has negative, non-finite, or only zero entries.
[[nodiscard]] double sample_position(const Eigen::Ref<const Eigen::ArrayXd>& profile,
                                     const CellGrid& grid, RngStream& rng);

}  // namespace twopath
