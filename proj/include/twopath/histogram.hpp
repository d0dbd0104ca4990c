#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>

namespace twopath {

/// Fixed-width binned counts over a position coordinate.
struct FringeHistogram {
  Eigen::ArrayXd edges;   // size bins + 1, strictly increasing
  Eigen::ArrayXd counts;  // size bins, nonnegative

  static FringeHistogram uniform(double lo, double hi, Eigen::Index bins);

  [[nodiscard]] Eigen::Index bins() const { return counts.size(); }
  [[nodiscard]] double total() const { return counts.sum(); }
  [[nodiscard]] Eigen::ArrayXd centers() const {
    return 0.5 * (edges.head(bins()) + edges.tail(bins()));
  }
  [[nodiscard]] bool same_binning(const FringeHistogram& other) const;

  void validate() const;
};

struct BinnedValues {
  FringeHistogram histogram;
  std::size_t out_of_range{0};
};

/// Fixed-width binning on [lo, hi); values outside are counted, not binned.
[[nodiscard]] BinnedValues bin_values(std::span<const double> values, Eigen::Index bins, double lo,
                                      double hi);

}  // namespace twopath
