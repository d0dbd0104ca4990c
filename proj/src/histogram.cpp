#include "twopath/histogram.hpp"

#include <cmath>
#include <stdexcept>

namespace twopath {

FringeHistogram FringeHistogram::uniform(double lo, double hi, Eigen::Index bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("histogram range must be finite and nonempty");
  return {Eigen::ArrayXd::LinSpaced(bins + 1, lo, hi), Eigen::ArrayXd::Zero(bins)};
}

bool FringeHistogram::same_binning(const FringeHistogram& other) const {
  return edges.size() == other.edges.size() && (edges == other.edges).all();
}

void FringeHistogram::validate() const {
  if (counts.size() < 1 || edges.size() != counts.size() + 1)
    throw std::invalid_argument("histogram needs bins + 1 edges");
  for (Eigen::Index i = 1; i < edges.size(); ++i)
    if (!(edges(i) > edges(i - 1))) throw std::invalid_argument("histogram edges must increase");
  if (!counts.allFinite() || (counts < 0.0).any())
    throw std::invalid_argument("histogram counts must be finite and nonnegative");
}

BinnedValues bin_values(std::span<const double> values, Eigen::Index bins, double lo, double hi) {
  BinnedValues out{FringeHistogram::uniform(lo, hi, bins), 0};
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (const double v : values) {
    if (!(v >= lo && v < hi)) {
      ++out.out_of_range;
      continue;
    }
    auto i = static_cast<Eigen::Index>((v - lo) * scale);
    if (i >= bins) i = bins - 1;
    out.histogram.counts(i) += 1.0;
  }
  return out;
}

}  // namespace twopath
