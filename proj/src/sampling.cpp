#include "twopath/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ranges>
#include <stdexcept>

namespace twopath {

Eigen::ArrayXd CellGrid::centers() const {
  const double w = width();
  return Eigen::ArrayXd::LinSpaced(cells, lo + 0.5 * w, hi - 0.5 * w);
}

void CellGrid::validate() const {
  if (cells < 1) throw std::invalid_argument("sampling grid needs at least one cell");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("sampling grid requires finite lo < hi");
}

namespace {

Eigen::ArrayXd prefix_sum(const Eigen::Ref<const Eigen::ArrayXd>& v) {
  Eigen::ArrayXd out(v.size());
  std::partial_sum(v.begin(), v.end(), out.begin());
  return out;
}

Eigen::Index first_cell_above(Eigen::Index n, double target, auto&& cdf_at) {
  const auto idx = std::views::iota(Eigen::Index{0}, n);
  const auto it = std::ranges::partition_point(idx, [&](Eigen::Index i) { return cdf_at(i) <= target; });
  return std::min(*it, n - 1);
}

}  // namespace

DiscreteSampler::DiscreteSampler(const Eigen::Ref<const Eigen::ArrayXd>& profile, CellGrid grid)
    : grid_(grid) {
  grid_.validate();
  if (profile.size() != grid_.cells)
    throw std::invalid_argument("profile length does not match the sampling grid");
  if (!profile.allFinite() || (profile < 0.0).any())
    throw std::invalid_argument("profile must be finite and nonnegative");
  if (!(profile > 0.0).any()) throw std::invalid_argument("profile has no positive weight");
  cdf_ = prefix_sum(profile);
}

Eigen::Index DiscreteSampler::sample_cell(RngStream& rng) const {
  const double target = rng.uniform() * cdf_(cdf_.size() - 1);
  return first_cell_above(cdf_.size(), target, [&](Eigen::Index i) { return cdf_(i); });
}

double DiscreteSampler::sample(RngStream& rng) const {
  const Eigen::Index cell = sample_cell(rng);
  return grid_.lo + (static_cast<double>(cell) + rng.uniform()) * grid_.width();
}

FringeSampler::FringeSampler(const Eigen::Ref<const Eigen::ArrayXd>& direct,
                             const Eigen::Ref<const Eigen::ArrayXcd>& cross, CellGrid grid)
    : grid_(grid) {
  grid_.validate();
  if (direct.size() != grid_.cells || cross.size() != grid_.cells)
    throw std::invalid_argument("profile terms do not match the sampling grid");
  if (!direct.allFinite() || !cross.allFinite())
    throw std::invalid_argument("profile terms must be finite");
  direct_ = prefix_sum(direct);
  cross_re_ = prefix_sum(cross.real());
  cross_im_ = prefix_sum(cross.imag());
}

Eigen::Index FringeSampler::sample_cell(std::complex<double> z, RngStream& rng) const {
  const Eigen::Index n = direct_.size();
  const double total = cdf(n - 1, z);
  if (!(total > 0.0)) throw std::invalid_argument("profile has no positive weight");
  const double target = rng.uniform() * total;
  return first_cell_above(n, target, [&](Eigen::Index i) { return cdf(i, z); });
}

double FringeSampler::sample(std::complex<double> z, RngStream& rng) const {
  const Eigen::Index cell = sample_cell(z, rng);
  return grid_.lo + (static_cast<double>(cell) + rng.uniform()) * grid_.width();
}

double sample_position(const Eigen::Ref<const Eigen::ArrayXd>& profile, const CellGrid& grid,
                       RngStream& rng) {
  return DiscreteSampler(profile, grid).sample(rng);
}

}  // namespace twopath
