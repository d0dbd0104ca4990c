#include "twopath/analysis.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace twopath {

BinnedValues histogram(const EventLog& log, EventField field, Eigen::Index bins, double lo,
                       double hi) {
  if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
  std::vector<double> values;
  values.reserve(log.events.size());
  for (const auto& ev : log.events) {
    if (field == EventField::screen_x && ev.screen_x)
      values.push_back(*ev.screen_x);
    else if (field == EventField::scatter_projection && ev.scatter_xy)
      values.push_back((*ev.scatter_xy)[0]);
  }
  if (values.empty())
    throw std::invalid_argument(field == EventField::screen_x ? "no events carry screen_x"
                                                              : "no events carry scatter_xy");
  return bin_values(values, bins, lo, hi);
}

Eigen::ArrayXd boxcar3(const Eigen::ArrayXd& v) {
  const Eigen::Index n = v.size();
  Eigen::ArrayXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index a = std::max<Eigen::Index>(0, i - 1);
    const Eigen::Index b = std::min<Eigen::Index>(n - 1, i + 1);
    out(i) = v.segment(a, b - a + 1).mean();
  }
  return out;
}

Extrema locate_extrema(const Eigen::ArrayXd& v, Eigen::Index first, Eigen::Index last) {
  Extrema out;
  if (first < 0 || last >= v.size() || last - first < 2) return out;
  struct Run {
    Eigen::Index start, end;
    double value;
  };
  std::vector<Run> runs;
  for (Eigen::Index i = first; i <= last; ++i) {
    if (!runs.empty() && v(i) == runs.back().value)
      runs.back().end = i;
    else
      runs.push_back({i, i, v(i)});
  }
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    const double prev = runs[r - 1].value, next = runs[r + 1].value, here = runs[r].value;
    if (here > prev && here > next) out.maxima.push_back(runs[r].start);
    if (here < prev && here < next) out.minima.push_back(runs[r].start);
  }
  return out;
}

namespace {

std::pair<Eigen::Index, Eigen::Index> window_bins(const FringeHistogram& h,
                                                  std::optional<Window> window) {
  h.validate();
  if (!window) return {0, h.bins() - 1};
  const Eigen::ArrayXd c = h.centers();
  Eigen::Index first = h.bins(), last = -1;
  for (Eigen::Index i = 0; i < h.bins(); ++i)
    if (c(i) >= window->lo && c(i) <= window->hi) {
      first = std::min(first, i);
      last = i;
    }
  return {first, last};
}

Metric contrast(double imax, double imin) {
  if (!(imax + imin > 0.0)) return Metric::missing("empty");
  // Noise can put the mean maximum below the mean minimum when there are no fringes.
  return Metric::of(std::clamp((imax - imin) / (imax + imin), 0.0, 1.0));
}

double mean_at(const Eigen::ArrayXd& v, const std::vector<Eigen::Index>& idx) {
  double s = 0.0;
  for (const auto i : idx) s += v(i);
  return s / static_cast<double>(idx.size());
}

}  // namespace

Metric visibility(const FringeHistogram& h, std::optional<Window> window) {
  const auto [first, last] = window_bins(h, window);
  const auto ex = locate_extrema(boxcar3(h.counts), first, last);
  if (ex.maxima.size() + ex.minima.size() < 3 || ex.maxima.empty() || ex.minima.empty())
    return Metric::missing(kInsufficientFringes);
  return contrast(mean_at(h.counts, ex.maxima), mean_at(h.counts, ex.minima));
}

Metric fringe_spacing(const FringeHistogram& h, std::optional<Window> window) {
  const auto [first, last] = window_bins(h, window);
  const auto ex = locate_extrema(boxcar3(h.counts), first, last);
  if (ex.maxima.size() < 2) return Metric::missing(kInsufficientFringes);
  const Eigen::ArrayXd c = h.centers();
  return Metric::of((c(ex.maxima.back()) - c(ex.maxima.front())) /
                    static_cast<double>(ex.maxima.size() - 1));
}

Metric profile_visibility(const std::function<double(double)>& f, double lo, double hi,
                          Eigen::Index samples) {
  if (!(lo < hi) || samples < 3) throw std::invalid_argument("profile grid must be nonempty");
  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(samples, lo, hi);
  const Eigen::ArrayXd vs = xs.unaryExpr([&](double x) { return f(x); });
  const auto ex = locate_extrema(vs, 0, samples - 1);
  if (ex.maxima.size() + ex.minima.size() < 3 || ex.maxima.empty() || ex.minima.empty())
    return Metric::missing(kInsufficientFringes);

  constexpr int bits = std::numeric_limits<double>::digits;
  auto refine = [&](Eigen::Index i, double sign) {
    const auto r = boost::math::tools::brent_find_minima(
        [&](double x) { return sign * f(x); }, xs(i - 1), xs(i + 1), bits);
    return sign * r.second;
  };
  double imax = 0.0, imin = 0.0;
  for (const auto i : ex.maxima) imax += refine(i, -1.0);
  for (const auto i : ex.minima) imin += refine(i, 1.0);
  return contrast(imax / static_cast<double>(ex.maxima.size()),
                  imin / static_cast<double>(ex.minima.size()));
}

std::optional<double> distinguishability(const EventLog& log) {
  std::size_t tagged = 0, decisive = 0;
  for (const auto& ev : log.events) {
    if (!ev.whichway) continue;
    ++tagged;
    if (ev.whichway->determines_path()) ++decisive;
  }
  if (tagged == 0) return std::nullopt;
  return static_cast<double>(decisive) / static_cast<double>(tagged);
}

double overlap_distinguishability(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("overlap must lie in [0,1]");
  return std::sqrt(1.0 - c * c);
}

DualityCheck duality_check(double v, double d) {
  const double lhs = v * v + d * d;
  return {lhs, lhs <= 1.0 + kDualityHeadroom};
}

FringeMetrics fringe_metrics(const FringeHistogram& h, std::optional<Window> window,
                             std::optional<double> d) {
  FringeMetrics m{visibility(h, window), fringe_spacing(h, window),
                  d ? Metric::of(*d) : Metric::missing("no_which_way"), Metric{}};
  if (m.visibility.value && d)
    m.duality_lhs = Metric::of(duality_check(*m.visibility.value, *d).lhs);
  else
    m.duality_lhs = Metric::missing(!d ? "no_which_way" : m.visibility.flag);
  return m;
}

namespace {

ChiSquare finish(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi-square test needs at least two populated bins");
  if (!std::isfinite(statistic)) return {statistic, dof, 0.0};
  const boost::math::chi_squared dist(dof);
  return {statistic, dof, boost::math::cdf(boost::math::complement(dist, statistic))};
}

}  // namespace

ChiSquare chi_square(const FringeHistogram& observed, const Eigen::ArrayXd& p) {
  observed.validate();
  if (p.size() != observed.bins()) throw std::invalid_argument("expected probabilities size");
  if (!p.allFinite() || (p < 0.0).any() || !(p.sum() > 0.0))
    throw std::invalid_argument("expected probabilities must be nonnegative with positive sum");
  const Eigen::ArrayXd expected = observed.total() * p / p.sum();
  double stat = 0.0;
  int used = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double o = observed.counts(i), e = expected(i);
    if (e > 0.0) {
      stat += (o - e) * (o - e) / e;
      ++used;
    } else if (o > 0.0) {
      stat = std::numeric_limits<double>::infinity();
    }
  }
  return finish(stat, used - 1);
}

ChiSquare chi_square_two_sample(const FringeHistogram& a, const FringeHistogram& b) {
  if (!a.same_binning(b)) throw std::invalid_argument("two-sample test needs identical binning");
  const double na = a.total(), nb = b.total();
  if (!(na > 0.0 && nb > 0.0)) throw std::invalid_argument("two-sample test needs counts");
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  double stat = 0.0;
  int used = 0;
  for (Eigen::Index i = 0; i < a.bins(); ++i) {
    const double s = a.counts(i) + b.counts(i);
    if (s <= 0.0) continue;
    const double d = ka * a.counts(i) - kb * b.counts(i);
    stat += d * d / s;
    ++used;
  }
  return finish(stat, used - 1);
}

Binning aligned_binning(double origin, double period, double lo, double hi, int bins_per_period) {
  if (!(period > 0.0) || bins_per_period < 1 || !(lo < hi))
    throw std::invalid_argument("aligned binning needs period > 0, bins_per_period >= 1, lo < hi");
  const double w = period / bins_per_period;
  const auto k_lo = static_cast<long long>(std::ceil((lo - origin) / w + 0.5));
  const auto k_hi = static_cast<long long>(std::floor((hi - origin) / w - 0.5));
  if (k_hi < k_lo) throw std::invalid_argument("range is narrower than one bin");
  return {origin + (static_cast<double>(k_lo) - 0.5) * w,
          origin + (static_cast<double>(k_hi) + 0.5) * w,
          static_cast<Eigen::Index>(k_hi - k_lo + 1)};
}

Window default_range(const ExperimentConfig& config) {
  if (config.two_slit()) return {config.slits().screen.x_min, config.slits().screen.x_max};
  const auto& r = config.mz().crossing_region;
  return {r.x_min, r.x_max};
}

Window default_window(const ExperimentConfig& config) {
  const Window range = default_range(config);
  if (!config.two_slit()) return range;
  const double half = config.slits().central_lobe_half_width(config.beam);
  return {std::max(range.lo, -half), std::min(range.hi, half)};
}

EraserResult eraser_analysis(const EventLog& log, const ExperimentConfig& config,
                             const Binning& binning, double gamma) {
  if (!config.two_slit()) throw std::invalid_argument("eraser needs a two-slit configuration");
  EraserResult r;
  std::vector<double> xs;
  for (const auto& ev : log.events) {
    if (!ev.screen_x) continue;
    if (!ev.whichway) throw std::invalid_argument("eraser needs which-way records on every event");
    const double x = *ev.screen_x;
    if (!(x >= binning.lo && x < binning.hi)) continue;
    xs.push_back(x);
    (ev.whichway->inferred_path() == Slit::one ? r.path1_events : r.path2_events) += 1;
  }
  if (xs.empty()) throw std::invalid_argument("no screen events inside the eraser range");
  r.joint = bin_values(xs, binning.bins, binning.lo, binning.hi).histogram;
  const auto state = config.composite_state();
  r.single1 = path_reference_histogram(state, Slit::one, r.joint,
                                       static_cast<double>(r.path1_events), binning.lo, binning.hi);
  r.single2 = path_reference_histogram(state, Slit::two, r.joint,
                                       static_cast<double>(r.path2_events), binning.lo, binning.hi);
  r.modulated = coincidence_modulate(r.joint, r.single1, r.single2, gamma);
  return r;
}

}  // namespace twopath
