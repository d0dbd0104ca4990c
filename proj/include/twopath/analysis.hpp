/**
 * analysis.hpp — histograms and fringe metrics.
 *
 * Extrema are found on a 3-bin boxcar-smoothed copy of the counts with
 * strict comparison; a run of equal values counts once, at its lowest index,
 * and runs touching the window edge are ignored. Visibility then averages
 * the unsmoothed counts at the detected maxima and minima.
 */

#pragma once

#include "twopath/config.hpp"
#include "twopath/histogram.hpp"
#include "twopath/montecarlo.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace twopath {

enum class EventField { screen_x, scatter_projection };

/// Fixed-width histogram of one event coordinate on [lo, hi). Throws
/// std::invalid_argument if no event carries the field.
[[nodiscard]] BinnedValues histogram(const EventLog& log, EventField field, Eigen::Index bins,
                                     double lo, double hi);

struct Window {
  double lo;
  double hi;
};

inline constexpr const char* kInsufficientFringes = "insufficient_fringes";

/// A metric that may be absent; `flag` says why.
struct Metric {
  std::optional<double> value;
  std::string flag;

  static Metric of(double v) { return {v, {}}; }
  static Metric missing(std::string why) { return {std::nullopt, std::move(why)}; }
};

[[nodiscard]] Eigen::ArrayXd boxcar3(const Eigen::ArrayXd& values);

struct Extrema {
  std::vector<Eigen::Index> maxima;
  std::vector<Eigen::Index> minima;
};

/// Interior extrema of values[first..last] (inclusive).
[[nodiscard]] Extrema locate_extrema(const Eigen::ArrayXd& values, Eigen::Index first,
                                     Eigen::Index last);

/// (Imax - Imin) / (Imax + Imin) inside the window (whole histogram if none).
[[nodiscard]] Metric visibility(const FringeHistogram& h, std::optional<Window> window = {});

/// Mean distance between adjacent detected maxima.
[[nodiscard]] Metric fringe_spacing(const FringeHistogram& h, std::optional<Window> window = {});

/// Visibility of a continuous profile: extrema bracketed on `samples` grid
/// points and refined with Brent's method.
[[nodiscard]] Metric profile_visibility(const std::function<double(double)>& f, double lo,
                                        double hi, Eigen::Index samples = 4096);

/// Fraction of events whose which-way record fixes the path; nullopt when
/// the log has no which-way records.
[[nodiscard]] std::optional<double> distinguishability(const EventLog& log);

/// sqrt(1 - c^2) for detector-state overlap c in [0, 1].
[[nodiscard]] double overlap_distinguishability(double c);

struct DualityCheck {
  double lhs;
  bool satisfied;
};

inline constexpr double kDualityHeadroom = 0.02;

[[nodiscard]] DualityCheck duality_check(double visibility, double distinguishability);

struct FringeMetrics {
  Metric visibility;
  Metric fringe_spacing;
  Metric distinguishability;
  Metric duality_lhs;
};

[[nodiscard]] FringeMetrics fringe_metrics(const FringeHistogram& h, std::optional<Window> window,
                                           std::optional<double> distinguishability);

struct ChiSquare {
  double statistic;
  int dof;
  double p_value;
};

/// Pearson test of counts against expected bin probabilities (renormalized
/// over the histogram). Bins with zero expectation are left out.
[[nodiscard]] ChiSquare chi_square(const FringeHistogram& observed,
                                   const Eigen::ArrayXd& expected_probabilities);

/// Two-sample test that two histograms share one distribution.
[[nodiscard]] ChiSquare chi_square_two_sample(const FringeHistogram& a, const FringeHistogram& b);

/// Uniform binning inside [lo, hi] with `bins_per_period` bins per period and
/// a bin centered on `origin` (and on every origin + k * period).
struct Binning {
  double lo;
  double hi;
  Eigen::Index bins;
};
[[nodiscard]] Binning aligned_binning(double origin, double period, double lo, double hi,
                                      int bins_per_period);

/// Screen range and central-lobe window used by default for a configuration.
[[nodiscard]] Window default_range(const ExperimentConfig& config);
[[nodiscard]] Window default_window(const ExperimentConfig& config);

/// Which-way-conditioned eraser data built from one event log: the joint
/// histogram, the expected single-path histograms for the tagged counts, and
/// coincidence_modulate applied with `gamma`.
struct EraserResult {
  FringeHistogram joint;
  FringeHistogram single1;
  FringeHistogram single2;
  FringeHistogram modulated;
  std::size_t path1_events{0};
  std::size_t path2_events{0};
};

[[nodiscard]] EraserResult eraser_analysis(const EventLog& log, const ExperimentConfig& config,
                                           const Binning& binning, double gamma);

}  // namespace twopath
