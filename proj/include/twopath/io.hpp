/**
 * io.hpp — CSV and PGM file formats.
 *
 * Numbers are written in the shortest form that reads back to the same
 * double, so identical inputs give byte-identical files. Empty CSV fields
 * stand for absent values.
 */

#pragma once

#include "twopath/analysis.hpp"
#include "twopath/histogram.hpp"
#include "twopath/montecarlo.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twopath {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kEventsHeader =
    "event_id,experiment,screen_x,mz_port,cavity1_photons,cavity2_photons,scatter_x,scatter_y,"
    "stream_id";

void write_events_csv(const EventLog& log, std::ostream& out);
void emit_events_csv(const EventLog& log, const std::filesystem::path& path);

/// Throws IoError naming the offending line.
[[nodiscard]] EventLog read_events_csv(std::istream& in);
[[nodiscard]] EventLog read_events_csv(const std::filesystem::path& path);

void write_histogram_csv(const FringeHistogram& h, std::ostream& out);
void emit_histogram_csv(const FringeHistogram& h, const std::filesystem::path& path);

struct MetricRow {
  std::string name;
  Metric metric;
};

void write_metrics_csv(const std::vector<MetricRow>& rows, std::ostream& out);
void emit_metrics_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path);

/// Binary PGM, one row, one column per bin, max count mapped to 255.
void write_histogram_pgm(const FringeHistogram& h, std::ostream& out);
void emit_histogram_pgm(const FringeHistogram& h, const std::filesystem::path& path);

struct SweepRow {
  double param_value;
  Metric visibility;
  Metric distinguishability;
  Metric duality_lhs;
};

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace twopath
