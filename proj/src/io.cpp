#include "twopath/io.hpp"

#include "twopath/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace twopath {

namespace {

std::string opt(const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); }

template <typename Writer>
void emit(const std::filesystem::path& path, std::ios::openmode mode, Writer&& write) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

void write_events_csv(const EventLog& log, std::ostream& out) {
  out << kEventsHeader << '\n';
  for (const auto& ev : log.events) {
    out << ev.event_id << ',' << to_string(ev.experiment) << ',' << opt(ev.screen_x) << ',';
    if (ev.mz_port) out << (*ev.mz_port == Port::x ? 'x' : 'y');
    out << ',';
    if (ev.whichway) out << ev.whichway->cavity1_photons << ',' << ev.whichway->cavity2_photons;
    else out << ',';
    out << ',';
    if (ev.scatter_xy)
      out << text::format_double((*ev.scatter_xy)[0]) << ',' << text::format_double((*ev.scatter_xy)[1]);
    else
      out << ',';
    out << ',' << ev.stream_id << '\n';
  }
}

void emit_events_csv(const EventLog& log, const std::filesystem::path& path) {
  emit(path, std::ios::out, [&](std::ostream& o) { write_events_csv(log, o); });
}

EventLog read_events_csv(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& what) -> IoError {
    return IoError("events.csv line " + std::to_string(number) + ": " + what);
  };
  if (!std::getline(in, line) || text::trim(line) != kEventsHeader) {
    number = 1;
    throw fail("unexpected header");
  }
  number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (text::trim(line).empty()) continue;
    const auto f = split(text::trim(line));
    if (f.size() != 9) throw fail("expected 9 fields");
    DetectionEvent ev;
    const auto id = text::parse_integer(f[0]);
    const auto stream = text::parse_integer(f[8]);
    if (!id || *id < 0 || !stream || *stream < 0) throw fail("bad event_id or stream_id");
    ev.event_id = static_cast<std::uint64_t>(*id);
    ev.stream_id = static_cast<std::uint64_t>(*stream);
    try {
      ev.experiment = scenario_from_string(f[1]);
    } catch (const ConfigError& e) {
      throw fail(e.what());
    }
    if (!f[2].empty()) {
      ev.screen_x = text::parse_double(f[2]);
      if (!ev.screen_x) throw fail("bad screen_x");
    }
    if (f[3] == "x") ev.mz_port = Port::x;
    else if (f[3] == "y") ev.mz_port = Port::y;
    else if (!f[3].empty()) throw fail("bad mz_port");
    if (!f[4].empty() || !f[5].empty()) {
      const auto c1 = text::parse_integer(f[4]);
      const auto c2 = text::parse_integer(f[5]);
      if (!c1 || !c2) throw fail("bad cavity photon counts");
      WhichWayRecord r;
      r.cavity1_photons = static_cast<int>(*c1);
      r.cavity2_photons = static_cast<int>(*c2);
      // The file does not carry the cavity mode; an empty pair implies one cavity.
      r.single_cavity_mode = (*c1 + *c2 == 0) || ev.experiment == Scenario::young_single_cavity;
      ev.whichway = r;
    }
    if (!f[6].empty() || !f[7].empty()) {
      const auto sx = text::parse_double(f[6]);
      const auto sy = text::parse_double(f[7]);
      if (!sx || !sy) throw fail("bad scatter position");
      ev.scatter_xy = std::array<double, 2>{*sx, *sy};
    }
    log.events.push_back(ev);
  }
  return log;
}

EventLog read_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_events_csv(in);
}

void write_histogram_csv(const FringeHistogram& h, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (Eigen::Index i = 0; i < h.bins(); ++i)
    out << text::format_double(h.edges(i)) << ',' << text::format_double(h.edges(i + 1)) << ','
        << text::format_double(h.counts(i)) << '\n';
}

void emit_histogram_csv(const FringeHistogram& h, const std::filesystem::path& path) {
  emit(path, std::ios::out, [&](std::ostream& o) { write_histogram_csv(h, o); });
}

void write_metrics_csv(const std::vector<MetricRow>& rows, std::ostream& out) {
  out << "metric,value,flag\n";
  for (const auto& r : rows) out << r.name << ',' << opt(r.metric.value) << ',' << r.metric.flag << '\n';
}

void emit_metrics_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path) {
  emit(path, std::ios::out, [&](std::ostream& o) { write_metrics_csv(rows, o); });
}

void write_histogram_pgm(const FringeHistogram& h, std::ostream& out) {
  h.validate();
  out << "P5\n" << h.bins() << " 1\n255\n";
  const double peak = h.counts.maxCoeff();
  for (Eigen::Index i = 0; i < h.bins(); ++i) {
    const double level = peak > 0.0 ? std::round(255.0 * h.counts(i) / peak) : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::clamp(level, 0.0, 255.0))));
  }
}

void emit_histogram_pgm(const FringeHistogram& h, const std::filesystem::path& path) {
  emit(path, std::ios::out | std::ios::binary, [&](std::ostream& o) { write_histogram_pgm(h, o); });
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "param_value,visibility,distinguishability,duality_lhs\n";
  for (const auto& r : rows)
    out << text::format_double(r.param_value) << ',' << opt(r.visibility.value) << ','
        << opt(r.distinguishability.value) << ',' << opt(r.duality_lhs.value) << '\n';
}

void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  emit(path, std::ios::out, [&](std::ostream& o) { write_sweep_csv(rows, o); });
}

}  // namespace twopath
