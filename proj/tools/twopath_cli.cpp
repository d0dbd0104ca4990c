// twopath: simulate, analyze, sweep and eraser subcommands.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime error.

#include "twopath/analysis.hpp"
#include "twopath/config.hpp"
#include "twopath/io.hpp"
#include "twopath/montecarlo.hpp"
#include "twopath/text.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace twopath;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line(), e.key());
  }
}

std::optional<Window> parse_window(const std::string& text, const char* option) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  const auto lo = comma == std::string::npos ? std::nullopt : text::parse_double(text.substr(0, comma));
  const auto hi = comma == std::string::npos ? std::nullopt : text::parse_double(text.substr(comma + 1));
  if (!lo || !hi || !(*lo < *hi))
    throw ConfigError(std::string(option) + " expects lo,hi with lo < hi");
  return Window{*lo, *hi};
}

/// Configuration for an event file: --config if given, else the preset named in the events.
ExperimentConfig config_for(const EventLog& log, const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  if (log.events.empty()) throw ConfigError("event file is empty and no --config was given");
  return build_preset(log.events.front().experiment);
}

/// Detector-overlap form when the configuration has a detector, else the event form.
std::optional<double> distinguishability_for(const ExperimentConfig& config, const EventLog& log) {
  if (config.two_slit() && config.detector_overlap)
    return overlap_distinguishability(config.detector_overlap->magnitude);
  return distinguishability(log);
}

std::optional<EventField> spatial_field(const EventLog& log) {
  for (const auto& ev : log.events) {
    if (ev.screen_x) return EventField::screen_x;
    if (ev.scatter_xy) return EventField::scatter_projection;
  }
  return std::nullopt;
}

struct AnalyzeOptions {
  std::string events, out_hist, out_metrics, pgm, config, range, window;
  int bins{128};
};

void analyze(const AnalyzeOptions& o) {
  const EventLog log = read_events_csv(std::filesystem::path(o.events));
  const ExperimentConfig config = config_for(log, o.config);
  const auto field = spatial_field(log);
  const auto d = distinguishability_for(config, log);

  std::vector<MetricRow> rows{{"events", Metric::of(static_cast<double>(log.events.size()))}};
  FringeHistogram h;
  if (field) {
    const Window range = parse_window(o.range, "--range").value_or(default_range(config));
    const auto window = parse_window(o.window, "--window").value_or(default_window(config));
    const auto binned = histogram(log, *field, o.bins, range.lo, range.hi);
    h = binned.histogram;
    const auto m = fringe_metrics(h, window, d);
    rows.push_back({"visibility", m.visibility});
    rows.push_back({"fringe_spacing", m.fringe_spacing});
    rows.push_back({"distinguishability", m.distinguishability});
    rows.push_back({"duality_lhs", m.duality_lhs});
    rows.push_back({"out_of_range", Metric::of(static_cast<double>(binned.out_of_range))});
  } else {
    // Port-only records: a two-bin histogram, bin 0 = port x, bin 1 = port y.
    h = FringeHistogram::uniform(0.0, 2.0, 2);
    for (const auto& ev : log.events)
      if (ev.mz_port) h.counts(*ev.mz_port == Port::x ? 0 : 1) += 1.0;
    if (!(h.total() > 0.0)) throw std::invalid_argument("events carry no positions or ports");
    rows.push_back({"visibility", Metric::missing("no_spatial_field")});
    rows.push_back({"fringe_spacing", Metric::missing("no_spatial_field")});
    rows.push_back({"distinguishability", d ? Metric::of(*d) : Metric::missing("no_which_way")});
    rows.push_back({"duality_lhs", Metric::missing("no_spatial_field")});
    rows.push_back({"port_x_fraction", Metric::of(h.counts(0) / h.total())});
  }
  emit_histogram_csv(h, o.out_hist);
  emit_metrics_csv(rows, o.out_metrics);
  if (!o.pgm.empty()) emit_histogram_pgm(h, o.pgm);
}

struct SweepOptions {
  std::string config, param, out;
  double from{0.0}, to{0.0};
  int steps{2};
  std::uint64_t events{0}, seed{0};
  int bins{128};
  unsigned threads{1};
};

void sweep(const SweepOptions& o) {
  const ExperimentConfig base = load_config(o.config);
  if (o.steps < 1) throw ConfigError("--steps must be at least 1");
  std::vector<SweepRow> rows;
  for (int i = 0; i < o.steps; ++i) {
    const double value =
        o.steps == 1 ? o.from : o.from + (o.to - o.from) * static_cast<double>(i) / (o.steps - 1);
    ExperimentConfig c = base;
    set_config_value(c, o.param, text::format_double(value));
    c.validate();
    const EventLog log = run_experiment(c, o.events, o.seed, o.threads);
    const auto d = distinguishability_for(c, log);
    SweepRow row{value, Metric::missing("no_spatial_field"), d ? Metric::of(*d) : Metric::missing("no_which_way"),
                 Metric::missing("no_spatial_field")};
    if (const auto field = spatial_field(log)) {
      const Window range = default_range(c);
      const auto h = histogram(log, *field, o.bins, range.lo, range.hi).histogram;
      const auto m = fringe_metrics(h, default_window(c), d);
      row.visibility = m.visibility;
      row.duality_lhs = m.duality_lhs;
    }
    rows.push_back(row);
  }
  emit_sweep_csv(rows, o.out);
}

struct EraserOptions {
  std::string events, out, config;
  double gamma{0.0};
  int bins{128};
};

void eraser(const EraserOptions& o) {
  const EventLog log = read_events_csv(std::filesystem::path(o.events));
  const ExperimentConfig config = config_for(log, o.config);
  const Window range = default_range(config);
  const auto r = eraser_analysis(log, config, Binning{range.lo, range.hi, o.bins}, o.gamma);
  emit_histogram_csv(r.modulated, o.out);
  const auto window = default_window(config);
  auto show = [](const Metric& m) {
    return m.value ? text::format_double(*m.value) : "null (" + m.flag + ")";
  };
  std::cout << "joint visibility: " << show(visibility(r.joint, window)) << '\n'
            << "modulated visibility: " << show(visibility(r.modulated, window)) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-path interference event simulator"};
  app.require_subcommand(1);

  std::string sim_config, sim_preset, sim_out;
  std::uint64_t sim_events = 0, sim_seed = 0;
  unsigned sim_threads = 1;
  auto* sim = app.add_subcommand("simulate", "generate detection events");
  sim->add_option("--config", sim_config, "configuration file");
  sim->add_option("--preset", sim_preset, "preset scenario name");
  sim->add_option("--events", sim_events, "number of events")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "random seed")->required();
  sim->add_option("--out", sim_out, "events.csv path")->required();
  sim->add_option("--threads", sim_threads, "worker threads")->check(CLI::PositiveNumber);

  AnalyzeOptions ao;
  auto* ana = app.add_subcommand("analyze", "histogram and fringe metrics");
  ana->add_option("--events", ao.events)->required();
  ana->add_option("--bins", ao.bins)->required()->check(CLI::Range(2, 1 << 24));
  ana->add_option("--out-hist", ao.out_hist)->required();
  ana->add_option("--out-metrics", ao.out_metrics)->required();
  ana->add_option("--pgm", ao.pgm);
  ana->add_option("--config", ao.config, "configuration (default: preset named in the events)");
  ana->add_option("--range", ao.range, "histogram range lo,hi");
  ana->add_option("--window", ao.window, "metric window lo,hi");

  SweepOptions so;
  auto* swp = app.add_subcommand("sweep", "vary one configuration key");
  swp->add_option("--config", so.config)->required();
  swp->add_option("--param", so.param, "dotted configuration key")->required();
  swp->add_option("--from", so.from)->required();
  swp->add_option("--to", so.to)->required();
  swp->add_option("--steps", so.steps)->required()->check(CLI::PositiveNumber);
  swp->add_option("--events", so.events)->required()->check(CLI::PositiveNumber);
  swp->add_option("--seed", so.seed)->required();
  swp->add_option("--out", so.out)->required();
  swp->add_option("--bins", so.bins)->check(CLI::Range(2, 1 << 24));
  swp->add_option("--threads", so.threads)->check(CLI::PositiveNumber);

  EraserOptions eo;
  auto* era = app.add_subcommand("eraser", "coincidence modulation of a which-way tagged log");
  era->add_option("--events", eo.events)->required();
  era->add_option("--gamma", eo.gamma)->required()->check(CLI::Range(-1.0, 1.0));
  era->add_option("--out", eo.out)->required();
  era->add_option("--bins", eo.bins)->check(CLI::Range(2, 1 << 24));
  era->add_option("--config", eo.config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) {
      if (sim_config.empty() && sim_preset.empty())
        throw ConfigError("simulate needs --config or --preset");
      ExperimentConfig config = sim_config.empty() ? build_preset(scenario_from_string(sim_preset))
                                                   : load_config(sim_config);
      if (!sim_config.empty() && !sim_preset.empty() &&
          scenario_from_string(sim_preset) != config.scenario)
        throw ConfigError("--preset " + sim_preset + " disagrees with the configuration scenario");
      emit_events_csv(run_experiment(config, sim_events, sim_seed, sim_threads), sim_out);
    } else if (ana->parsed()) {
      analyze(ao);
    } else if (swp->parsed()) {
      sweep(so);
    } else if (era->parsed()) {
      eraser(eo);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
