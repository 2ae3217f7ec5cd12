#include "failprop/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "failprop/config.hpp"
#include "failprop/errors.hpp"
#include "failprop/report.hpp"
#include "failprop/sectioned_text.hpp"

namespace failprop::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  std::string kind;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  auto* config = cmd->add_option("--config,-c", o.config, "Experiment config file");
  auto* preset = cmd->add_option("--preset", o.preset, "Built-in config preset");
  config->excludes(preset);
  cmd->add_option("--seed", o.seed, "Override the config rng_seed");
  cmd->add_option("--out,-o", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "Monte Carlo worker threads (outputs do not depend on it)");
}

ExperimentConfig load(const CommonOptions& o, std::optional<ExperimentKind> kind = std::nullopt) {
  ConfigOverrides overrides{o.seed, kind, o.threads};
  if (!o.preset.empty()) {
    const auto text = preset_text(o.preset);
    if (!text) throw ConfigError("unknown preset '" + o.preset + "'");
    return load_config(*text, fs::current_path(), overrides);
  }
  if (o.config.empty()) throw ConfigError("one of --config or --preset is required");
  return load_config_file(o.config, overrides);
}

fs::path output_dir(const CommonOptions& o, const ExperimentConfig& cfg) {
  fs::path dir;
  if (!o.out.empty())
    dir = o.out;
  else if (cfg.output_dir)
    dir = *cfg.output_dir;
  else if (const char* env = std::getenv("FAILPROP_OUT"); env && *env)
    dir = env;
  else
    dir = ".";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream buf;
  fn(buf);
  write_file(path, buf.str());
}

int cmd_epidemic(const CommonOptions& o, std::ostream&, std::ostream& err) {
  const auto cfg = load(o);
  if (cfg.kind != ExperimentKind::epidemic) throw ConfigError("epidemic needs a [model] section");
  const auto dir = output_dir(o, cfg);
  const auto& p = *cfg.model;

  const auto first = run(cfg.network, cfg.seeds, p, cfg.run.max_ticks, cfg.run.stop,
                         derive_seed(cfg.run.rng_seed, 0));
  const auto mc = monte_carlo(cfg.network, cfg.seeds, p, cfg.run.max_ticks, cfg.run.stop,
                              {cfg.run.n_runs, cfg.run.rng_seed, cfg.run.threads});

  write_file(dir / "resolved-config.txt", resolved_config_text(cfg));
  if (cfg.formats.contains("csv")) {
    write_with(dir / "trace.csv", [&](std::ostream& s) { report::write_trace_csv(s, first); });
    write_with(dir / "events.csv", [&](std::ostream& s) { report::write_events_csv(s, first); });
  }
  if (cfg.formats.contains("json"))
    write_file(dir / "summary.json", report::epidemic_summary(cfg.network, first, mc).dump(2) + "\n");

  const auto& c = first.counts.back();
  err << "epidemic " << to_string(p.model) << ": ticks=" << first.last_tick() << " final S=" << c[0]
      << " I=" << c[1] << " R=" << c[2] << " D=" << c[3]
      << " outbreak=" << format_double(outbreak_size(first))
      << " mean_outbreak=" << format_double(mc.mean_outbreak) << " n_runs=" << mc.n_runs << '\n';
  return kOk;
}

int cmd_cascade(const CommonOptions& o, std::ostream&, std::ostream& err) {
  std::optional<ExperimentKind> kind;
  if (o.kind == "vertical")
    kind = ExperimentKind::vertical;
  else if (o.kind == "horizontal")
    kind = ExperimentKind::horizontal;
  else if (!o.kind.empty())
    throw ConfigError("--kind must be vertical or horizontal");
  const auto cfg = load(o, kind);
  if (cfg.kind == ExperimentKind::epidemic) throw ConfigError("cascade needs a scenario, not a [model]");
  const auto dir = output_dir(o, cfg);
  for (const auto& w : cfg.scenario_warnings) err << "warning: " << w << '\n';

  write_file(dir / "resolved-config.txt", resolved_config_text(cfg));
  if (cfg.kind == ExperimentKind::vertical) {
    const auto trace = run_vertical(cfg.network, *cfg.vertical);
    if (cfg.formats.contains("csv"))
      write_with(dir / "trace.csv",
                 [&](std::ostream& s) { report::write_vertical_csv(s, cfg.network, *cfg.vertical, trace); });
    if (cfg.formats.contains("json"))
      write_file(dir / "summary.json", report::vertical_summary(cfg.network, trace).dump(2) + "\n");
    const auto& t = trace.terminal;
    err << "cascade vertical: rounds=" << trace.rounds.size()
        << " failed_controllers=" << t.failed_controllers.size() << "/"
        << t.failed_controllers.size() + t.live_controllers.size()
        << " orphaned_switches=" << t.orphaned_switches.size() << " failed_count=" << t.failed_count()
        << '\n';
  } else {
    const auto trace = run_horizontal(cfg.network, *cfg.horizontal);
    if (cfg.formats.contains("csv")) {
      write_with(dir / "trace.csv",
                 [&](std::ostream& s) { report::write_horizontal_csv(s, cfg.network, *cfg.horizontal, trace); });
      write_with(dir / "dropped.csv", [&](std::ostream& s) { report::write_dropped_csv(s, cfg.network, trace); });
    }
    if (cfg.formats.contains("json"))
      write_file(dir / "summary.json", report::horizontal_summary(cfg.network, trace).dump(2) + "\n");
    err << "cascade horizontal: rounds=" << trace.rounds.size() << " failed_count=" << trace.failed.size()
        << " dropped=" << trace.rounds.back().loads.dropped.size() << '\n';
  }
  return kOk;
}

int cmd_sweep(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const auto cfg = load(o);
  if (cfg.kind != ExperimentKind::epidemic) throw ConfigError("sweep needs a [model] section");
  if (!cfg.sweep.present) throw ConfigError("sweep needs a [sweep] section with grid=");
  const auto dir = output_dir(o, cfg);
  SweepOptions opts;
  opts.vary = cfg.sweep.vary;
  opts.n_runs = cfg.run.n_runs;
  opts.max_ticks = cfg.run.max_ticks;
  opts.stop = cfg.run.stop;
  opts.epsilon = cfg.run.epsilon;
  opts.base_seed = cfg.run.rng_seed;
  opts.threads = cfg.run.threads;
  const auto result = threshold_sweep(cfg.network, cfg.seeds, *cfg.model, cfg.sweep.grid, opts);

  write_file(dir / "resolved-config.txt", resolved_config_text(cfg));
  write_with(dir / "sweep.csv", [&](std::ostream& s) { report::write_sweep_csv(s, result); });
  const auto line = report::threshold_line(result);
  write_file(dir / "summary.txt", line + "\n");
  out << line << '\n';
  err << "sweep: " << result.grid.size() << " grid points, " << result.n_runs << " runs each\n";
  return kOk;
}

int cmd_gen(const std::vector<std::string>& spec_tokens, std::uint64_t seed, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
  const auto spec = GeneratorSpec::from_tokens(spec_tokens);
  const auto net = generate_topology(spec, seed);
  const auto text = "# generated: " + spec.to_string() + " seed " + std::to_string(seed) + "\n" + serialize(net);
  if (out_path.empty()) {
    out << text;
  } else {
    const fs::path path(out_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file(path, text);
  }
  err << "gen " << spec.to_string() << ": nodes=" << net.node_count() << " edges=" << net.edges().size()
      << '\n';
  return kOk;
}

int cmd_validate(const CommonOptions& o, const std::string& file, std::ostream& out) {
  Network net;
  if (!file.empty()) {
    if (!o.config.empty() || !o.preset.empty()) throw ConfigError("give a topology file or a config, not both");
    net = load_edge_list_file(file);
  } else {
    net = load(o).network;
  }
  const auto report = validate(net);
  out << "nodes=" << net.node_count() << " edges=" << net.edges().size() << '\n';
  for (const auto& v : report.violations) out << "violation: " << v << '\n';
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  if (report.ok()) out << "ok\n";
  return report.ok() ? kOk : kTopologyError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Failure propagation simulator for transport and SDN networks", "failprop"};
  app.require_subcommand(1);

  CommonOptions epidemic_opts, cascade_opts, sweep_opts, validate_opts;
  auto* epidemic = app.add_subcommand("epidemic", "Run an SI/SIS/SIR/SID experiment");
  add_common(epidemic, epidemic_opts);
  auto* cascade = app.add_subcommand("cascade", "Run a vertical or horizontal cascade scenario");
  add_common(cascade, cascade_opts);
  cascade->add_option("--kind", cascade_opts.kind, "vertical or horizontal");
  auto* sweep = app.add_subcommand("sweep", "Sweep the infection parameter and estimate the threshold");
  add_common(sweep, sweep_opts);

  std::vector<std::string> gen_spec;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a topology: er N P | ba N M | ring N | grid R C");
  gen->add_option("spec", gen_spec, "Generator kind and parameters")->required()->expected(2, 3);
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out,-o", gen_out, "Output edge-list file (stdout when absent)");

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a topology file or a config's topology");
  add_common(validate_cmd, validate_opts);
  validate_cmd->add_option("file", validate_file, "Edge-list file");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*epidemic) return cmd_epidemic(epidemic_opts, out, err);
    if (*cascade) return cmd_cascade(cascade_opts, out, err);
    if (*sweep) return cmd_sweep(sweep_opts, out, err);
    if (*gen) return cmd_gen(gen_spec, gen_seed, gen_out, out, err);
    if (*validate_cmd) return cmd_validate(validate_opts, validate_file, out);
  } catch (const ParamError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const TopologyError& e) {
    err << "topology error: " << e.what() << '\n';
    return kTopologyError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}

}  // namespace failprop::cli
