#include "failprop/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "failprop/errors.hpp"
#include "failprop/sectioned_text.hpp"

namespace failprop {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::epidemic: return "epidemic";
    case ExperimentKind::vertical: return "vertical";
    case ExperimentKind::horizontal: return "horizontal";
  }
  return "?";
}

namespace {

namespace fs = std::filesystem;

using KeyValues = std::map<std::string, std::string, std::less<>>;

const std::set<std::string, std::less<>> kTopologySections = {"edges", "nodes", "names", "roles",
                                                              "controllers"};
const std::set<std::string, std::less<>> kScenarioSections = {"capacity", "rate", "attack", "demand",
                                                              "injection"};
const std::set<std::string, std::less<>> kVerticalOnly = {"rate", "attack"};
const std::set<std::string, std::less<>> kHorizontalOnly = {"demand", "injection"};

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

KeyValues key_values(const SectionedText& text, std::string_view section,
                     std::initializer_list<std::string_view> allowed) {
  KeyValues out;
  for (const auto& line : text.lines(section)) {
    const auto kv = split_key_value(line.text);
    const auto where = "[" + std::string(section) + "] line " + std::to_string(line.number) + ": ";
    if (!kv) throw ConfigError(where + "expected key=value");
    bool ok = false;
    for (auto a : allowed) ok = ok || a == kv->first;
    if (!ok) throw ConfigError(where + "unknown key '" + kv->first + "'");
    if (!out.emplace(kv->first, kv->second).second) throw ConfigError(where + "duplicate key '" + kv->first + "'");
  }
  return out;
}

double number(const KeyValues& kv, std::string_view key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const auto v = parse_double(it->second);
  if (!v) throw ParamError(std::string(key), "expected a number, got '" + it->second + "'");
  return *v;
}

std::uint64_t count(const KeyValues& kv, std::string_view key, std::uint64_t fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const auto v = parse_int(it->second);
  if (!v || *v < 0) throw ParamError(std::string(key), "expected a nonnegative integer, got '" + it->second + "'");
  return static_cast<std::uint64_t>(*v);
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

Network load_topology(const SectionedText& text, const fs::path& base_dir, std::uint64_t run_seed,
                      std::string& origin) {
  const auto kv = key_values(text, "topology", {"file", "generate", "seed"});
  bool inline_topology = false;
  for (const auto& s : text.sections()) inline_topology = inline_topology || kTopologySections.contains(s.name);
  const int sources = kv.contains("file") + kv.contains("generate") + inline_topology;
  if (sources != 1)
    throw ConfigError("exactly one topology source required: [topology] file=, [topology] generate=, or inline [edges]");
  if (kv.contains("seed") && !kv.contains("generate"))
    throw ConfigError("[topology] seed only applies to generate=");

  if (const auto it = kv.find("file"); it != kv.end()) {
    const auto path = base_dir / it->second;
    origin = "file " + it->second;
    return load_edge_list_file(path.string());
  }
  if (const auto it = kv.find("generate"); it != kv.end()) {
    const auto spec = GeneratorSpec::parse(it->second);
    const auto seed = count(kv, "seed", run_seed);
    origin = "generate " + spec.to_string() + " seed " + std::to_string(seed);
    return generate_topology(spec, seed);
  }
  origin = "inline";
  return network_from_sections(text);
}

std::vector<NodeId> parse_seeds(const std::string& text, const Network& net) {
  std::vector<NodeId> seeds;
  for (const auto& tok : split(text, ',')) {
    const auto id = net.find(tok);
    if (!id) throw ParamError("seeds", "unknown node '" + tok + "'");
    seeds.push_back(*id);
  }
  if (seeds.empty()) throw ParamError("seeds", "must not be empty");
  return seeds;
}

}  // namespace

ExperimentConfig load_config(std::string_view text, const fs::path& base_dir,
                             const ConfigOverrides& overrides) {
  const auto parsed = SectionedText::parse(text);
  static const std::set<std::string, std::less<>> kKnown = {
      "topology", "model", "scenario", "run", "sweep", "output", "edges", "nodes", "names", "roles",
      "controllers", "capacity", "rate", "attack", "demand", "injection"};
  for (const auto& s : parsed.sections()) {
    if (s.name.empty()) {
      if (!s.lines.empty())
        throw ConfigError("line " + std::to_string(s.lines.front().number) + ": text outside any section");
      continue;
    }
    if (!kKnown.contains(s.name))
      throw ConfigError("line " + std::to_string(s.header_line) + ": unknown section [" + s.name + "]");
  }

  ExperimentConfig cfg;
  const auto run = key_values(parsed, "run", {"max_ticks", "n_runs", "rng_seed", "stop", "epsilon", "threads"});
  cfg.run.max_ticks = count(run, "max_ticks", cfg.run.max_ticks);
  cfg.run.n_runs = count(run, "n_runs", cfg.run.n_runs);
  cfg.run.rng_seed = overrides.rng_seed.value_or(count(run, "rng_seed", cfg.run.rng_seed));
  cfg.run.epsilon = number(run, "epsilon", cfg.run.epsilon);
  cfg.run.threads = overrides.threads.value_or(static_cast<int>(count(run, "threads", 0)));
  if (const auto it = run.find("stop"); it != run.end()) {
    const auto rule = parse_stop_rule(it->second);
    if (!rule) throw ParamError("stop", "expected absorb or fixed, got '" + it->second + "'");
    cfg.run.stop = *rule;
  }
  if (cfg.run.max_ticks == 0) throw ParamError("max_ticks", "must be positive");
  if (cfg.run.n_runs == 0) throw ParamError("n_runs", "must be positive");
  if (!(cfg.run.epsilon > 0.0 && cfg.run.epsilon < 1.0)) throw ParamError("epsilon", "must lie in (0, 1)");

  const auto output = key_values(parsed, "output", {"dir", "formats"});
  if (const auto it = output.find("dir"); it != output.end()) cfg.output_dir = base_dir / it->second;
  if (const auto it = output.find("formats"); it != output.end()) {
    cfg.formats.clear();
    for (const auto& f : split(it->second, ',')) {
      if (f != "csv" && f != "json") throw ParamError("formats", "unknown format '" + f + "'");
      cfg.formats.insert(f);
    }
  }

  // Validate the model and scenario keys before touching the topology so a
  // bad parameter is reported as a configuration error.
  const bool has_model = parsed.has("model");
  bool has_scenario = parsed.has("scenario");
  for (const auto& s : parsed.sections()) has_scenario = has_scenario || kScenarioSections.contains(s.name);
  if (has_model && has_scenario) throw ConfigError("a config holds either [model] or a scenario, not both");
  if (!has_model && !has_scenario) throw ConfigError("config needs a [model] section or a scenario");

  const auto model_kv = key_values(parsed, "model", {"model", "beta", "delta1", "tau", "gamma", "seeds"});
  if (has_model) {
    EpidemicParams p;
    const auto it = model_kv.find("model");
    if (it == model_kv.end()) throw ConfigError("[model] needs model=SI|SIS|SIR|SID");
    const auto m = parse_model(it->second);
    if (!m) throw ParamError("model", "unknown model '" + it->second + "'");
    p.model = *m;
    p.beta = number(model_kv, "beta", 0.0);
    p.delta1 = number(model_kv, "delta1", 0.0);
    p.tau = number(model_kv, "tau", 0.0);
    p.gamma = number(model_kv, "gamma", 0.0);
    p.validate();
    cfg.model = p;
    cfg.kind = ExperimentKind::epidemic;
  }

  const auto sweep = key_values(parsed, "sweep", {"vary", "grid"});
  if (parsed.has("sweep")) {
    cfg.sweep.present = true;
    if (const auto it = sweep.find("vary"); it != sweep.end()) {
      if (it->second == "beta")
        cfg.sweep.vary = SweepParam::beta;
      else if (it->second == "ratio")
        cfg.sweep.vary = SweepParam::ratio;
      else
        throw ParamError("vary", "expected beta or ratio, got '" + it->second + "'");
    }
    if (const auto it = sweep.find("grid"); it != sweep.end() && !it->second.empty())
      for (const auto& tok : split(it->second, ',')) {
        const auto v = parse_double(tok);
        if (!v) throw ParamError("grid", "bad grid value '" + tok + "'");
        cfg.sweep.grid.push_back(*v);
      }
    if (cfg.sweep.grid.empty()) throw ParamError("grid", "must not be empty");
    for (std::size_t i = 1; i < cfg.sweep.grid.size(); ++i)
      if (!(cfg.sweep.grid[i] > cfg.sweep.grid[i - 1])) throw ParamError("grid", "must be strictly increasing");
  }

  const auto scenario = key_values(parsed, "scenario", {"kind", "file", "tie_break"});
  std::optional<SectionedText> scenario_file;
  if (has_scenario) {
    if (const auto it = scenario.find("file"); it != scenario.end()) {
      for (const auto& s : parsed.sections())
        if (kScenarioSections.contains(s.name))
          throw ConfigError("[scenario] file= excludes inline scenario sections");
      scenario_file = SectionedText::parse(read_file(base_dir / it->second));
    }
    const auto& source = scenario_file ? *scenario_file : parsed;
    bool vertical_hint = false;
    bool horizontal_hint = false;
    for (const auto& s : source.sections()) {
      vertical_hint = vertical_hint || kVerticalOnly.contains(s.name);
      horizontal_hint = horizontal_hint || kHorizontalOnly.contains(s.name);
      if (scenario_file && !s.name.empty() && !kScenarioSections.contains(s.name))
        throw ConfigError("scenario file: unknown section [" + s.name + "]");
    }
    std::optional<ExperimentKind> kind;
    if (const auto it = scenario.find("kind"); it != scenario.end()) {
      if (it->second == "vertical")
        kind = ExperimentKind::vertical;
      else if (it->second == "horizontal")
        kind = ExperimentKind::horizontal;
      else
        throw ParamError("kind", "expected vertical or horizontal, got '" + it->second + "'");
    }
    if (overrides.scenario_kind) {
      if (kind && *kind != *overrides.scenario_kind)
        throw ConfigError("--kind contradicts [scenario] kind=" + std::string(to_string(*kind)));
      kind = overrides.scenario_kind;
    }
    if (!kind) {
      if (vertical_hint == horizontal_hint)
        throw ConfigError("cannot tell vertical from horizontal scenario; set [scenario] kind=");
      kind = vertical_hint ? ExperimentKind::vertical : ExperimentKind::horizontal;
    }
    if ((*kind == ExperimentKind::vertical && horizontal_hint) ||
        (*kind == ExperimentKind::horizontal && vertical_hint))
      throw ConfigError("scenario sections do not match kind " + std::string(to_string(*kind)));
    cfg.kind = *kind;
  }
  if (scenario.contains("tie_break") && cfg.kind != ExperimentKind::horizontal)
    throw ConfigError("tie_break only applies to horizontal scenarios");

  cfg.network = load_topology(parsed, base_dir, cfg.run.rng_seed, cfg.topology_origin);

  if (has_model) {
    const auto it = model_kv.find("seeds");
    cfg.seeds = parse_seeds(it == model_kv.end() ? "0" : it->second, cfg.network);
  } else if (model_kv.contains("seeds")) {
    throw ConfigError("seeds belong to [model]");
  }

  if (cfg.kind == ExperimentKind::vertical) {
    cfg.vertical = parse_vertical_scenario(scenario_file ? *scenario_file : parsed, cfg.network);
  } else if (cfg.kind == ExperimentKind::horizontal) {
    auto sc = parse_horizontal_scenario(scenario_file ? *scenario_file : parsed, cfg.network);
    if (const auto it = scenario.find("tie_break"); it != scenario.end()) {
      if (it->second == "smallest")
        sc.tie_break = TieBreak::smallest;
      else if (it->second == "largest")
        sc.tie_break = TieBreak::largest;
      else
        throw ParamError("tie_break", "expected smallest or largest, got '" + it->second + "'");
    }
    cfg.scenario_warnings = validate_scenario(cfg.network, sc);
    cfg.horizontal = std::move(sc);
  }
  return cfg;
}

ExperimentConfig load_config_file(const fs::path& path, const ConfigOverrides& overrides) {
  return load_config(read_file(path), path.parent_path(), overrides);
}

std::string resolved_config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# resolved experiment configuration\n"
      << "# topology: " << cfg.topology_origin << "\n"
      << "[run]\n"
      << "max_ticks=" << cfg.run.max_ticks << '\n'
      << "n_runs=" << cfg.run.n_runs << '\n'
      << "rng_seed=" << cfg.run.rng_seed << '\n'
      << "stop=" << to_string(cfg.run.stop) << '\n'
      << "epsilon=" << format_double(cfg.run.epsilon) << '\n';
  if (cfg.model) {
    const auto& p = *cfg.model;
    out << "[model]\n"
        << "model=" << to_string(p.model) << '\n'
        << "beta=" << format_double(p.beta) << '\n'
        << "delta1=" << format_double(p.delta1) << '\n'
        << "tau=" << format_double(p.tau) << '\n'
        << "gamma=" << format_double(p.gamma) << '\n'
        << "seeds=";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.network.name_of(cfg.seeds[i]);
    out << '\n';
  }
  if (cfg.sweep.present)
    out << "[sweep]\n"
        << "vary=" << (cfg.sweep.vary == SweepParam::beta ? "beta" : "ratio") << '\n'
        << "grid=" << join_doubles(cfg.sweep.grid) << '\n';
  if (cfg.vertical) out << "[scenario]\nkind=vertical\n" << serialize(*cfg.vertical, cfg.network);
  if (cfg.horizontal)
    out << "[scenario]\nkind=horizontal\ntie_break="
        << (cfg.horizontal->tie_break == TieBreak::smallest ? "smallest" : "largest") << '\n'
        << serialize(*cfg.horizontal, cfg.network);
  out << "[output]\nformats=";
  bool first = true;
  for (const auto& f : cfg.formats) {
    out << (first ? "" : ",") << f;
    first = false;
  }
  out << "\n[edges]\n" << serialize(cfg.network);
  return out.str();
}

}  // namespace failprop
