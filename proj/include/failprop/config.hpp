#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "failprop/cascade_horizontal.hpp"
#include "failprop/cascade_vertical.hpp"
#include "failprop/epidemic.hpp"
#include "failprop/metrics.hpp"
#include "failprop/topology.hpp"

namespace failprop {

enum class ExperimentKind { epidemic, vertical, horizontal };

std::string_view to_string(ExperimentKind kind);

struct RunSettings {
  std::uint64_t max_ticks = 100;
  std::size_t n_runs = 1;
  std::uint64_t rng_seed = 0;
  StopRule stop = StopRule::absorb;
  double epsilon = 0.05;
  /// Not part of the resolved config: outputs never depend on it.
  int threads = 0;
};

struct SweepSettings {
  SweepParam vary = SweepParam::beta;
  std::vector<double> grid;
  bool present = false;
};

/// A fully resolved experiment. Exactly one of `model`, `vertical`,
/// `horizontal` is set, matching `kind`.
struct ExperimentConfig {
  Network network;
  std::string topology_origin;
  ExperimentKind kind = ExperimentKind::epidemic;
  std::optional<EpidemicParams> model;
  std::vector<NodeId> seeds;
  std::optional<VerticalScenario> vertical;
  std::optional<HorizontalScenario> horizontal;
  std::vector<std::string> scenario_warnings;
  RunSettings run;
  SweepSettings sweep;
  std::optional<std::filesystem::path> output_dir;
  std::set<std::string> formats{"csv", "json"};
};

struct ConfigOverrides {
  std::optional<std::uint64_t> rng_seed;
  std::optional<ExperimentKind> scenario_kind;
  std::optional<int> threads;
};

/// Parses the sectioned experiment config:
///
///     [topology]   file=PATH | generate=<er N P|ba N M|ring N|grid R C>, seed=N
///     [edges] [nodes] [names] [roles] [controllers]   inline topology
///     [model]      model=SI|SIS|SIR|SID, beta, delta1, tau, gamma, seeds=0,3
///     [scenario]   kind=vertical|horizontal, file=PATH, tie_break=smallest|largest
///     [capacity] [rate] [attack] [demand] [injection]  inline scenario
///     [run]        max_ticks, n_runs, rng_seed, stop=absorb|fixed, epsilon, threads
///     [sweep]      vary=beta|ratio, grid=v1,v2,...
///     [output]     dir=PATH, formats=csv,json
///
/// Relative paths resolve against `base_dir`. A generator without an
/// explicit seed uses the run seed. Throws ConfigError or ParamError for
/// configuration problems and TopologyError for topology problems.
ExperimentConfig load_config(std::string_view text, const std::filesystem::path& base_dir,
                             const ConfigOverrides& overrides = {});
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  const ConfigOverrides& overrides = {});

/// Self-contained config text (topology and scenario inlined, effective
/// seed recorded) that reproduces the experiment exactly.
std::string resolved_config_text(const ExperimentConfig& config);

/// Built-in desk-scale presets: mesh-sid, controller-failover, line-overload,
/// parallel-reroute.
std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string_view> preset_names();

}  // namespace failprop
