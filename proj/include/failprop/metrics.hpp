#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "failprop/cascade_horizontal.hpp"
#include "failprop/cascade_vertical.hpp"
#include "failprop/epidemic.hpp"

namespace failprop {

/// Fraction of nodes that entered I at any tick (seeds included).
double outbreak_size(const SimulationTrace& trace);

/// Fraction of all nodes in the largest connected component once D nodes
/// are removed. I nodes keep forwarding: a failed control plane does not
/// break established data-plane connections.
double dp_connectivity(const Network& net, const StateVector& sv);

struct Stabilization {
  std::uint64_t tick = 0;
  bool stabilized = true;
};

/// First tick after which the compartment counts never change. A trace
/// whose counts still change at its last tick, and that did not stop by
/// absorption, reports that tick with stabilized = false.
Stabilization stabilization_time(const SimulationTrace& trace);

/// Mean fraction of nodes in `state` over the last `window` ticks of the
/// aggregate (all ticks if shorter).
double mean_fraction(const MonteCarloResult& mc, NodeState state, std::size_t window);

enum class SweepParam { beta, ratio };  // ratio: beta / delta1

struct SweepResult {
  SweepParam vary = SweepParam::beta;
  std::vector<double> grid;
  std::vector<double> response;  // mean final outbreak fraction
  std::vector<double> standard_error;
  std::size_t n_runs = 0;
  double epsilon = 0.05;
  std::optional<double> threshold_estimate;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

struct SweepOptions {
  SweepParam vary = SweepParam::beta;
  std::size_t n_runs = 100;
  std::uint64_t max_ticks = 100;
  StopRule stop = StopRule::absorb;
  double epsilon = 0.05;
  std::uint64_t base_seed = 0;
  int threads = 0;
};

/// Monte Carlo outbreak size at each grid point; grid point j uses base
/// seed derive_seed(options.base_seed, j). The threshold estimate is the
/// first grid value whose response exceeds epsilon. Throws ParamError on an
/// empty or non-increasing grid or epsilon outside (0, 1).
SweepResult threshold_sweep(const Network& net, std::span<const NodeId> seeds,
                            const EpidemicParams& base, std::span<const double> grid,
                            const SweepOptions& options);

/// (failed controllers + orphaned switches) / node_count.
double failed_fraction(const Network& net, const VerticalTrace& trace);
/// failed nodes / node_count.
double failed_fraction(const Network& net, const HorizontalTrace& trace);

}  // namespace failprop
