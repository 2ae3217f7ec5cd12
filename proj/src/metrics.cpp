#include "failprop/metrics.hpp"

#include <algorithm>

#include "failprop/errors.hpp"
#include "failprop/sectioned_text.hpp"

namespace failprop {

double outbreak_size(const SimulationTrace& trace) {
  if (trace.node_count == 0) return 0.0;
  std::vector<bool> ever(trace.node_count, false);
  std::size_t count = 0;
  for (const auto& e : trace.events)
    if (e.to == NodeState::I && !ever[e.node]) {
      ever[e.node] = true;
      ++count;
    }
  return static_cast<double>(count) / static_cast<double>(trace.node_count);
}

double dp_connectivity(const Network& net, const StateVector& sv) {
  if (sv.states.size() != net.node_count())
    throw std::invalid_argument("state vector length differs from node count");
  if (net.node_count() == 0) return 0.0;
  std::vector<bool> functional(net.node_count());
  for (NodeId v = 0; v < net.node_count(); ++v) functional[v] = sv.states[v] != NodeState::D;
  const auto sizes = component_sizes(net, functional);
  const auto largest = sizes.empty() ? 0 : sizes.front();
  return static_cast<double>(largest) / static_cast<double>(net.node_count());
}

Stabilization stabilization_time(const SimulationTrace& trace) {
  if (trace.counts.empty()) return {0, true};
  std::uint64_t t = trace.counts.size() - 1;
  while (t > 0 && trace.counts[t - 1] == trace.counts[t]) --t;
  const auto horizon = trace.counts.size() - 1;
  if (t == horizon && horizon > 0 && !trace.absorbed) return {horizon, false};
  return {t, true};
}

double mean_fraction(const MonteCarloResult& mc, NodeState state, std::size_t window) {
  if (mc.mean.empty() || mc.node_count == 0) return 0.0;
  const auto ticks = mc.mean.size();
  const auto first = ticks > window ? ticks - window : 0;
  double sum = 0.0;
  for (auto t = first; t < ticks; ++t) sum += mc.mean[t][static_cast<int>(state)];
  return sum / static_cast<double>(ticks - first) / static_cast<double>(mc.node_count);
}

SweepResult threshold_sweep(const Network& net, std::span<const NodeId> seeds,
                            const EpidemicParams& base, std::span<const double> grid,
                            const SweepOptions& options) {
  if (grid.empty()) throw ParamError("grid", "must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ParamError("grid", "must be strictly increasing");
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
    throw ParamError("epsilon", "must lie in (0, 1)");

  SweepResult r;
  r.vary = options.vary;
  r.grid.assign(grid.begin(), grid.end());
  r.n_runs = options.n_runs;
  r.epsilon = options.epsilon;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto params = base;
    params.beta = options.vary == SweepParam::beta ? grid[j] : grid[j] * base.delta1;
    const auto mc = monte_carlo(net, seeds, params, options.max_ticks, options.stop,
                                {options.n_runs, derive_seed(options.base_seed, j), options.threads});
    r.response.push_back(mc.mean_outbreak);
    r.standard_error.push_back(mc.stderr_outbreak);
    if (!r.threshold_estimate && mc.mean_outbreak > options.epsilon) r.threshold_estimate = grid[j];
  }
  return r;
}

double failed_fraction(const Network& net, const VerticalTrace& trace) {
  return static_cast<double>(trace.terminal.failed_count()) / static_cast<double>(net.node_count());
}

double failed_fraction(const Network& net, const HorizontalTrace& trace) {
  return static_cast<double>(trace.failed.size()) / static_cast<double>(net.node_count());
}

}  // namespace failprop
