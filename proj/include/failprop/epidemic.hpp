#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "failprop/rng.hpp"
#include "failprop/topology.hpp"

namespace failprop {

enum class Model : std::uint8_t { SI, SIS, SIR, SID };
enum class NodeState : std::uint8_t { S = 0, I = 1, R = 2, D = 3 };

std::string_view to_string(Model model);
std::optional<Model> parse_model(std::string_view name);
char to_char(NodeState state);

/// Per-tick transition probabilities. Under SIR `delta1` is the removal
/// probability; `tau` and `gamma` only apply to SID.
struct EpidemicParams {
  Model model = Model::SID;
  double beta = 0.0;    // per infected neighbour
  double delta1 = 0.0;  // I -> S (SIS, SID) or I -> R (SIR)
  double tau = 0.0;     // I -> D
  double gamma = 0.0;   // D -> S

  /// Throws ParamError naming the first offending field.
  void validate() const;
};

struct StateVector {
  std::vector<NodeState> states;
  std::uint64_t tick = 0;
};

/// Compartment counts indexed by NodeState.
using Counts = std::array<std::uint32_t, 4>;

Counts count_states(std::span<const NodeState> states);

struct Transition {
  std::uint64_t tick = 0;  // tick at which `to` first holds
  NodeId node = 0;
  NodeState from = NodeState::S;
  NodeState to = NodeState::S;

  friend bool operator==(const Transition&, const Transition&) = default;
};

enum class StopRule : std::uint8_t { fixed_ticks, absorb };

std::string_view to_string(StopRule rule);
std::optional<StopRule> parse_stop_rule(std::string_view name);

/// One realisation: counts for ticks 0..T, every state change, and the
/// final state vector. Seeds appear as S->I transitions at tick 0.
struct SimulationTrace {
  std::size_t node_count = 0;
  std::vector<Counts> counts;
  std::vector<Transition> events;
  StateVector final_state;
  /// Stopped because no I and no D node remained.
  bool absorbed = false;

  std::uint64_t last_tick() const { return counts.empty() ? 0 : counts.size() - 1; }
};

/// 1 - (1 - beta)^k: probability that at least one of k independent
/// per-neighbour transmissions succeeds.
double infection_probability(std::size_t infected_neighbours, double beta);

/// One synchronous tick. Every transition reads the tick-t states only.
///
/// Draw order: first one uniform per I or D node in ascending id order
/// (skipped where the state is absorbing), then one per S node with at least
/// one infected neighbour, ascending. An I node under SID leaves to D when
/// u < tau, to S when tau <= u < tau + delta1.
StateVector step(const Network& net, const StateVector& sv, const EpidemicParams& params, Rng& rng);

/// Same as step() but writes into `next` and appends transitions to
/// `events` when non-null. `next` must not alias `current`.
void step_into(const Network& net, const StateVector& current, const EpidemicParams& params,
               Rng& rng, StateVector& next, std::vector<Transition>* events);

/// Initial state vector with `seeds` infected. Throws std::invalid_argument
/// on an empty seed set or an unknown id.
StateVector seeded_state(const Network& net, std::span<const NodeId> seeds);

SimulationTrace run(const Network& net, std::span<const NodeId> seeds, const EpidemicParams& params,
                    std::uint64_t max_ticks, StopRule stop, std::uint64_t rng_seed);

/// Aggregate of n independent replicas; replica i runs with
/// derive_seed(base_seed, i). Replicas that stop early are padded with their
/// final counts up to the longest replica.
struct MonteCarloResult {
  std::size_t node_count = 0;
  std::size_t n_runs = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::array<double, 4>> mean;
  std::vector<Counts> min;
  std::vector<Counts> max;
  /// Nodes ever infected, per replica in replica order.
  std::vector<std::uint32_t> outbreak_counts;
  /// Final compartment counts, per replica.
  std::vector<Counts> final_counts;
  double mean_outbreak = 0.0;    // fraction of nodes
  double stderr_outbreak = 0.0;  // standard error of mean_outbreak

  std::size_t ticks() const { return mean.size(); }
  friend bool operator==(const MonteCarloResult&, const MonteCarloResult&) = default;
};

struct MonteCarloOptions {
  std::size_t n_runs = 1;
  std::uint64_t base_seed = 0;
  /// OpenMP thread count; 0 uses the runtime default.
  int threads = 0;
};

/// Replicas run in parallel; results are identical for every thread count.
MonteCarloResult monte_carlo(const Network& net, std::span<const NodeId> seeds,
                             const EpidemicParams& params, std::uint64_t max_ticks, StopRule stop,
                             const MonteCarloOptions& options);

/// Single-threaded reference with running accumulators. Kept for testing
/// and benchmarking the parallel path.
MonteCarloResult monte_carlo_serial(const Network& net, std::span<const NodeId> seeds,
                                    const EpidemicParams& params, std::uint64_t max_ticks,
                                    StopRule stop, std::size_t n_runs, std::uint64_t base_seed);

}  // namespace failprop
