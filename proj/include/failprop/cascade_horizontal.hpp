#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "failprop/topology.hpp"

namespace failprop {

class SectionedText;

using Path = std::vector<NodeId>;

struct Demand {
  NodeId src = 0;
  NodeId dst = 0;
  double volume = 0.0;

  friend bool operator==(const Demand&, const Demand&) = default;
};

/// Which of several equal-hop paths a demand takes. `largest` models a
/// misbehaving routing application that picks the wrong tied path.
enum class TieBreak { smallest, largest };

/// Data-plane overload: traffic routed over shortest paths loads every node
/// it crosses; nodes above capacity fail and the traffic is rerouted.
struct HorizontalScenario {
  /// Nodes without an entry have unbounded capacity.
  std::map<NodeId, double> node_capacity;
  std::vector<Demand> demands;
  /// The attack flow; routed as one more demand after `demands`.
  std::optional<Demand> injection;
  TieBreak tie_break = TieBreak::smallest;

  double capacity(NodeId v) const;
  /// demands followed by the injection, if any.
  std::vector<Demand> all_demands() const;
};

/// Throws ParamError on unknown or controller endpoints, src == dst, or
/// negative / non-finite values. Returns warnings (injection endpoints that
/// are not edge switches).
std::vector<std::string> validate_scenario(const Network& net, const HorizontalScenario& sc);

/// Parses `[capacity] node=value`, `[demand] src,dst,volume` and
/// `[injection] entry,exit,volume`.
HorizontalScenario parse_horizontal_scenario(const SectionedText& text, const Network& net);
std::string serialize(const HorizontalScenario& sc, const Network& net);

/// Fewest-hop path from src to dst over alive non-controller nodes, ties
/// broken by the lexicographically smallest (or largest) id sequence.
/// nullopt when unreachable or either endpoint is dead. Throws
/// std::invalid_argument when src == dst.
std::optional<Path> route_demand(const Network& net, const std::vector<bool>& alive, NodeId src,
                                 NodeId dst, TieBreak tie_break = TieBreak::smallest);

/// Node load: total volume of routed demands whose path includes the node,
/// endpoints included.
using LoadMap = std::vector<double>;

struct LoadResult {
  LoadMap load;
  /// Per entry of all_demands(); nullopt for dropped demands.
  std::vector<std::optional<Path>> paths;
  std::vector<std::size_t> routed;
  std::vector<std::size_t> dropped;
};

LoadResult compute_loads(const Network& net, const std::vector<bool>& alive,
                         const HorizontalScenario& sc);

struct HorizontalRound {
  std::size_t round = 0;  // 1-based
  std::vector<bool> alive;  // at the start of the round
  LoadResult loads;
  std::vector<NodeId> newly_failed;
};

struct HorizontalTrace {
  std::vector<HorizontalRound> rounds;
  std::vector<NodeId> failed;  // terminal failed set, ascending
  std::vector<Demand> demands; // all_demands() of the scenario
  bool has_injection = false;
};

/// Route, load, fail every node above capacity, repeat until a round fails
/// nobody. The final round is the quiet one.
HorizontalTrace run_horizontal(const Network& net, const HorizontalScenario& sc);

}  // namespace failprop
