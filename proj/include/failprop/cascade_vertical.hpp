#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "failprop/topology.hpp"

namespace failprop {

class SectionedText;

/// Request-rate overload of SDN controllers through failover chains.
struct VerticalScenario {
  struct Attack {
    NodeId target = 0;
    double rate = 0.0;
  };

  /// Requests per tick a controller can serve. Controllers without an entry
  /// have unbounded capacity.
  std::map<NodeId, double> controller_capacity;
  /// Requests per tick each switch sends; absent switches send none.
  std::map<NodeId, double> base_rate;
  std::optional<Attack> attack;

  double capacity(NodeId controller) const;
  /// base_rate plus the attack rate when `sw` is the target.
  double effective_rate(NodeId sw) const;
};

/// Throws ParamError on a scenario that does not fit `net` (wrong roles,
/// negative or non-finite values, no controllers at all).
void validate_scenario(const Network& net, const VerticalScenario& sc);

/// Parses `[capacity] ctrl=value`, `[rate] switch=value` and
/// `[attack] switch=value`. Node tokens may be ids or aliases.
VerticalScenario parse_vertical_scenario(const SectionedText& text, const Network& net);
std::string serialize(const VerticalScenario& sc, const Network& net);

struct SwitchAssignment {
  /// Every switch in the network; nullopt means orphaned.
  std::map<NodeId, std::optional<NodeId>> controller_of;
  /// Switches with an empty preference list.
  std::vector<NodeId> unassigned;

  std::vector<NodeId> orphaned() const;
};

/// Each switch goes to the first controller in its preference list that is
/// not in `failed_controllers`, else it is orphaned.
SwitchAssignment assign_switches(const Network& net, const std::vector<bool>& failed_controllers);

struct VerticalRound {
  std::size_t round = 0;  // 1-based
  std::vector<NodeId> failed_before;
  SwitchAssignment assignment;
  /// Load per controller; failed controllers carry zero.
  std::map<NodeId, double> load;
  std::vector<NodeId> newly_failed;
};

struct VerticalTerminal {
  std::vector<NodeId> failed_controllers;
  std::vector<NodeId> live_controllers;
  std::vector<NodeId> orphaned_switches;
  std::vector<NodeId> assigned_switches;

  /// Failed controllers plus orphaned switches.
  std::size_t failed_count() const { return failed_controllers.size() + orphaned_switches.size(); }
};

struct VerticalTrace {
  std::vector<VerticalRound> rounds;
  VerticalTerminal terminal;
};

/// Synchronous monotone fixed point: assign switches, sum effective rates
/// per controller, fail every controller whose load exceeds its capacity,
/// repeat until a round fails nobody. The final round is the quiet one.
VerticalTrace run_vertical(const Network& net, const VerticalScenario& sc);

}  // namespace failprop
