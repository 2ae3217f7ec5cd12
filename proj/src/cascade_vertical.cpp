#include "failprop/cascade_vertical.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "failprop/errors.hpp"
#include "failprop/sectioned_text.hpp"

namespace failprop {

double VerticalScenario::capacity(NodeId controller) const {
  const auto it = controller_capacity.find(controller);
  return it == controller_capacity.end() ? std::numeric_limits<double>::infinity() : it->second;
}

double VerticalScenario::effective_rate(NodeId sw) const {
  const auto it = base_rate.find(sw);
  double rate = it == base_rate.end() ? 0.0 : it->second;
  if (attack && attack->target == sw) rate += attack->rate;
  return rate;
}

void validate_scenario(const Network& net, const VerticalScenario& sc) {
  const auto amount = [](const char* field, double v) {
    if (!std::isfinite(v) || v < 0.0)
      throw ParamError(field, "must be a nonnegative finite number, got " + format_double(v));
  };
  const auto known = [&](const char* field, NodeId v) {
    if (v >= net.node_count()) throw ParamError(field, "unknown node " + std::to_string(v));
  };
  if (net.nodes_with_role(NodeRole::controller).empty())
    throw ParamError("topology", "vertical scenario needs at least one controller");
  for (const auto& [c, cap] : sc.controller_capacity) {
    known("capacity", c);
    if (net.role(c) != NodeRole::controller)
      throw ParamError("capacity", "node " + net.name_of(c) + " is not a controller");
    amount("capacity", cap);
  }
  for (const auto& [sw, rate] : sc.base_rate) {
    known("rate", sw);
    if (!is_switch(net.role(sw)))
      throw ParamError("rate", "node " + net.name_of(sw) + " is not a switch");
    amount("rate", rate);
  }
  if (sc.attack) {
    known("attack", sc.attack->target);
    if (!is_switch(net.role(sc.attack->target)))
      throw ParamError("attack", "target " + net.name_of(sc.attack->target) + " is not a switch");
    amount("attack", sc.attack->rate);
  }
}

namespace {

std::pair<NodeId, double> parse_assignment(const TextLine& line, const Network& net,
                                           const char* field) {
  const auto kv = split_key_value(line.text);
  if (!kv) throw ParamError(field, "line " + std::to_string(line.number) + ": expected node=value");
  const auto id = net.find(kv->first);
  if (!id)
    throw ParamError(field, "line " + std::to_string(line.number) + ": unknown node '" + kv->first + "'");
  const auto v = parse_double(kv->second);
  if (!v)
    throw ParamError(field, "line " + std::to_string(line.number) + ": bad number '" + kv->second + "'");
  return {*id, *v};
}

}  // namespace

VerticalScenario parse_vertical_scenario(const SectionedText& text, const Network& net) {
  VerticalScenario sc;
  for (const auto& line : text.lines("capacity")) {
    const auto [id, v] = parse_assignment(line, net, "capacity");
    if (!sc.controller_capacity.emplace(id, v).second)
      throw ParamError("capacity", "duplicate entry for " + net.name_of(id));
  }
  for (const auto& line : text.lines("rate")) {
    const auto [id, v] = parse_assignment(line, net, "rate");
    if (!sc.base_rate.emplace(id, v).second)
      throw ParamError("rate", "duplicate entry for " + net.name_of(id));
  }
  const auto attack = text.lines("attack");
  if (attack.size() > 1) throw ParamError("attack", "at most one attack line");
  if (attack.size() == 1) {
    const auto [id, v] = parse_assignment(attack[0], net, "attack");
    sc.attack = VerticalScenario::Attack{id, v};
  }
  validate_scenario(net, sc);
  return sc;
}

std::string serialize(const VerticalScenario& sc, const Network& net) {
  std::ostringstream out;
  out << "[capacity]\n";
  for (const auto& [c, cap] : sc.controller_capacity)
    out << net.name_of(c) << '=' << format_double(cap) << '\n';
  out << "[rate]\n";
  for (const auto& [sw, rate] : sc.base_rate) out << net.name_of(sw) << '=' << format_double(rate) << '\n';
  if (sc.attack)
    out << "[attack]\n" << net.name_of(sc.attack->target) << '=' << format_double(sc.attack->rate) << '\n';
  return out.str();
}

std::vector<NodeId> SwitchAssignment::orphaned() const {
  std::vector<NodeId> out;
  for (const auto& [sw, c] : controller_of)
    if (!c) out.push_back(sw);
  return out;
}

SwitchAssignment assign_switches(const Network& net, const std::vector<bool>& failed_controllers) {
  SwitchAssignment a;
  const auto failed = [&](NodeId c) { return c < failed_controllers.size() && failed_controllers[c]; };
  for (auto sw : net.switches()) {
    const auto prefs = net.controller_prefs(sw);
    if (prefs.empty()) a.unassigned.push_back(sw);
    std::optional<NodeId> chosen;
    for (auto c : prefs)
      if (!failed(c)) {
        chosen = c;
        break;
      }
    a.controller_of.emplace(sw, chosen);
  }
  return a;
}

VerticalTrace run_vertical(const Network& net, const VerticalScenario& sc) {
  validate_scenario(net, sc);
  const auto controllers = net.nodes_with_role(NodeRole::controller);
  std::vector<bool> failed(net.node_count(), false);
  VerticalTrace trace;

  while (true) {
    VerticalRound round;
    round.round = trace.rounds.size() + 1;
    for (auto c : controllers)
      if (failed[c]) round.failed_before.push_back(c);
    round.assignment = assign_switches(net, failed);
    for (auto c : controllers) round.load[c] = 0.0;
    for (const auto& [sw, c] : round.assignment.controller_of)
      if (c) round.load[*c] += sc.effective_rate(sw);
    for (auto c : controllers)
      if (!failed[c] && round.load[c] > sc.capacity(c)) round.newly_failed.push_back(c);
    for (auto c : round.newly_failed) failed[c] = true;
    const bool quiet = round.newly_failed.empty();
    trace.rounds.push_back(std::move(round));
    if (quiet) break;
  }

  auto& term = trace.terminal;
  for (auto c : controllers) (failed[c] ? term.failed_controllers : term.live_controllers).push_back(c);
  for (const auto& [sw, c] : trace.rounds.back().assignment.controller_of)
    (c ? term.assigned_switches : term.orphaned_switches).push_back(sw);
  return trace;
}

}  // namespace failprop
