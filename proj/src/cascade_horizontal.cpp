#include "failprop/cascade_horizontal.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "failprop/errors.hpp"
#include "failprop/sectioned_text.hpp"

namespace failprop {

double HorizontalScenario::capacity(NodeId v) const {
  const auto it = node_capacity.find(v);
  return it == node_capacity.end() ? std::numeric_limits<double>::infinity() : it->second;
}

std::vector<Demand> HorizontalScenario::all_demands() const {
  auto out = demands;
  if (injection) out.push_back(*injection);
  return out;
}

std::vector<std::string> validate_scenario(const Network& net, const HorizontalScenario& sc) {
  std::vector<std::string> warnings;
  const auto amount = [](const char* field, double v) {
    if (!std::isfinite(v) || v < 0.0)
      throw ParamError(field, "must be a nonnegative finite number, got " + format_double(v));
  };
  const auto endpoint = [&](const char* field, NodeId v) {
    if (v >= net.node_count()) throw ParamError(field, "unknown node " + std::to_string(v));
    if (net.role(v) == NodeRole::controller)
      throw ParamError(field, "controller " + net.name_of(v) + " cannot carry data-plane traffic");
  };
  for (const auto& [v, cap] : sc.node_capacity) {
    if (v >= net.node_count()) throw ParamError("capacity", "unknown node " + std::to_string(v));
    amount("capacity", cap);
  }
  const auto check = [&](const char* field, const Demand& d) {
    endpoint(field, d.src);
    endpoint(field, d.dst);
    if (d.src == d.dst) throw ParamError(field, "source and destination coincide");
    amount(field, d.volume);
  };
  for (const auto& d : sc.demands) check("demand", d);
  if (sc.injection) {
    check("injection", *sc.injection);
    for (auto v : {sc.injection->src, sc.injection->dst})
      if (net.role(v) != NodeRole::edge_switch)
        warnings.push_back("injection endpoint " + net.name_of(v) + " is not an edge switch");
  }
  return warnings;
}

namespace {

Demand parse_demand(const TextLine& line, const Network& net, const char* field) {
  const auto parts = split(line.text, ',');
  const auto where = "line " + std::to_string(line.number) + ": ";
  if (parts.size() != 3) throw ParamError(field, where + "expected src,dst,volume");
  const auto src = net.find(parts[0]);
  const auto dst = net.find(parts[1]);
  const auto vol = parse_double(parts[2]);
  if (!src) throw ParamError(field, where + "unknown node '" + parts[0] + "'");
  if (!dst) throw ParamError(field, where + "unknown node '" + parts[1] + "'");
  if (!vol) throw ParamError(field, where + "bad volume '" + parts[2] + "'");
  return {*src, *dst, *vol};
}

}  // namespace

HorizontalScenario parse_horizontal_scenario(const SectionedText& text, const Network& net) {
  HorizontalScenario sc;
  for (const auto& line : text.lines("capacity")) {
    const auto kv = split_key_value(line.text);
    const auto where = "line " + std::to_string(line.number) + ": ";
    if (!kv) throw ParamError("capacity", where + "expected node=value");
    const auto id = net.find(kv->first);
    const auto v = parse_double(kv->second);
    if (!id) throw ParamError("capacity", where + "unknown node '" + kv->first + "'");
    if (!v) throw ParamError("capacity", where + "bad number '" + kv->second + "'");
    if (!sc.node_capacity.emplace(*id, *v).second)
      throw ParamError("capacity", where + "duplicate entry");
  }
  for (const auto& line : text.lines("demand")) sc.demands.push_back(parse_demand(line, net, "demand"));
  const auto inj = text.lines("injection");
  if (inj.size() > 1) throw ParamError("injection", "at most one injection line");
  if (inj.size() == 1) sc.injection = parse_demand(inj[0], net, "injection");
  validate_scenario(net, sc);
  return sc;
}

std::string serialize(const HorizontalScenario& sc, const Network& net) {
  std::ostringstream out;
  out << "[capacity]\n";
  for (const auto& [v, cap] : sc.node_capacity) out << net.name_of(v) << '=' << format_double(cap) << '\n';
  out << "[demand]\n";
  for (const auto& d : sc.demands)
    out << net.name_of(d.src) << ',' << net.name_of(d.dst) << ',' << format_double(d.volume) << '\n';
  if (sc.injection)
    out << "[injection]\n"
        << net.name_of(sc.injection->src) << ',' << net.name_of(sc.injection->dst) << ','
        << format_double(sc.injection->volume) << '\n';
  return out.str();
}

std::optional<Path> route_demand(const Network& net, const std::vector<bool>& alive, NodeId src,
                                 NodeId dst, TieBreak tie_break) {
  if (src == dst) throw std::invalid_argument("route_demand: src == dst");
  const auto n = net.node_count();
  if (src >= n || dst >= n) throw std::out_of_range("route_demand: unknown node");
  const auto usable = [&](NodeId v) {
    return (alive.empty() || alive[v]) && net.role(v) != NodeRole::controller;
  };
  if (!usable(src) || !usable(dst)) return std::nullopt;

  // Hop distances to dst; then walk from src always stepping to the
  // smallest (largest) neighbour one hop closer.
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, kUnreached);
  std::deque<NodeId> queue{dst};
  dist[dst] = 0;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto w : net.neighbors(v)) {
      if (dist[w] == kUnreached && usable(w)) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  if (dist[src] == kUnreached) return std::nullopt;

  Path path{src};
  auto v = src;
  while (v != dst) {
    std::optional<NodeId> next;
    for (auto w : net.neighbors(v)) {  // ascending
      if (dist[w] + 1 != dist[v]) continue;
      next = w;
      if (tie_break == TieBreak::smallest) break;
    }
    v = *next;
    path.push_back(v);
  }
  return path;
}

LoadResult compute_loads(const Network& net, const std::vector<bool>& alive,
                         const HorizontalScenario& sc) {
  LoadResult r;
  r.load.assign(net.node_count(), 0.0);
  const auto demands = sc.all_demands();
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto& d = demands[i];
    auto path = route_demand(net, alive, d.src, d.dst, sc.tie_break);
    if (path) {
      for (auto v : *path) r.load[v] += d.volume;
      r.routed.push_back(i);
    } else {
      r.dropped.push_back(i);
    }
    r.paths.push_back(std::move(path));
  }
  return r;
}

HorizontalTrace run_horizontal(const Network& net, const HorizontalScenario& sc) {
  validate_scenario(net, sc);
  HorizontalTrace trace;
  trace.demands = sc.all_demands();
  trace.has_injection = sc.injection.has_value();
  std::vector<bool> alive(net.node_count(), true);

  while (true) {
    HorizontalRound round;
    round.round = trace.rounds.size() + 1;
    round.alive = alive;
    round.loads = compute_loads(net, alive, sc);
    for (NodeId v = 0; v < net.node_count(); ++v)
      if (alive[v] && round.loads.load[v] > sc.capacity(v)) round.newly_failed.push_back(v);
    for (auto v : round.newly_failed) alive[v] = false;
    const bool quiet = round.newly_failed.empty();
    trace.rounds.push_back(std::move(round));
    if (quiet) break;
  }
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (!alive[v]) trace.failed.push_back(v);
  return trace;
}

}  // namespace failprop
