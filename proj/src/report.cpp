#include "failprop/report.hpp"

#include <algorithm>
#include <ostream>

#include "failprop/sectioned_text.hpp"

namespace failprop::report {

using nlohmann::json;

namespace {

json ids(const Network& net, const std::vector<NodeId>& nodes) {
  auto out = json::array();
  for (auto v : nodes) out.push_back(net.name_of(v));
  return out;
}

json counts_json(const Counts& c) {
  return {{"S", c[0]}, {"I", c[1]}, {"R", c[2]}, {"D", c[3]}};
}

std::string demand_label(const HorizontalTrace& trace, std::size_t i) {
  if (trace.has_injection && i + 1 == trace.demands.size()) return "injection";
  return std::to_string(i);
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "tick,S,I,R,D\n";
  for (std::size_t t = 0; t < trace.counts.size(); ++t) {
    const auto& c = trace.counts[t];
    out << t << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << '\n';
  }
}

void write_events_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "tick,node,from,to\n";
  for (const auto& e : trace.events)
    out << e.tick << ',' << e.node << ',' << to_char(e.from) << ',' << to_char(e.to) << '\n';
}

json epidemic_summary(const Network& net, const SimulationTrace& first, const MonteCarloResult& mc) {
  const auto stab = stabilization_time(first);
  json j;
  j["command"] = "epidemic";
  j["node_count"] = net.node_count();
  j["base_seed"] = mc.base_seed;
  j["n_runs"] = mc.n_runs;
  j["first_run"] = {
      {"ticks", first.last_tick()},
      {"final", counts_json(first.counts.back())},
      {"outbreak_size", outbreak_size(first)},
      {"stabilization_tick", stab.tick},
      {"stabilized", stab.stabilized},
      {"absorbed", first.absorbed},
      {"dp_connectivity", dp_connectivity(net, first.final_state)},
  };
  json mean = {{"S", json::array()}, {"I", json::array()}, {"R", json::array()}, {"D", json::array()}};
  json lo = mean;
  json hi = mean;
  static constexpr const char* kNames[] = {"S", "I", "R", "D"};
  for (std::size_t t = 0; t < mc.ticks(); ++t)
    for (int s = 0; s < 4; ++s) {
      mean[kNames[s]].push_back(mc.mean[t][s]);
      lo[kNames[s]].push_back(mc.min[t][s]);
      hi[kNames[s]].push_back(mc.max[t][s]);
    }
  j["aggregate"] = {{"ticks", mc.ticks()}, {"mean", mean}, {"min", lo}, {"max", hi}};
  j["outbreak"] = {{"mean", mc.mean_outbreak},
                   {"stderr", mc.stderr_outbreak},
                   {"counts", mc.outbreak_counts}};
  return j;
}

void write_vertical_csv(std::ostream& out, const Network& net, const VerticalScenario& sc,
                        const VerticalTrace& trace) {
  out << "round,controller,load,capacity,status\n";
  for (const auto& r : trace.rounds) {
    for (const auto& [c, load] : r.load) {
      const bool before = std::find(r.failed_before.begin(), r.failed_before.end(), c) != r.failed_before.end();
      const bool now = std::find(r.newly_failed.begin(), r.newly_failed.end(), c) != r.newly_failed.end();
      out << r.round << ',' << net.name_of(c) << ',' << format_double(load) << ','
          << format_double(sc.capacity(c)) << ',' << (before ? "failed" : now ? "overloaded" : "ok")
          << '\n';
    }
  }
}

json vertical_summary(const Network& net, const VerticalTrace& trace) {
  const auto& t = trace.terminal;
  json rounds = json::array();
  for (const auto& r : trace.rounds)
    rounds.push_back({{"round", r.round},
                      {"newly_failed", ids(net, r.newly_failed)},
                      {"orphaned", ids(net, r.assignment.orphaned())}});
  return {{"command", "cascade"},
          {"kind", "vertical"},
          {"node_count", net.node_count()},
          {"rounds", trace.rounds.size()},
          {"per_round", rounds},
          {"failed_controllers", ids(net, t.failed_controllers)},
          {"live_controllers", ids(net, t.live_controllers)},
          {"orphaned_switches", ids(net, t.orphaned_switches)},
          {"assigned_switches", ids(net, t.assigned_switches)},
          {"failed_count", t.failed_count()},
          {"failed_fraction", failed_fraction(net, trace)}};
}

void write_horizontal_csv(std::ostream& out, const Network& net, const HorizontalScenario& sc,
                          const HorizontalTrace& trace) {
  out << "round,node,load,capacity,status\n";
  for (const auto& r : trace.rounds) {
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (net.role(v) == NodeRole::controller) continue;
      const bool now = std::find(r.newly_failed.begin(), r.newly_failed.end(), v) != r.newly_failed.end();
      out << r.round << ',' << net.name_of(v) << ',' << format_double(r.loads.load[v]) << ','
          << format_double(sc.capacity(v)) << ','
          << (!r.alive[v] ? "failed" : now ? "overloaded" : "ok") << '\n';
    }
  }
}

void write_dropped_csv(std::ostream& out, const Network& net, const HorizontalTrace& trace) {
  out << "round,demand,src,dst,volume\n";
  for (const auto& r : trace.rounds)
    for (auto i : r.loads.dropped) {
      const auto& d = trace.demands[i];
      out << r.round << ',' << demand_label(trace, i) << ',' << net.name_of(d.src) << ','
          << net.name_of(d.dst) << ',' << format_double(d.volume) << '\n';
    }
}

json horizontal_summary(const Network& net, const HorizontalTrace& trace) {
  json rounds = json::array();
  for (const auto& r : trace.rounds) {
    json dropped = json::array();
    for (auto i : r.loads.dropped) dropped.push_back(demand_label(trace, i));
    rounds.push_back({{"round", r.round}, {"newly_failed", ids(net, r.newly_failed)}, {"dropped", dropped}});
  }
  return {{"command", "cascade"},
          {"kind", "horizontal"},
          {"node_count", net.node_count()},
          {"rounds", trace.rounds.size()},
          {"per_round", rounds},
          {"failed_nodes", ids(net, trace.failed)},
          {"failed_count", trace.failed.size()},
          {"failed_fraction", failed_fraction(net, trace)}};
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "param,mean_outbreak,stderr,n_runs\n";
  for (std::size_t i = 0; i < sweep.grid.size(); ++i)
    out << format_double(sweep.grid[i]) << ',' << format_double(sweep.response[i]) << ','
        << format_double(sweep.standard_error[i]) << ',' << sweep.n_runs << '\n';
}

std::string threshold_line(const SweepResult& sweep) {
  return "threshold_estimate=" +
         (sweep.threshold_estimate ? format_double(*sweep.threshold_estimate) : std::string("none"));
}

}  // namespace failprop::report
