#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "failprop/cascade_horizontal.hpp"
#include "failprop/cascade_vertical.hpp"
#include "failprop/epidemic.hpp"
#include "failprop/metrics.hpp"

namespace failprop::report {

/// `tick,S,I,R,D`
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
/// `tick,node,from,to`
void write_events_csv(std::ostream& out, const SimulationTrace& trace);

nlohmann::json epidemic_summary(const Network& net, const SimulationTrace& first,
                                const MonteCarloResult& mc);

/// `round,controller,load,capacity,status`; status is ok, overloaded (fails
/// this round) or failed (failed earlier).
void write_vertical_csv(std::ostream& out, const Network& net, const VerticalScenario& sc,
                        const VerticalTrace& trace);
nlohmann::json vertical_summary(const Network& net, const VerticalTrace& trace);

/// `round,node,load,capacity,status` over data-plane nodes.
void write_horizontal_csv(std::ostream& out, const Network& net, const HorizontalScenario& sc,
                          const HorizontalTrace& trace);
/// `round,demand,src,dst,volume`; demand is the index into all_demands()
/// or "injection".
void write_dropped_csv(std::ostream& out, const Network& net, const HorizontalTrace& trace);
nlohmann::json horizontal_summary(const Network& net, const HorizontalTrace& trace);

/// `param,mean_outbreak,stderr,n_runs`
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
/// `threshold_estimate=<value|none>`
std::string threshold_line(const SweepResult& sweep);

}  // namespace failprop::report
