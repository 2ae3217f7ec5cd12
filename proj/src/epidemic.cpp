#include "failprop/epidemic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "failprop/errors.hpp"

namespace failprop {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::SI: return "SI";
    case Model::SIS: return "SIS";
    case Model::SIR: return "SIR";
    case Model::SID: return "SID";
  }
  return "?";
}

std::optional<Model> parse_model(std::string_view name) {
  for (auto m : {Model::SI, Model::SIS, Model::SIR, Model::SID})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

char to_char(NodeState state) { return "SIRD"[static_cast<int>(state)]; }

std::string_view to_string(StopRule rule) {
  return rule == StopRule::absorb ? "absorb" : "fixed";
}

std::optional<StopRule> parse_stop_rule(std::string_view name) {
  if (name == "absorb") return StopRule::absorb;
  if (name == "fixed" || name == "fixed_ticks") return StopRule::fixed_ticks;
  return std::nullopt;
}

void EpidemicParams::validate() const {
  const auto prob = [](const char* field, double v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ParamError(field, "must be a probability in [0, 1], got " + std::to_string(v));
  };
  prob("beta", beta);
  prob("delta1", delta1);
  prob("tau", tau);
  prob("gamma", gamma);
  const auto zero = [&](const char* field, double v) {
    if (v != 0.0)
      throw ParamError(field, std::string("must be 0 under the ") + std::string(to_string(model)) +
                                  " model");
  };
  switch (model) {
    case Model::SI:
      zero("delta1", delta1);
      [[fallthrough]];
    case Model::SIS:
    case Model::SIR:
      zero("tau", tau);
      zero("gamma", gamma);
      break;
    case Model::SID:
      if (tau + delta1 > 1.0) throw ParamError("tau", "tau + delta1 must not exceed 1");
      break;
  }
}

Counts count_states(std::span<const NodeState> states) {
  Counts c{};
  for (auto s : states) ++c[static_cast<int>(s)];
  return c;
}

double infection_probability(std::size_t infected_neighbours, double beta) {
  if (infected_neighbours == 0) return 0.0;
  return 1.0 - std::pow(1.0 - beta, static_cast<double>(infected_neighbours));
}

namespace {

void check_legal(NodeState s, Model model) {
  if ((s == NodeState::R && model != Model::SIR) || (s == NodeState::D && model != Model::SID))
    throw std::invalid_argument(std::string("state ") + to_char(s) + " is illegal under " +
                                std::string(to_string(model)));
}

}  // namespace

void step_into(const Network& net, const StateVector& current, const EpidemicParams& params,
               Rng& rng, StateVector& next, std::vector<Transition>* events) {
  const auto n = net.node_count();
  if (current.states.size() != n)
    throw std::invalid_argument("state vector length " + std::to_string(current.states.size()) +
                                " differs from node count " + std::to_string(n));
  const auto& cur = current.states;
  next.states.assign(cur.begin(), cur.end());
  next.tick = current.tick + 1;

  const auto change = [&](NodeId v, NodeState to) {
    next.states[v] = to;
    if (events) events->push_back({next.tick, v, cur[v], to});
  };

  for (NodeId v = 0; v < n; ++v) {
    const auto s = cur[v];
    check_legal(s, params.model);
    if (s == NodeState::I) {
      switch (params.model) {
        case Model::SI:
          break;
        case Model::SIS:
          if (rng.bernoulli(params.delta1)) change(v, NodeState::S);
          break;
        case Model::SIR:
          if (rng.bernoulli(params.delta1)) change(v, NodeState::R);
          break;
        case Model::SID: {
          const double u = rng.uniform();
          if (u < params.tau)
            change(v, NodeState::D);
          else if (u < params.tau + params.delta1)
            change(v, NodeState::S);
          break;
        }
      }
    } else if (s == NodeState::D) {
      if (rng.bernoulli(params.gamma)) change(v, NodeState::S);
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    if (cur[v] != NodeState::S) continue;
    std::size_t k = 0;
    for (auto w : net.neighbors(v)) k += cur[w] == NodeState::I;
    if (k == 0) continue;
    if (rng.bernoulli(infection_probability(k, params.beta))) change(v, NodeState::I);
  }
}

StateVector step(const Network& net, const StateVector& sv, const EpidemicParams& params, Rng& rng) {
  params.validate();
  StateVector next;
  step_into(net, sv, params, rng, next, nullptr);
  return next;
}

StateVector seeded_state(const Network& net, std::span<const NodeId> seeds) {
  if (seeds.empty()) throw std::invalid_argument("seed set is empty");
  StateVector sv;
  sv.states.assign(net.node_count(), NodeState::S);
  for (auto s : seeds) {
    if (s >= net.node_count()) throw std::invalid_argument("unknown seed node " + std::to_string(s));
    sv.states[s] = NodeState::I;
  }
  return sv;
}

SimulationTrace run(const Network& net, std::span<const NodeId> seeds, const EpidemicParams& params,
                    std::uint64_t max_ticks, StopRule stop, std::uint64_t rng_seed) {
  params.validate();
  if (max_ticks == 0) throw std::invalid_argument("max_ticks must be positive");
  SimulationTrace trace;
  trace.node_count = net.node_count();
  StateVector cur = seeded_state(net, seeds);
  for (NodeId v = 0; v < cur.states.size(); ++v)
    if (cur.states[v] == NodeState::I) trace.events.push_back({0, v, NodeState::S, NodeState::I});
  trace.counts.push_back(count_states(cur.states));

  Rng rng(rng_seed);
  StateVector next;
  while (cur.tick < max_ticks) {
    if (stop == StopRule::absorb) {
      const auto& c = trace.counts.back();
      if (c[1] == 0 && c[3] == 0) {
        trace.absorbed = true;
        break;
      }
    }
    step_into(net, cur, params, rng, next, &trace.events);
    std::swap(cur, next);
    trace.counts.push_back(count_states(cur.states));
  }
  if (stop == StopRule::absorb && !trace.absorbed) {
    const auto& c = trace.counts.back();
    trace.absorbed = c[1] == 0 && c[3] == 0;
  }
  trace.final_state = std::move(cur);
  return trace;
}

}  // namespace failprop
