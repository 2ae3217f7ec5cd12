#include <doctest.h>

#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "failprop/epidemic.hpp"
#include "failprop/errors.hpp"
#include "failprop/report.hpp"

using namespace failprop;

namespace {

// P(at least one success) by summing the probabilities of all 2^k joint
// outcomes that contain a success.
double enumerate_infection(std::size_t k, double beta) {
  double p = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    double outcome = 1.0;
    for (std::size_t i = 0; i < k; ++i) outcome *= (mask >> i & 1) ? beta : 1.0 - beta;
    if (mask != 0) p += outcome;
  }
  return p;
}

std::vector<std::size_t> bfs_distance(const Network& net, const std::vector<NodeId>& sources) {
  std::vector<std::size_t> dist(net.node_count(), std::numeric_limits<std::size_t>::max());
  std::deque<NodeId> q;
  for (auto s : sources) {
    dist[s] = 0;
    q.push_back(s);
  }
  while (!q.empty()) {
    const auto v = q.front();
    q.pop_front();
    for (auto w : net.neighbors(v))
      if (dist[w] == std::numeric_limits<std::size_t>::max()) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

StateVector all(NodeState s, std::size_t n) { return {std::vector<NodeState>(n, s), 0}; }

}  // namespace

TEST_CASE("infection_probability") {
  CHECK(infection_probability(0, 0.7) == 0.0);
  CHECK(infection_probability(3, 1.0) == 1.0);
  CHECK(infection_probability(2, 0.5) == doctest::Approx(enumerate_infection(2, 0.5)).epsilon(1e-15));
  CHECK(infection_probability(2, 0.5) == 0.75);
  for (std::size_t k = 0; k <= 8; ++k)
    for (double beta : {0.0, 0.05, 0.3, 0.77, 1.0})
      CHECK(std::abs(infection_probability(k, beta) - enumerate_infection(k, beta)) < 1e-12);
  // Monotone in k and beta.
  for (std::size_t k = 0; k < 20; ++k) CHECK(infection_probability(k + 1, 0.2) >= infection_probability(k, 0.2));
  for (double b = 0.0; b < 0.99; b += 0.01) CHECK(infection_probability(4, b + 0.01) >= infection_probability(4, b));
}

TEST_CASE("EpidemicParams::validate") {
  CHECK_NOTHROW(EpidemicParams{Model::SID, 0.4, 0.1, 0.2, 0.05}.validate());
  try {
    EpidemicParams{Model::SI, 1.5, 0, 0, 0}.validate();
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(e.field() == "beta");
  }
  CHECK_THROWS_AS((EpidemicParams{Model::SI, 0.5, 0.1, 0, 0}.validate()), ParamError);
  CHECK_THROWS_AS((EpidemicParams{Model::SIS, 0.5, 0.1, 0.1, 0}.validate()), ParamError);
  CHECK_THROWS_AS((EpidemicParams{Model::SIR, 0.5, 0.1, 0, 0.3}.validate()), ParamError);
  CHECK_THROWS_AS((EpidemicParams{Model::SID, 0.5, 0.6, 0.5, 0}.validate()), ParamError);
  CHECK_THROWS_AS((EpidemicParams{Model::SID, std::nan(""), 0, 0, 0}.validate()), ParamError);
  CHECK_NOTHROW(EpidemicParams{Model::SID, 0.5, 0.5, 0.5, 1.0}.validate());
}

TEST_CASE("step: no spontaneous infection") {
  const auto net = generate_topology(GeneratorSpec::erdos_renyi(30, 0.2), 1);
  Rng rng(5);
  auto sv = all(NodeState::S, 30);
  for (int t = 0; t < 10; ++t) sv = step(net, sv, {Model::SID, 0.9, 0.1, 0.2, 0.3}, rng);
  CHECK(count_states(sv.states) == Counts{30, 0, 0, 0});
  CHECK(sv.tick == 10);
}

TEST_CASE("step: SI at beta=1 advances one hop and new infections do not transmit") {
  const auto path = load_edge_list("0 1\n1 2");
  Rng rng(1);
  StateVector sv{{NodeState::I, NodeState::S, NodeState::S}, 0};
  const auto next = step(path, sv, {Model::SI, 1.0, 0, 0, 0}, rng);
  CHECK(next.states == std::vector<NodeState>{NodeState::I, NodeState::I, NodeState::S});
  CHECK(next.tick == 1);
}

TEST_CASE("step: D and R neighbours never transmit") {
  const auto path = load_edge_list("0 1");
  Rng rng(1);
  const StateVector d{{NodeState::D, NodeState::S}, 0};
  CHECK(step(path, d, {Model::SID, 1.0, 0, 0, 0}, rng).states[1] == NodeState::S);
  const StateVector r{{NodeState::R, NodeState::S}, 0};
  CHECK(step(path, r, {Model::SIR, 1.0, 0, 0, 0}, rng).states[1] == NodeState::S);
}

TEST_CASE("step: SID exit split of an isolated infected node") {
  const Network lone(1, {});
  Rng rng(77);
  const EpidemicParams p{Model::SID, 0.0, 0.2, 0.3, 0.0};
  const StateVector start{{NodeState::I}, 0};
  const int draws = 100000;
  Counts c{};
  for (int i = 0; i < draws; ++i) ++c[static_cast<int>(step(lone, start, p, rng).states[0])];
  CHECK(std::abs(c[3] / double(draws) - 0.30) < 0.01);
  CHECK(std::abs(c[0] / double(draws) - 0.20) < 0.01);
  CHECK(std::abs(c[1] / double(draws) - 0.50) < 0.01);
}

TEST_CASE("step: SIS, SIR and absorbing transitions") {
  const Network lone(1, {});
  Rng rng(3);
  const StateVector infected{{NodeState::I}, 0};
  CHECK(step(lone, infected, {Model::SIS, 0, 1.0, 0, 0}, rng).states[0] == NodeState::S);
  CHECK(step(lone, infected, {Model::SIR, 0, 1.0, 0, 0}, rng).states[0] == NodeState::R);
  CHECK(step(lone, infected, {Model::SI, 0, 0, 0, 0}, rng).states[0] == NodeState::I);
  const StateVector removed{{NodeState::R}, 0};
  CHECK(step(lone, removed, {Model::SIR, 1.0, 1.0, 0, 0}, rng).states[0] == NodeState::R);
  const StateVector disabled{{NodeState::D}, 0};
  CHECK(step(lone, disabled, {Model::SID, 0, 0, 0, 1.0}, rng).states[0] == NodeState::S);
  CHECK(step(lone, disabled, {Model::SID, 0, 0, 0, 0.0}, rng).states[0] == NodeState::D);
}

TEST_CASE("step: errors") {
  const auto net = generate_topology(GeneratorSpec::ring(4), 0);
  Rng rng(1);
  CHECK_THROWS_AS(step(net, all(NodeState::S, 3), {Model::SI, 0.5, 0, 0, 0}, rng), std::invalid_argument);
  CHECK_THROWS_AS(step(net, all(NodeState::D, 4), {Model::SIS, 0.5, 0.1, 0, 0}, rng), std::invalid_argument);
  CHECK_THROWS_AS(step(net, all(NodeState::R, 4), {Model::SID, 0.5, 0.1, 0, 0}, rng), std::invalid_argument);
}

TEST_CASE("run: SI at beta=1 infects along BFS layers") {
  for (std::uint64_t seed : {3u, 8u, 21u}) {
    const auto net = generate_topology(GeneratorSpec::barabasi_albert(40, 2), seed);
    const std::vector<NodeId> seeds{static_cast<NodeId>(seed % 40), 7};
    const auto trace = run(net, seeds, {Model::SI, 1.0, 0, 0, 0}, 60, StopRule::fixed_ticks, seed);
    const auto dist = bfs_distance(net, seeds);
    std::vector<std::uint64_t> first(40, std::numeric_limits<std::uint64_t>::max());
    for (const auto& e : trace.events)
      if (e.to == NodeState::I && first[e.node] == std::numeric_limits<std::uint64_t>::max()) first[e.node] = e.tick;
    for (NodeId v = 0; v < 40; ++v) CHECK(first[v] == dist[v]);
  }
}

TEST_CASE("run: SIS without transmission dies out monotonically") {
  const auto net = generate_topology(GeneratorSpec::erdos_renyi(30, 0.3), 2);
  const std::vector<NodeId> seeds{0, 1, 2, 3, 4, 5};
  const auto trace = run(net, seeds, {Model::SIS, 0.0, 0.2, 0, 0}, 1000, StopRule::absorb, 9);
  CHECK(trace.counts.front()[1] == 6);
  for (std::size_t t = 1; t < trace.counts.size(); ++t) CHECK(trace.counts[t][1] <= trace.counts[t - 1][1]);
  CHECK(trace.counts.back()[1] == 0);
  CHECK(trace.absorbed);
}

TEST_CASE("run: golden SID trace on ring(10)") {
  const auto net = generate_topology(GeneratorSpec::ring(10), 0);
  const std::vector<NodeId> seeds{0};
  const auto trace = run(net, seeds, {Model::SID, 0.4, 0.1, 0.2, 0.05}, 100, StopRule::fixed_ticks, 42);
  std::ostringstream csv;
  report::write_trace_csv(csv, trace);
  std::ifstream golden(FAILPROP_GOLDEN_DIR "/sid_ring10_seed42.csv");
  REQUIRE(golden);
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(csv.str() == expected.str());
}

TEST_CASE("run: determinism and argument errors") {
  const auto net = generate_topology(GeneratorSpec::barabasi_albert(50, 2), 4);
  const std::vector<NodeId> seeds{3};
  const EpidemicParams p{Model::SID, 0.3, 0.1, 0.1, 0.2};
  const auto a = run(net, seeds, p, 200, StopRule::absorb, 11);
  const auto b = run(net, seeds, p, 200, StopRule::absorb, 11);
  CHECK(a.counts == b.counts);
  CHECK(a.events == b.events);
  CHECK(a.final_state.states == b.final_state.states);
  CHECK(a.counts.size() == a.final_state.tick + 1);

  const std::vector<NodeId> none;
  CHECK_THROWS_AS(run(net, none, p, 10, StopRule::absorb, 1), std::invalid_argument);
  CHECK_THROWS_AS(run(net, seeds, p, 0, StopRule::absorb, 1), std::invalid_argument);
  const std::vector<NodeId> bad{50};
  CHECK_THROWS_AS(run(net, bad, p, 10, StopRule::absorb, 1), std::invalid_argument);
}

TEST_CASE("property: compartment conservation and state legality") {
  Rng meta(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 5 + meta.below(40);
    const auto net = generate_topology(GeneratorSpec::erdos_renyi(n, 0.05 + 0.3 * meta.uniform()), meta.below(1000));
    const auto model = static_cast<Model>(meta.below(4));
    EpidemicParams p{model, meta.uniform(), 0, 0, 0};
    if (model != Model::SI) p.delta1 = 0.5 * meta.uniform();
    if (model == Model::SID) {
      p.tau = 0.5 * meta.uniform();
      p.gamma = meta.uniform();
    }
    const std::vector<NodeId> seeds{static_cast<NodeId>(meta.below(n))};
    const auto trace = run(net, seeds, p, 150, StopRule::fixed_ticks, meta.below(1u << 30));
    for (const auto& c : trace.counts) {
      CHECK(c[0] + c[1] + c[2] + c[3] == n);
      if (model != Model::SIR) CHECK(c[2] == 0);
      if (model != Model::SID) CHECK(c[3] == 0);
    }
    CHECK(trace.counts.size() == 151);
  }
}

TEST_CASE("property: infection stays inside the seeds' components") {
  Rng meta(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = generate_topology(GeneratorSpec::erdos_renyi(40, 0.04), meta.below(1000));
    const std::vector<NodeId> seeds{static_cast<NodeId>(meta.below(40))};
    const auto reach = bfs_distance(net, seeds);
    const double beta = trial % 2 ? 1.0 : meta.uniform();
    const auto trace = run(net, seeds, {Model::SI, beta, 0, 0, 0}, 80, StopRule::fixed_ticks, trial);
    std::vector<bool> infected(40, false);
    for (const auto& e : trace.events) infected[e.node] = true;
    for (NodeId v = 0; v < 40; ++v) {
      if (infected[v]) CHECK(reach[v] != std::numeric_limits<std::size_t>::max());
      if (beta == 1.0) CHECK(infected[v] == (reach[v] != std::numeric_limits<std::size_t>::max()));
    }
  }
}
