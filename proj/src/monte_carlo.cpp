#include "failprop/epidemic.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace failprop {

namespace {

struct Replica {
  std::vector<Counts> counts;
  std::uint32_t outbreak = 0;
};

Replica run_replica(const Network& net, std::span<const NodeId> seeds, const EpidemicParams& params,
                    std::uint64_t max_ticks, StopRule stop, std::uint64_t seed) {
  auto trace = run(net, seeds, params, max_ticks, stop, seed);
  std::vector<bool> ever(net.node_count(), false);
  std::uint32_t outbreak = 0;
  for (const auto& e : trace.events) {
    if (e.to == NodeState::I && !ever[e.node]) {
      ever[e.node] = true;
      ++outbreak;
    }
  }
  return {std::move(trace.counts), outbreak};
}

/// Per-tick means from integer sums, plus outbreak scalars. Shared by both
/// paths so they agree bit for bit.
void finalize(MonteCarloResult& r, const std::vector<std::array<std::uint64_t, 4>>& sums) {
  const auto n = static_cast<double>(r.n_runs);
  r.mean.resize(sums.size());
  for (std::size_t t = 0; t < sums.size(); ++t)
    for (int s = 0; s < 4; ++s) r.mean[t][s] = static_cast<double>(sums[t][s]) / n;

  const auto nodes = static_cast<double>(r.node_count);
  std::uint64_t total = 0;
  for (auto c : r.outbreak_counts) total += c;
  r.mean_outbreak = static_cast<double>(total) / (n * nodes);
  if (r.n_runs > 1) {
    double ss = 0.0;
    for (auto c : r.outbreak_counts) {
      const double d = static_cast<double>(c) / nodes - r.mean_outbreak;
      ss += d * d;
    }
    r.stderr_outbreak = std::sqrt(ss / (n - 1.0) / n);
  } else {
    r.stderr_outbreak = 0.0;
  }
}

void check_runs(std::size_t n_runs) {
  if (n_runs == 0) throw std::invalid_argument("n_runs must be positive");
}

}  // namespace

MonteCarloResult monte_carlo(const Network& net, std::span<const NodeId> seeds,
                             const EpidemicParams& params, std::uint64_t max_ticks, StopRule stop,
                             const MonteCarloOptions& options) {
  check_runs(options.n_runs);
  params.validate();
  // Surface argument errors on the calling thread rather than inside the
  // parallel region.
  (void)seeded_state(net, seeds);
  if (max_ticks == 0) throw std::invalid_argument("max_ticks must be positive");

  const auto n_runs = static_cast<std::int64_t>(options.n_runs);
  std::vector<Replica> replicas(options.n_runs);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n_runs; ++i) {
    replicas[i] = run_replica(net, seeds, params, max_ticks, stop,
                              derive_seed(options.base_seed, static_cast<std::uint64_t>(i)));
  }

  MonteCarloResult r;
  r.node_count = net.node_count();
  r.n_runs = options.n_runs;
  r.base_seed = options.base_seed;
  std::size_t length = 0;
  for (const auto& rep : replicas) length = std::max(length, rep.counts.size());

  std::vector<std::array<std::uint64_t, 4>> sums(length, {0, 0, 0, 0});
  r.min.assign(length, {UINT32_MAX, UINT32_MAX, UINT32_MAX, UINT32_MAX});
  r.max.assign(length, {0, 0, 0, 0});
  for (const auto& rep : replicas) {
    for (std::size_t t = 0; t < length; ++t) {
      const auto& c = rep.counts[std::min(t, rep.counts.size() - 1)];
      for (int s = 0; s < 4; ++s) {
        sums[t][s] += c[s];
        r.min[t][s] = std::min(r.min[t][s], c[s]);
        r.max[t][s] = std::max(r.max[t][s], c[s]);
      }
    }
    r.outbreak_counts.push_back(rep.outbreak);
    r.final_counts.push_back(rep.counts.back());
  }
  finalize(r, sums);
  return r;
}

MonteCarloResult monte_carlo_serial(const Network& net, std::span<const NodeId> seeds,
                                    const EpidemicParams& params, std::uint64_t max_ticks,
                                    StopRule stop, std::size_t n_runs, std::uint64_t base_seed) {
  check_runs(n_runs);
  MonteCarloResult r;
  r.node_count = net.node_count();
  r.n_runs = n_runs;
  r.base_seed = base_seed;
  std::vector<std::array<std::uint64_t, 4>> sums;

  for (std::size_t i = 0; i < n_runs; ++i) {
    auto rep = run_replica(net, seeds, params, max_ticks, stop, derive_seed(base_seed, i));
    // A longer replica extends the horizon: earlier replicas contribute
    // their final counts to the new ticks.
    while (sums.size() < rep.counts.size()) {
      std::array<std::uint64_t, 4> sum{0, 0, 0, 0};
      Counts lo{UINT32_MAX, UINT32_MAX, UINT32_MAX, UINT32_MAX};
      Counts hi{0, 0, 0, 0};
      for (const auto& fin : r.final_counts)
        for (int s = 0; s < 4; ++s) {
          sum[s] += fin[s];
          lo[s] = std::min(lo[s], fin[s]);
          hi[s] = std::max(hi[s], fin[s]);
        }
      sums.push_back(sum);
      r.min.push_back(lo);
      r.max.push_back(hi);
    }
    for (std::size_t t = 0; t < sums.size(); ++t) {
      const auto& c = rep.counts[std::min(t, rep.counts.size() - 1)];
      for (int s = 0; s < 4; ++s) {
        sums[t][s] += c[s];
        r.min[t][s] = std::min(r.min[t][s], c[s]);
        r.max[t][s] = std::max(r.max[t][s], c[s]);
      }
    }
    r.outbreak_counts.push_back(rep.outbreak);
    r.final_counts.push_back(rep.counts.back());
  }
  finalize(r, sums);
  return r;
}

}  // namespace failprop
