#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace failprop {

class SectionedText;

using NodeId = std::uint32_t;

enum class NodeRole : std::uint8_t { generic, edge_switch, core_switch, controller };

std::string_view to_string(NodeRole role);
std::optional<NodeRole> parse_role(std::string_view name);

constexpr bool is_switch(NodeRole role) noexcept {
  return role == NodeRole::edge_switch || role == NodeRole::core_switch;
}

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Two-plane network: one undirected adjacency shared by control and data
/// plane, node roles, and per-switch ordered controller preference lists.
///
/// The constructor does not enforce the semantic invariants (no self-loops,
/// no duplicate edges, preference roles); validate() reports those, and the
/// loaders and generators refuse to return a network that violates them.
/// Immutable once built.
class Network {
 public:
  using ControllerPrefs = std::map<NodeId, std::vector<NodeId>>;
  using Aliases = std::map<std::string, NodeId, std::less<>>;

  Network() = default;
  /// Throws TopologyError if any referenced id is >= node_count.
  Network(std::size_t node_count, std::vector<Edge> edges, std::vector<NodeRole> roles = {},
          ControllerPrefs controller_prefs = {}, Aliases aliases = {});

  std::size_t node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const NodeRole> roles() const noexcept { return roles_; }
  NodeRole role(NodeId v) const { return roles_.at(v); }
  const ControllerPrefs& controller_prefs() const noexcept { return prefs_; }
  /// Empty when the switch has no preference list.
  std::span<const NodeId> controller_prefs(NodeId sw) const;
  const Aliases& aliases() const noexcept { return aliases_; }

  /// Sorted ids adjacent to v. Throws std::out_of_range for an unknown id.
  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }

  std::vector<NodeId> nodes_with_role(NodeRole role) const;
  std::vector<NodeId> switches() const;

  /// Resolves a decimal id or an alias.
  std::optional<NodeId> find(std::string_view token) const;
  /// Alias if one exists, else the decimal id.
  std::string name_of(NodeId v) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ && a.roles_ == b.roles_ &&
           a.prefs_ == b.prefs_ && a.aliases_ == b.aliases_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<NodeRole> roles_;
  ControllerPrefs prefs_;
  Aliases aliases_;
  std::vector<std::vector<NodeId>> adjacency_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }
};

/// Reports invariant violations and the warnings "DP disconnected" and
/// "unassigned switch". Switch assignment is only checked when
/// `sdn_scenario` is set; the single-argument form sets it when the network
/// has at least one controller.
ValidationReport validate(const Network& net, bool sdn_scenario);
ValidationReport validate(const Network& net);

/// Parses the edge-list format:
///
///     # comment
///     0 1                 edges, one `u v` pair per line
///     [nodes]
///     8                   optional explicit node count
///     [names]
///     6=A                 optional aliases, usable anywhere an id is
///     [roles]
///     0=edge_switch
///     [controllers]
///     0:A,B               ordered controller preference list of switch 0
///
/// Edge lines may also live under an explicit `[edges]` header. Throws
/// TopologyError carrying the offending line number.
Network load_edge_list(std::string_view text, const std::map<NodeId, NodeRole>& role_overrides = {});
Network load_edge_list_file(const std::string& path);
/// Builds a network from the topology sections of an already-parsed file.
Network network_from_sections(const SectionedText& text,
                              const std::map<NodeId, NodeRole>& role_overrides = {});

/// Inverse of load_edge_list; always writes the `[nodes]` section so
/// isolated trailing nodes survive a round trip.
std::string serialize(const Network& net);

struct GeneratorSpec {
  enum class Kind { erdos_renyi, barabasi_albert, ring, grid };

  Kind kind = Kind::ring;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t m = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  static GeneratorSpec erdos_renyi(std::size_t n, double p) { return {Kind::erdos_renyi, n, p, 0, 0, 0}; }
  static GeneratorSpec barabasi_albert(std::size_t n, std::size_t m) {
    return {Kind::barabasi_albert, n, 0.0, m, 0, 0};
  }
  static GeneratorSpec ring(std::size_t n) { return {Kind::ring, n, 0.0, 0, 0, 0}; }
  static GeneratorSpec grid(std::size_t rows, std::size_t cols) {
    return {Kind::grid, rows * cols, 0.0, 0, rows, cols};
  }

  /// Accepts `er N P`, `ba N M`, `ring N`, `grid R C` (long kind names too).
  static GeneratorSpec parse(std::string_view text);
  static GeneratorSpec from_tokens(std::span<const std::string> tokens);
  std::string to_string() const;
};

/// Deterministic for fixed (spec, seed). All roles generic. Throws
/// ParamError on out-of-range parameters.
Network generate_topology(const GeneratorSpec& spec, std::uint64_t seed);

/// Sizes of the connected components of the subgraph induced by `keep`
/// (all nodes when empty), largest first.
std::vector<std::size_t> component_sizes(const Network& net, const std::vector<bool>& keep = {});

}  // namespace failprop
