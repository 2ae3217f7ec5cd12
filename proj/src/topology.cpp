#include "failprop/topology.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "failprop/errors.hpp"
#include "failprop/rng.hpp"
#include "failprop/sectioned_text.hpp"

namespace failprop {

namespace {

constexpr std::string_view kRoleNames[] = {"generic", "edge_switch", "core_switch", "controller"};

}  // namespace

std::string_view to_string(NodeRole role) { return kRoleNames[static_cast<int>(role)]; }

std::optional<NodeRole> parse_role(std::string_view name) {
  for (int i = 0; i < 4; ++i)
    if (kRoleNames[i] == name) return static_cast<NodeRole>(i);
  return std::nullopt;
}

Network::Network(std::size_t node_count, std::vector<Edge> edges, std::vector<NodeRole> roles,
                 ControllerPrefs controller_prefs, Aliases aliases)
    : node_count_(node_count),
      edges_(std::move(edges)),
      roles_(std::move(roles)),
      prefs_(std::move(controller_prefs)),
      aliases_(std::move(aliases)) {
  if (roles_.empty()) roles_.assign(node_count_, NodeRole::generic);
  if (roles_.size() != node_count_) throw TopologyError("role table size differs from node count");
  const auto check = [&](NodeId id) {
    if (id >= node_count_)
      throw TopologyError("node id " + std::to_string(id) + " out of range (node count " +
                          std::to_string(node_count_) + ")");
  };
  adjacency_.resize(node_count_);
  for (const auto& e : edges_) {
    check(e.u);
    check(e.v);
    if (e.u == e.v) continue;
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  for (const auto& [sw, ctrls] : prefs_) {
    check(sw);
    for (auto c : ctrls) check(c);
  }
  for (const auto& [name, id] : aliases_) check(id);
}

std::span<const NodeId> Network::controller_prefs(NodeId sw) const {
  const auto it = prefs_.find(sw);
  if (it == prefs_.end()) return {};
  return it->second;
}

std::span<const NodeId> Network::neighbors(NodeId v) const {
  if (v >= node_count_) throw std::out_of_range("unknown node id " + std::to_string(v));
  return adjacency_[v];
}

std::vector<NodeId> Network::nodes_with_role(NodeRole role) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count_; ++v)
    if (roles_[v] == role) out.push_back(v);
  return out;
}

std::vector<NodeId> Network::switches() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count_; ++v)
    if (is_switch(roles_[v])) out.push_back(v);
  return out;
}

std::optional<NodeId> Network::find(std::string_view token) const {
  token = trim(token);
  if (const auto it = aliases_.find(token); it != aliases_.end()) return it->second;
  const auto id = parse_int(token);
  if (!id || *id < 0 || static_cast<std::size_t>(*id) >= node_count_) return std::nullopt;
  return static_cast<NodeId>(*id);
}

std::string Network::name_of(NodeId v) const {
  for (const auto& [name, id] : aliases_)
    if (id == v) return name;
  return std::to_string(v);
}

std::vector<std::size_t> component_sizes(const Network& net, const std::vector<bool>& keep) {
  const auto n = net.node_count();
  const auto kept = [&](NodeId v) { return keep.empty() || keep[v]; };
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> sizes;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s] || !kept(s)) continue;
    std::size_t size = 0;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      ++size;
      for (auto w : net.neighbors(v)) {
        if (!seen[w] && kept(w)) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(size);
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

ValidationReport validate(const Network& net) {
  return validate(net, !net.nodes_with_role(NodeRole::controller).empty());
}

ValidationReport validate(const Network& net, bool sdn_scenario) {
  ValidationReport report;
  if (net.node_count() == 0) report.violations.emplace_back("network has no nodes");

  std::set<Edge> seen;
  for (const auto& e : net.edges()) {
    if (e.u == e.v) {
      report.violations.push_back("self-loop at node " + std::to_string(e.u));
      continue;
    }
    const Edge key{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!seen.insert(key).second)
      report.violations.push_back("duplicate edge " + std::to_string(key.u) + " " +
                                  std::to_string(key.v));
  }

  for (const auto& [sw, ctrls] : net.controller_prefs()) {
    if (!is_switch(net.role(sw)))
      report.violations.push_back("controller preference key " + net.name_of(sw) +
                                  " is not a switch");
    std::set<NodeId> uniq;
    for (auto c : ctrls) {
      if (net.role(c) != NodeRole::controller)
        report.violations.push_back("preference list of " + net.name_of(sw) + " names " +
                                    net.name_of(c) + ", which is not a controller");
      if (!uniq.insert(c).second)
        report.violations.push_back("preference list of " + net.name_of(sw) + " repeats " +
                                    net.name_of(c));
    }
  }

  // Data plane: everything but controllers.
  std::vector<bool> dp(net.node_count());
  bool any_dp = false;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    dp[v] = net.role(v) != NodeRole::controller;
    any_dp = any_dp || dp[v];
  }
  if (any_dp) {
    const auto sizes = component_sizes(net, dp);
    if (sizes.size() > 1)
      report.warnings.push_back("DP disconnected: " + std::to_string(sizes.size()) +
                                " components");
  }

  if (sdn_scenario) {
    for (auto sw : net.switches())
      if (net.controller_prefs(sw).empty())
        report.warnings.push_back("unassigned switch " + net.name_of(sw));
  }
  return report;
}

namespace {

NodeId parse_node_token(std::string_view token, const Network::Aliases& aliases,
                        std::size_t line) {
  token = trim(token);
  if (const auto it = aliases.find(token); it != aliases.end()) return it->second;
  const auto id = parse_int(token);
  if (!id) throw TopologyError("unknown node '" + std::string(token) + "'", line);
  if (*id < 0 || *id > static_cast<long long>(UINT32_MAX - 1))
    throw TopologyError("node id out of range: " + std::string(token), line);
  return static_cast<NodeId>(*id);
}

std::vector<TextLine> edge_lines(const SectionedText& text) {
  auto lines = text.lines("");
  const auto explicit_edges = text.lines("edges");
  lines.insert(lines.end(), explicit_edges.begin(), explicit_edges.end());
  return lines;
}

}  // namespace

Network network_from_sections(const SectionedText& text,
                              const std::map<NodeId, NodeRole>& role_overrides) {
  Network::Aliases aliases;
  std::set<NodeId> aliased;
  for (const auto& line : text.lines("names")) {
    const auto kv = split_key_value(line.text);
    if (!kv) throw TopologyError("expected id=name", line.number);
    const auto id = parse_int(kv->first);
    if (!id || *id < 0) throw TopologyError("bad node id '" + kv->first + "'", line.number);
    if (kv->second.empty() || parse_int(kv->second))
      throw TopologyError("alias must be a non-numeric name", line.number);
    if (!aliases.emplace(kv->second, static_cast<NodeId>(*id)).second)
      throw TopologyError("duplicate alias '" + kv->second + "'", line.number);
    if (!aliased.insert(static_cast<NodeId>(*id)).second)
      throw TopologyError("node " + kv->first + " already has an alias", line.number);
  }

  std::size_t inferred = 0;
  const auto note = [&](NodeId v) { inferred = std::max<std::size_t>(inferred, v + 1); };
  for (const auto& [name, id] : aliases) note(id);

  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (const auto& line : edge_lines(text)) {
    const auto tokens = split_ws(line.text);
    if (tokens.size() != 2) throw TopologyError("expected 'u v'", line.number);
    const Edge e{parse_node_token(tokens[0], aliases, line.number),
                 parse_node_token(tokens[1], aliases, line.number)};
    if (e.u == e.v) throw TopologyError("self-loop at node " + tokens[0], line.number);
    if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second)
      throw TopologyError("duplicate edge " + tokens[0] + " " + tokens[1], line.number);
    note(e.u);
    note(e.v);
    edges.push_back(e);
  }

  Network::ControllerPrefs prefs;
  for (const auto& line : text.lines("controllers")) {
    const auto colon = line.text.find(':');
    if (colon == std::string::npos) throw TopologyError("expected 'switch:ctrl,...'", line.number);
    const auto sw = parse_node_token(std::string_view(line.text).substr(0, colon), aliases,
                                     line.number);
    std::vector<NodeId> ctrls;
    const auto rest = trim(std::string_view(line.text).substr(colon + 1));
    if (!rest.empty())
      for (const auto& tok : split(rest, ',')) ctrls.push_back(parse_node_token(tok, aliases, line.number));
    if (!prefs.emplace(sw, std::move(ctrls)).second)
      throw TopologyError("duplicate preference list for switch", line.number);
    note(sw);
    for (auto c : prefs[sw]) note(c);
  }

  std::size_t node_count = inferred;
  if (const auto lines = text.lines("nodes"); !lines.empty()) {
    if (lines.size() != 1) throw TopologyError("[nodes] takes a single count", lines[1].number);
    const auto count = parse_int(lines[0].text);
    if (!count || *count <= 0) throw TopologyError("bad node count", lines[0].number);
    if (static_cast<std::size_t>(*count) < inferred)
      throw TopologyError("node count " + lines[0].text + " is smaller than highest id + 1",
                          lines[0].number);
    node_count = static_cast<std::size_t>(*count);
  }
  if (node_count == 0) throw TopologyError("network has no nodes");

  std::vector<NodeRole> roles(node_count, NodeRole::generic);
  std::set<NodeId> role_set;
  for (const auto& line : text.lines("roles")) {
    const auto kv = split_key_value(line.text);
    if (!kv) throw TopologyError("expected id=role", line.number);
    const auto id = parse_node_token(kv->first, aliases, line.number);
    if (id >= node_count) throw TopologyError("dangling role id " + kv->first, line.number);
    const auto role = parse_role(kv->second);
    if (!role) throw TopologyError("unknown role '" + kv->second + "'", line.number);
    if (!role_set.insert(id).second) throw TopologyError("node " + kv->first + " has two roles", line.number);
    roles[id] = *role;
  }
  for (const auto& [id, role] : role_overrides) {
    if (id >= node_count) throw TopologyError("dangling role id " + std::to_string(id));
    roles[id] = role;
  }

  Network net(node_count, std::move(edges), std::move(roles), std::move(prefs), std::move(aliases));
  const auto report = validate(net, false);
  if (!report.ok()) throw TopologyError(report.violations.front());
  return net;
}

Network load_edge_list(std::string_view text, const std::map<NodeId, NodeRole>& role_overrides) {
  const auto parsed = SectionedText::parse(text);
  for (const auto& s : parsed.sections()) {
    static const std::set<std::string, std::less<>> known = {"", "edges", "nodes", "names", "roles",
                                                             "controllers"};
    if (!known.contains(s.name))
      throw TopologyError("unknown section [" + s.name + "]", s.header_line);
  }
  return network_from_sections(parsed, role_overrides);
}

Network load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str());
}

std::string serialize(const Network& net) {
  std::ostringstream out;
  for (const auto& e : net.edges()) out << e.u << ' ' << e.v << '\n';
  out << "[nodes]\n" << net.node_count() << '\n';
  if (!net.aliases().empty()) {
    std::map<NodeId, std::string> by_id;
    for (const auto& [name, id] : net.aliases()) by_id[id] = name;
    out << "[names]\n";
    for (const auto& [id, name] : by_id) out << id << '=' << name << '\n';
  }
  bool any_role = false;
  for (auto r : net.roles()) any_role = any_role || r != NodeRole::generic;
  if (any_role) {
    out << "[roles]\n";
    for (NodeId v = 0; v < net.node_count(); ++v)
      if (net.role(v) != NodeRole::generic) out << v << '=' << to_string(net.role(v)) << '\n';
  }
  if (!net.controller_prefs().empty()) {
    out << "[controllers]\n";
    for (const auto& [sw, ctrls] : net.controller_prefs()) {
      out << sw << ':';
      for (std::size_t i = 0; i < ctrls.size(); ++i) out << (i ? "," : "") << ctrls[i];
      out << '\n';
    }
  }
  return out.str();
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  const auto tokens = split_ws(text);
  return from_tokens(tokens);
}

GeneratorSpec GeneratorSpec::from_tokens(std::span<const std::string> tokens) {
  if (tokens.empty()) throw ParamError("generator", "empty generator spec");
  const auto& kind = tokens[0];
  const auto want = [&](std::size_t count) {
    if (tokens.size() != count + 1)
      throw ParamError("generator", kind + " takes " + std::to_string(count) + " parameter(s)");
  };
  const auto count_arg = [&](std::size_t i, const char* field) -> std::size_t {
    const auto v = parse_int(tokens[i]);
    if (!v || *v < 0) throw ParamError(field, "expected a nonnegative integer, got '" + tokens[i] + "'");
    return static_cast<std::size_t>(*v);
  };
  if (kind == "er" || kind == "erdos_renyi") {
    want(2);
    const auto p = parse_double(tokens[2]);
    if (!p) throw ParamError("p", "expected a number, got '" + tokens[2] + "'");
    return erdos_renyi(count_arg(1, "n"), *p);
  }
  if (kind == "ba" || kind == "barabasi_albert") {
    want(2);
    return barabasi_albert(count_arg(1, "n"), count_arg(2, "m"));
  }
  if (kind == "ring") {
    want(1);
    return ring(count_arg(1, "n"));
  }
  if (kind == "grid") {
    want(2);
    return grid(count_arg(1, "rows"), count_arg(2, "cols"));
  }
  throw ParamError("generator", "unknown generator kind '" + kind + "'");
}

std::string GeneratorSpec::to_string() const {
  switch (kind) {
    case Kind::erdos_renyi:
      return "er " + std::to_string(n) + " " + format_double(p);
    case Kind::barabasi_albert:
      return "ba " + std::to_string(n) + " " + std::to_string(m);
    case Kind::ring:
      return "ring " + std::to_string(n);
    case Kind::grid:
      return "grid " + std::to_string(rows) + " " + std::to_string(cols);
  }
  return {};
}

Network generate_topology(const GeneratorSpec& spec, std::uint64_t seed) {
  using Kind = GeneratorSpec::Kind;
  std::vector<Edge> edges;
  std::size_t n = spec.n;
  Rng rng(seed);

  switch (spec.kind) {
    case Kind::erdos_renyi: {
      if (n < 2) throw ParamError("n", "must be at least 2");
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ParamError("p", "must lie in [0, 1]");
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
          if (rng.bernoulli(spec.p)) edges.push_back({i, j});
      break;
    }
    case Kind::barabasi_albert: {
      if (n < 2) throw ParamError("n", "must be at least 2");
      if (spec.m < 1 || spec.m >= n) throw ParamError("m", "must satisfy 1 <= m < n");
      const auto m = static_cast<NodeId>(spec.m);
      // Seed clique on m+1 nodes, then preferential attachment through the
      // endpoint pool (each node appears once per incident edge).
      std::vector<NodeId> pool;
      for (NodeId i = 0; i <= m; ++i)
        for (NodeId j = i + 1; j <= m; ++j) {
          edges.push_back({i, j});
          pool.push_back(i);
          pool.push_back(j);
        }
      std::vector<NodeId> targets;
      for (NodeId v = m + 1; v < n; ++v) {
        targets.clear();
        while (targets.size() < m) {
          const auto t = pool[rng.below(pool.size())];
          if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        std::sort(targets.begin(), targets.end());
        for (auto t : targets) {
          edges.push_back({t, v});
          pool.push_back(t);
          pool.push_back(v);
        }
      }
      break;
    }
    case Kind::ring: {
      if (n < 2) throw ParamError("n", "must be at least 2");
      if (n == 2) {
        edges.push_back({0, 1});
        break;
      }
      for (NodeId i = 0; i < n; ++i) {
        const NodeId j = static_cast<NodeId>((i + 1) % n);
        edges.push_back({std::min(i, j), std::max(i, j)});
      }
      break;
    }
    case Kind::grid: {
      if (spec.rows < 1 || spec.cols < 1 || spec.rows * spec.cols < 2)
        throw ParamError("grid", "needs rows, cols >= 1 and at least 2 nodes");
      n = spec.rows * spec.cols;
      for (std::size_t r = 0; r < spec.rows; ++r)
        for (std::size_t c = 0; c < spec.cols; ++c) {
          const auto v = static_cast<NodeId>(r * spec.cols + c);
          if (c + 1 < spec.cols) edges.push_back({v, v + 1});
          if (r + 1 < spec.rows) edges.push_back({v, static_cast<NodeId>(v + spec.cols)});
        }
      break;
    }
  }
  return Network(n, std::move(edges));
}

}  // namespace failprop
