#include <doctest.h>

#include <cmath>
#include <sstream>

#include "failprop/config.hpp"
#include "failprop/errors.hpp"
#include "test_util.hpp"

using namespace failprop;
using failprop::test::TempDir;
using failprop::test::spit;

namespace {

ExperimentConfig parse(const std::string& text, const ConfigOverrides& o = {}) {
  return load_config(text, std::filesystem::current_path(), o);
}

// Resolved text minus its leading comment block, which records provenance only.
std::string body(const std::string& resolved) {
  std::string out;
  std::istringstream in(resolved);
  for (std::string line; std::getline(in, line);)
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

std::string field_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ParamError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("presets load and resolve to themselves") {
  for (auto name : preset_names()) {
    CAPTURE(name);
    const auto cfg = parse(std::string(*preset_text(name)));
    const auto resolved = resolved_config_text(cfg);
    const auto again = parse(resolved);
    CHECK(again.network == cfg.network);
    CHECK(body(resolved_config_text(again)) == body(resolved));
  }
  CHECK(parse(std::string(*preset_text("controller-failover"))).kind == ExperimentKind::vertical);
  CHECK(parse(std::string(*preset_text("line-overload"))).kind == ExperimentKind::horizontal);
  CHECK(parse(std::string(*preset_text("mesh-sid"))).kind == ExperimentKind::epidemic);
  CHECK_FALSE(preset_text("nope").has_value());
}

TEST_CASE("config: defaults and explicit seed") {
  const auto cfg = parse("[topology]\ngenerate=ring 10\n[model]\nmodel=SI\nbeta=0.5\n");
  CHECK(cfg.run.rng_seed == 0);
  CHECK(cfg.run.n_runs == 1);
  CHECK(cfg.run.stop == StopRule::absorb);
  CHECK(cfg.seeds == std::vector<NodeId>{0});
  CHECK(resolved_config_text(cfg).find("rng_seed=0\n") != std::string::npos);
  const auto overridden = parse("[topology]\ngenerate=ring 10\n[model]\nmodel=SI\n[run]\nrng_seed=4\n", {9, {}, {}});
  CHECK(overridden.run.rng_seed == 9);
}

TEST_CASE("config: generator seed follows the run seed unless pinned") {
  const std::string base = "[topology]\ngenerate=er 30 0.2\n[model]\nmodel=SI\n";
  CHECK(parse(base + "[run]\nrng_seed=1\n").network != parse(base + "[run]\nrng_seed=2\n").network);
  const std::string pinned = "[topology]\ngenerate=er 30 0.2\nseed=5\n[model]\nmodel=SI\n";
  CHECK(parse(pinned + "[run]\nrng_seed=1\n").network == parse(pinned + "[run]\nrng_seed=2\n").network);
}

TEST_CASE("config: invalid fields are named") {
  const std::string topo = "[topology]\ngenerate=ring 10\n";
  CHECK(field_of(topo + "[model]\nmodel=SI\nbeta=1.5\n") == "beta");
  CHECK(field_of(topo + "[model]\nmodel=SID\nbeta=0.1\ntau=0.7\ndelta1=0.5\n") == "tau");
  CHECK(field_of(topo + "[model]\nmodel=SIS\ngamma=0.1\n") == "gamma");
  CHECK(field_of(topo + "[model]\nmodel=XYZ\n") == "model");
  CHECK(field_of(topo + "[model]\nmodel=SI\nseeds=42\n") == "seeds");
  CHECK(field_of(topo + "[model]\nmodel=SI\n[run]\nmax_ticks=0\n") == "max_ticks");
  CHECK(field_of(topo + "[model]\nmodel=SI\n[sweep]\ngrid=\n") == "grid");
  CHECK(field_of(topo + "[model]\nmodel=SI\n[sweep]\ngrid=0.3,0.2\n") == "grid");
  CHECK(field_of("[topology]\ngenerate=er 10 2\n[model]\nmodel=SI\n") == "p");
}

TEST_CASE("config: structural errors") {
  const std::string topo = "[topology]\ngenerate=ring 10\n";
  CHECK_THROWS_AS(parse(topo), ConfigError);
  CHECK_THROWS_AS(parse(topo + "[model]\nmodel=SI\n[capacity]\n1=3\n"), ConfigError);
  CHECK_THROWS_AS(parse(topo + "[model]\nmodel=SI\nbogus=1\n"), ConfigError);
  CHECK_THROWS_AS(parse(topo + "[modle]\nmodel=SI\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\nmodel=SI\n"), ConfigError);
  CHECK_THROWS_AS(parse(topo + "[edges]\n0 1\n[model]\nmodel=SI\n"), ConfigError);
  CHECK_THROWS_AS(parse("loose line\n" + topo + "[model]\nmodel=SI\n"), ConfigError);
  CHECK_THROWS_AS(parse(topo + "[model]\nmodel=SI\n[run]\nstop=never\n"), ParamError);
}

TEST_CASE("config: topology errors surface as TopologyError") {
  CHECK_THROWS_AS(parse("[edges]\n0 0\n[model]\nmodel=SI\n"), TopologyError);
  CHECK_THROWS_AS(parse("[topology]\nfile=/nonexistent/net.txt\n[model]\nmodel=SI\n"), TopologyError);
}

TEST_CASE("config: scenario kind resolution") {
  const std::string line = "[edges]\n0 1\n1 2\n[roles]\n0=edge_switch\n1=core_switch\n2=edge_switch\n";
  const auto h = parse(line + "[capacity]\n1=5\n[injection]\n0,2,9\n");
  CHECK(h.kind == ExperimentKind::horizontal);
  REQUIRE(h.horizontal);
  CHECK(h.horizontal->injection == Demand{0, 2, 9});
  CHECK(h.horizontal->capacity(1) == 5.0);
  CHECK(std::isinf(h.horizontal->capacity(0)));

  CHECK_THROWS_AS(parse(line + "[capacity]\n1=5\n"), ConfigError);  // ambiguous
  CHECK(parse(line + "[capacity]\n1=5\n", {{}, ExperimentKind::horizontal, {}}).kind == ExperimentKind::horizontal);
  CHECK_THROWS_AS(parse(line + "[scenario]\nkind=vertical\n[demand]\n0,2,1\n"), ConfigError);
  CHECK_THROWS_AS(parse(line + "[injection]\n0,2,1\n", {{}, ExperimentKind::vertical, {}}), ConfigError);
  // Vertical scenario on a topology without controllers.
  CHECK_THROWS_AS(parse(line + "[scenario]\nkind=vertical\n[rate]\n0=1\n"), ParamError);
  const auto misroute = parse(line + "[scenario]\ntie_break=largest\n[injection]\n0,2,1\n");
  CHECK(misroute.horizontal->tie_break == TieBreak::largest);
}

TEST_CASE("config: files resolve relative to the config") {
  TempDir dir("config");
  spit(dir / "net.txt", "0 1\n1 2\n[names]\n3=C\n[roles]\n0=core_switch\n1=core_switch\n2=core_switch\nC=controller\n"
                        "[controllers]\n0:C\n1:C\n2:C\n");
  spit(dir / "attack.scn", "[capacity]\nC=25\n[rate]\n0=10\n1=10\n2=10\n[attack]\n1=1\n");
  spit(dir / "exp.cfg", "[topology]\nfile=net.txt\n[scenario]\nfile=attack.scn\n[output]\ndir=out\n");
  const auto cfg = load_config_file(dir / "exp.cfg");
  CHECK(cfg.kind == ExperimentKind::vertical);
  CHECK(cfg.vertical->attack->target == 1);
  CHECK(cfg.vertical->capacity(3) == 25.0);
  CHECK(cfg.output_dir == dir / "out");
  CHECK(cfg.topology_origin == "file net.txt");
  const auto again = parse(resolved_config_text(cfg));
  CHECK(again.network == cfg.network);
  CHECK(body(resolved_config_text(again)) == body(resolved_config_text(cfg)));
}
