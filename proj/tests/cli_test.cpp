#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "failprop/cli.hpp"
#include "failprop/sectioned_text.hpp"
#include "failprop/topology.hpp"
#include "test_util.hpp"

using namespace failprop;
using failprop::test::TempDir;
using failprop::test::slurp;
using failprop::test::spit;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "failprop");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return rows;
}

const char* kSiRing =
    "[topology]\ngenerate=ring 10\n[model]\nmodel=SI\nbeta=0.5\nseeds=0\n[run]\nmax_ticks=50\nrng_seed=3\n";

const char* kSidEr =
    "[topology]\ngenerate=er 40 0.1\n[model]\nmodel=SID\nbeta=0.3\ndelta1=0.1\ntau=0.2\ngamma=0.1\nseeds=0,1\n"
    "[run]\nmax_ticks=80\nn_runs=24\nrng_seed=11\nstop=fixed\n";

}  // namespace

TEST_CASE("cli: epidemic run writes consistent trace") {
  TempDir dir("cli");
  spit(dir / "si.cfg", kSiRing);
  const auto r = invoke({"epidemic", "--config", (dir / "si.cfg").string(), "--out", (dir / "o").string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("epidemic SI") != std::string::npos);
  const auto rows = csv_rows(slurp(dir / "o" / "trace.csv"));
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == "tick,S,I,R,D");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ',');
    REQUIRE(f.size() == 5);
    CHECK(*parse_int(f[1]) + *parse_int(f[2]) + *parse_int(f[3]) + *parse_int(f[4]) == 10);
  }
  CHECK(std::filesystem::exists(dir / "o" / "events.csv"));
  CHECK(std::filesystem::exists(dir / "o" / "resolved-config.txt"));
  const auto summary = nlohmann::json::parse(slurp(dir / "o" / "summary.json"));
  CHECK(summary["node_count"] == 10);
}

TEST_CASE("cli: invalid parameter exits 2 naming the field") {
  const auto r = invoke({"epidemic", "--config", std::string(FAILPROP_CONFIG_DIR) + "/bad_beta.cfg"});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("beta") != std::string::npos);
  CHECK(invoke({"epidemic", "--config", "/nonexistent.cfg"}).code == cli::kConfigError);
  CHECK(invoke({"epidemic", "--preset", "nope"}).code == cli::kConfigError);
  CHECK(invoke({"epidemic"}).code == cli::kConfigError);
  CHECK(invoke({"frobnicate"}).code == cli::kConfigError);
}

TEST_CASE("cli: reruns are byte-identical across thread counts") {
  TempDir dir("cli");
  spit(dir / "sid.cfg", kSidEr);
  const auto cfg = (dir / "sid.cfg").string();
  REQUIRE(invoke({"epidemic", "-c", cfg, "-o", (dir / "a").string(), "--threads", "1"}).code == 0);
  REQUIRE(invoke({"epidemic", "-c", cfg, "-o", (dir / "b").string(), "--threads", "4"}).code == 0);
  for (auto f : {"trace.csv", "events.csv", "summary.json", "resolved-config.txt"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  // --seed changes the run.
  REQUIRE(invoke({"epidemic", "-c", cfg, "-o", (dir / "c").string(), "--seed", "12"}).code == 0);
  CHECK(slurp(dir / "a" / "events.csv") != slurp(dir / "c" / "events.csv"));

  // Re-running from the resolved config reproduces the outputs.
  REQUIRE(invoke({"epidemic", "-c", (dir / "a" / "resolved-config.txt").string(), "-o", (dir / "d").string()})
              .code == 0);
  for (auto f : {"trace.csv", "events.csv", "summary.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "d" / f));
  }
}

TEST_CASE("cli: vertical cascade preset") {
  TempDir dir("cli");
  const auto r = invoke({"cascade", "--preset", "controller-failover", "-o", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(s["kind"] == "vertical");
  CHECK(s["failed_controllers"].size() == 2);
  CHECK(s["live_controllers"].empty());
  CHECK(s["orphaned_switches"].size() == 6);
  CHECK(s["rounds"] == 3);
  CHECK(csv_rows(slurp(dir / "trace.csv"))[0] == "round,controller,load,capacity,status");
}

TEST_CASE("cli: vertical scenario without controllers exits 2") {
  TempDir dir("cli");
  spit(dir / "v.cfg",
       "[edges]\n0 1\n1 2\n[roles]\n0=core_switch\n1=core_switch\n2=core_switch\n"
       "[scenario]\nkind=vertical\n[rate]\n0=1\n");
  const auto r = invoke({"cascade", "-c", (dir / "v.cfg").string(), "-o", (dir / "o").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK_FALSE(std::filesystem::exists(dir / "o" / "summary.json"));
}

TEST_CASE("cli: horizontal cascade presets") {
  TempDir dir("cli");
  REQUIRE(invoke({"cascade", "--preset", "line-overload", "-o", (dir / "line").string()}).code == 0);
  const auto line = nlohmann::json::parse(slurp(dir / "line" / "summary.json"));
  CHECK(line["failed_count"] == 3);
  CHECK(line["rounds"] == 2);

  REQUIRE(invoke({"cascade", "--preset", "parallel-reroute", "-o", (dir / "pp").string()}).code == 0);
  const auto pp = nlohmann::json::parse(slurp(dir / "pp" / "summary.json"));
  CHECK(pp["failed_count"] == 4);
  CHECK(pp["rounds"] == 3);
  const auto dropped = csv_rows(slurp(dir / "pp" / "dropped.csv"));
  REQUIRE(dropped.size() == 2);
  CHECK(dropped[1] == "3,injection,0,5,15");
}

TEST_CASE("cli: sweep") {
  TempDir dir("cli");
  const std::string body =
      "[topology]\ngenerate=ring 12\n[model]\nmodel=SIR\nbeta=0.1\ndelta1=0.3\n[run]\nn_runs=20\nrng_seed=5\n";
  spit(dir / "s.cfg", body + "[sweep]\nvary=beta\ngrid=0.1,0.5,0.9\n");
  const auto r = invoke({"sweep", "-c", (dir / "s.cfg").string(), "-o", (dir / "a").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("threshold_estimate=", 0) == 0);
  const auto rows = csv_rows(slurp(dir / "a" / "sweep.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "param,mean_outbreak,stderr,n_runs");
  REQUIRE(invoke({"sweep", "-c", (dir / "s.cfg").string(), "-o", (dir / "b").string(), "--threads", "3"}).code == 0);
  CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
  CHECK(slurp(dir / "a" / "summary.txt") == slurp(dir / "b" / "summary.txt"));

  spit(dir / "empty.cfg", body + "[sweep]\nvary=beta\ngrid=\n");
  CHECK(invoke({"sweep", "-c", (dir / "empty.cfg").string(), "-o", (dir / "c").string()}).code == cli::kConfigError);
  // A sweep needs a [sweep] section.
  spit(dir / "none.cfg", body);
  CHECK(invoke({"sweep", "-c", (dir / "none.cfg").string(), "-o", (dir / "d").string()}).code == cli::kConfigError);
}

TEST_CASE("cli: gen") {
  const auto ring = invoke({"gen", "ring", "6"});
  REQUIRE(ring.code == 0);
  CHECK(load_edge_list(ring.out).edges().size() == 6);

  const auto full = invoke({"gen", "er", "10", "1.0"});
  REQUIRE(full.code == 0);
  CHECK(load_edge_list(full.out).edges().size() == 45);

  TempDir dir("cli");
  const auto file = (dir / "ba.txt").string();
  REQUIRE(invoke({"gen", "ba", "30", "2", "--seed", "9", "--out", file}).code == 0);
  const auto net = load_edge_list_file(file);
  CHECK(net.node_count() == 30);
  CHECK(validate(net).ok());
  CHECK(invoke({"validate", file}).out.find("ok") != std::string::npos);
  REQUIRE(invoke({"gen", "ba", "30", "2", "--seed", "9"}).out == slurp(file));

  CHECK(invoke({"gen", "er", "10", "1.5"}).code == cli::kConfigError);
  CHECK(invoke({"gen", "ba", "3", "5"}).code == cli::kConfigError);
  CHECK(invoke({"gen", "torus", "3", "5"}).code == cli::kConfigError);
}

TEST_CASE("cli: validate exit codes") {
  TempDir dir("cli");
  spit(dir / "loop.txt", "0 1\n1 1\n");
  const auto loop = invoke({"validate", (dir / "loop.txt").string()});
  CHECK(loop.code == cli::kTopologyError);
  CHECK(loop.err.find("line 2") != std::string::npos);
  CHECK(invoke({"validate", (dir / "missing.txt").string()}).code == cli::kTopologyError);

  // Switch without a controller assignment in an SDN network: warning only.
  spit(dir / "sdn.txt", "0 1\n1 2\n[roles]\n0=core_switch\n1=core_switch\n2=controller\n[controllers]\n0:2\n");
  const auto warn = invoke({"validate", (dir / "sdn.txt").string()});
  CHECK(warn.code == 0);
  CHECK(warn.out.find("warning: unassigned switch") != std::string::npos);

  // Preference naming a non-controller is a violation.
  spit(dir / "bad.txt", "0 1\n1 2\n[roles]\n0=core_switch\n1=core_switch\n2=controller\n[controllers]\n0:1\n1:2\n");
  const auto bad = invoke({"validate", (dir / "bad.txt").string()});
  CHECK(bad.code == cli::kTopologyError);
  CHECK((bad.out + bad.err).find("controller") != std::string::npos);

  CHECK(invoke({"validate", "--preset", "mesh-sid"}).code == 0);

  spit(dir / "missing-topo.cfg", "[topology]\nfile=nothere.txt\n[model]\nmodel=SI\n");
  CHECK(invoke({"epidemic", "-c", (dir / "missing-topo.cfg").string()}).code == cli::kTopologyError);
}

TEST_CASE("cli: output directory from the environment") {
  TempDir dir("cli");
  spit(dir / "si.cfg", kSiRing);
  ::setenv("FAILPROP_OUT", (dir / "env").string().c_str(), 1);
  const auto r = invoke({"epidemic", "-c", (dir / "si.cfg").string()});
  ::unsetenv("FAILPROP_OUT");
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "env" / "trace.csv"));

  spit(dir / "cfgdir.cfg", std::string(kSiRing) + "[output]\ndir=fromcfg\n");
  REQUIRE(invoke({"epidemic", "-c", (dir / "cfgdir.cfg").string()}).code == 0);
  CHECK(std::filesystem::exists(dir / "fromcfg" / "trace.csv"));
}
