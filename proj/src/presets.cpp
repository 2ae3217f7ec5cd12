#include <array>
#include <utility>

#include "failprop/config.hpp"

namespace failprop {

namespace {

constexpr std::string_view kMeshSid = R"(# A control-plane bug spreading over a 4x4 mesh of transport nodes.
[topology]
generate=grid 4 4
[model]
model=SID
beta=0.4
delta1=0.1
tau=0.2
gamma=0.05
seeds=5
[run]
max_ticks=200
n_runs=200
rng_seed=42
stop=absorb
)";

constexpr std::string_view kControllerFailover = R"(# Two controllers backing each other up; an attacked switch of A
# overloads A, fails over to B and overloads B too.
[edges]
0 1
1 2
2 3
3 4
4 5
5 0
[nodes]
8
[names]
6=A
7=B
[roles]
0=core_switch
1=core_switch
2=core_switch
3=core_switch
4=core_switch
5=core_switch
A=controller
B=controller
[controllers]
0:A,B
1:A,B
2:A,B
3:B,A
4:B,A
5:B,A
[scenario]
kind=vertical
[capacity]
A=100
B=100
[rate]
0=10
1=10
2=10
3=10
4=10
5=10
[attack]
0=150
)";

constexpr std::string_view kLineOverload = R"(# Injected traffic crossing a chain of commodity core switches.
[edges]
0 1
1 2
2 3
3 4
[roles]
0=edge_switch
1=core_switch
2=core_switch
3=core_switch
4=edge_switch
[scenario]
kind=horizontal
[capacity]
1=10
2=10
3=10
[injection]
0,4,20
)";

constexpr std::string_view kParallelReroute = R"(# Two parallel core paths: the first overflows, traffic reroutes onto
# the second, which overflows in turn.
[edges]
0 1
1 2
2 5
0 3
3 4
4 5
[roles]
0=edge_switch
1=core_switch
2=core_switch
3=core_switch
4=core_switch
5=edge_switch
[scenario]
kind=horizontal
[capacity]
1=10
2=10
3=10
4=10
[injection]
0,5,15
)";

constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kPresets{{
    {"mesh-sid", kMeshSid},
    {"controller-failover", kControllerFailover},
    {"line-overload", kLineOverload},
    {"parallel-reroute", kParallelReroute},
}};

}  // namespace

std::optional<std::string_view> preset_text(std::string_view name) {
  for (const auto& [n, text] : kPresets)
    if (n == name) return text;
  return std::nullopt;
}

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> out;
  for (const auto& [n, text] : kPresets) out.push_back(n);
  return out;
}

}  // namespace failprop
