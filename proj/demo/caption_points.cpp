// Prints <n> and v for the pair-pumped and one-atom masers at D = 25, 50, 400
// (nbar = 0.1, N = 100 pairs vs N = 200 atoms per photon lifetime).

#include <cstdio>

#include "micromaser/micromaser.hpp"

int main() {
  using namespace micromaser;
  const ModelSpec dicke{Variant::dicke_pair, 100.0, 0.1, 0.0, 0.0};
  const ModelSpec one{Variant::one_atom, 200.0, 0.1, 0.0, 0.0};
  std::printf("%6s  %12s %10s  %12s %10s\n", "D", "<n> dicke", "v dicke", "<n> 1-atom",
              "v 1-atom");
  for (double D : {25.0, 50.0, 400.0}) {
    const auto a = solve_adaptive(at_pump_parameter(dicke, D));
    const auto b = solve_adaptive(at_pump_parameter(one, D));
    std::printf("%6.0f  %12.5f %10.5f  %12.5f %10.5f\n", D, a.moments.mean_n, a.moments.v,
                b.moments.mean_n, b.moments.v);
  }
}
