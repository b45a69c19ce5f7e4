// Serial vs OpenMP timings for the hot kernels on the doubling-tripling circle.
// Each pair is also compared for equal output, so a speedup never hides a bug.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "chaindyn/graph.hpp"
#include "chaindyn/kernels.hpp"
#include "chaindyn/system.hpp"

using namespace chaindyn;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

int mismatches = 0;

template <class F>
void compare(const char* name, int reps, F&& f) {
  decltype(f(ExecPolicy::Serial)) s{}, p{};
  const double ts = best_of(reps, [&] { s = f(ExecPolicy::Serial); });
  const double tp = best_of(reps, [&] { p = f(ExecPolicy::Parallel); });
  const bool same = s == p;
  if (!same) ++mismatches;
  std::printf("%-24s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  %s\n", name, ts * 1e3, tp * 1e3, ts / tp,
              same ? "same" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2048;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  const double delta = 8.0 / static_cast<double>(n);
  std::printf("circle grid n=%zu, maps 2x and 3x, delta=%g, threads=%d\n", n, delta, omp_get_max_threads());

  const auto space = build_circle_grid(n);
  const auto g = from_map_specs(space, {MapSpec{AffineMap{2, 0}, "2x"}, MapSpec{AffineMap{3, 0}, "3x"}});
  const auto cg = build_chain_graph(g, delta);
  const auto& rel = cg.union_relation();

  compare("relation_from_table", reps, [&](ExecPolicy p) {
    return kernels::relation_from_table(space, g.table(0), delta, p).row(n / 3).count();
  });
  compare("shortest_cycle_lengths", reps, [&](ExecPolicy p) { return kernels::shortest_cycle_lengths(rel, p); });
  std::vector<BitSet> starts;
  for (std::size_t x = 0; x < n; x += 7) starts.push_back(space.ball(static_cast<PointId>(x), delta));
  compare("full_reach_times", reps, [&](ExecPolicy p) { return kernels::full_reach_times(rel, starts, 4 * n, p); });
  compare("total_chain_count n=6", reps, [&](ExecPolicy p) { return total_chain_count(cg, 6, p); });
  compare("perron_root", reps, [&](ExecPolicy p) {
    // rounded: the float sums may associate differently
    return std::llround(kernels::perron_root(cg.sum_counts(), 1e-12, 200000, p) * 1e8);
  });
  BitMatrix balls(n);
  for (std::size_t x = 0; x < n; ++x) balls.set_row(x, space.ball(static_cast<PointId>(x), 3 * delta));
  BitSet uncovered(n);
  for (std::size_t x = 0; x < n; x += 3) uncovered.set(x);
  compare("best_cover_center", reps, [&](ExecPolicy p) { return kernels::best_cover_center(balls, uncovered, p); });

  return mismatches ? 1 : 0;
}
