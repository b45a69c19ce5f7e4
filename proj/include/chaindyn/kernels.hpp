#pragma once

// Data-parallel kernels behind the graph, recurrence and space modules.
// Every kernel has a plain serial reference and an OpenMP variant; the serial
// path is kept for testing and for the benchmark in bench/.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaindyn/bits.hpp"

namespace chaindyn {

class FiniteMetricSpace;
using PointId = std::uint32_t;

using BigCount = boost::multiprecision::cpp_int;

// Natural log of a nonnegative big integer; -inf for zero.
long double log_big(const BigCount& value);

// Sum of boolean relations as a sparse nonnegative integer matrix (CSR).
struct CountMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;  // n + 1 entries
  std::vector<PointId> cols;
  std::vector<std::uint32_t> mult;

  static CountMatrix sum_of(std::span<const BitMatrix> relations);
  static CountMatrix from(const BitMatrix& relation);
};

enum class ExecPolicy { Serial, Parallel };

namespace kernels {

// Row of `balls` covering the most points of `uncovered`; lowest index wins ties.
std::pair<std::size_t, std::size_t> best_cover_center(const BitMatrix& balls,
                                                      const BitSet& uncovered,
                                                      ExecPolicy policy = ExecPolicy::Parallel);

// Out-neighbourhood of `layer`. The parallel variant scans the transpose.
BitSet step_layer(const BitMatrix& forward, const BitMatrix& transposed, const BitSet& layer,
                  ExecPolicy policy = ExecPolicy::Parallel);

// next[x] = sum_y S(x, y) * v[y]
std::vector<BigCount> count_step(const CountMatrix& s, const std::vector<BigCount>& v,
                                 ExecPolicy policy = ExecPolicy::Parallel);

std::optional<std::size_t> shortest_cycle_through(const BitMatrix& relation, std::size_t x);
std::optional<std::size_t> full_reach_time(const BitMatrix& relation, const BitSet& start,
                                           std::size_t cap);

// Shortest directed cycle through each vertex, nullopt if none.
std::vector<std::optional<std::size_t>> shortest_cycle_lengths(
    const BitMatrix& relation, ExecPolicy policy = ExecPolicy::Parallel);

// For each start set: first t <= cap at which the exact-length-t reachable set
// is the whole vertex set.
std::vector<std::optional<std::size_t>> full_reach_times(const BitMatrix& relation,
                                                         const std::vector<BitSet>& starts,
                                                         std::size_t cap,
                                                         ExecPolicy policy = ExecPolicy::Parallel);

// Row x = closed delta-ball around table[x].
BitMatrix relation_from_table(const FiniteMetricSpace& space, std::span<const PointId> table,
                              double delta, ExecPolicy policy = ExecPolicy::Parallel);

// Perron root of S by float power iteration on S + I (primitive even when S
// is periodic).
double perron_root(const CountMatrix& s, double tolerance = 1e-12,
                   std::size_t max_iterations = 200000,
                   ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace kernels
}  // namespace chaindyn
