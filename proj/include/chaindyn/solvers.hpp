#pragma once

#include <cstddef>
#include <vector>

#include "chaindyn/bits.hpp"

namespace chaindyn::solvers {

struct SolveResult {
  std::vector<std::size_t> members;
  bool exact = false;
  std::size_t nodes = 0;  // search work: each node costs 1 + (vertices it sweeps) / 64
};

inline constexpr std::size_t kDefaultNodeLimit = 20'000'000;

// Maximum set of vertices pairwise non-adjacent in `conflict` (the diagonal is
// ignored). Branch and bound on cliques of the complement with a greedy
// colouring bound; falls back to the best set found when the node limit hits.
SolveResult max_independent_set(const BitMatrix& conflict,
                                std::size_t node_limit = kDefaultNodeLimit);

// Minimum set D with every vertex in or adjacent to D, for a symmetric
// reflexive `close` relation.
SolveResult min_dominating_set(const BitMatrix& close, std::size_t node_limit = kDefaultNodeLimit);

// Index-order greedy: accept v when it conflicts with nothing accepted so far.
// The result is maximal independent, hence also dominating.
std::vector<std::size_t> greedy_maximal_independent(const BitMatrix& conflict);

}  // namespace chaindyn::solvers
