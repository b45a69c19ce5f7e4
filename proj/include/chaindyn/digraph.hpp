#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chaindyn/bits.hpp"

namespace chaindyn::digraph {

// Strongly connected components (Tarjan, iterative). comp[v] is the
// component index; components come out in reverse topological order.
struct Components {
  std::vector<std::size_t> comp;
  std::size_t count = 0;
};
Components strongly_connected_components(const BitMatrix& rel);

bool strongly_connected(const BitMatrix& rel);

// BFS levels from root; unreachable vertices get nullopt.
std::vector<std::optional<std::size_t>> bfs_levels(const BitMatrix& rel, std::size_t root);

// Period of the subgraph induced on `vertices` (assumed strongly connected
// within itself): gcd over induced edges u->v of level(u) + 1 - level(v).
// Returns 0 when the induced subgraph has no edges.
std::size_t period_of(const BitMatrix& rel, const std::vector<std::size_t>& vertices,
                      std::size_t root_position = 0);

// lcm of the periods of every component that carries a cycle; 1 if acyclic.
std::size_t cyclic_period_lcm(const BitMatrix& rel, std::size_t cap = 64);

}  // namespace chaindyn::digraph
