#pragma once

// Brute-force reference computations. Exponential on purpose; only used on
// tiny instances to pin down expected values.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "chaindyn/graph.hpp"
#include "chaindyn/space.hpp"
#include "chaindyn/system.hpp"

namespace oracle {

using chaindyn::PointId;

// close(i, j) symmetric predicate on n items.
using Pred = std::function<bool(std::size_t, std::size_t)>;

inline std::size_t max_independent(std::size_t n, const Pred& conflict) {
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      if (mask >> i & 1)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if ((mask >> j & 1) && conflict(i, j)) ok = false;
    if (ok) best = size;
  }
  return best;
}

inline std::size_t min_dominating(std::size_t n, const Pred& close) {
  std::size_t best = n;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size >= best) continue;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      bool hit = false;
      for (std::size_t c = 0; c < n && !hit; ++c)
        if ((mask >> c & 1) && (c == v || close(c, v))) hit = true;
      ok = hit;
    }
    if (ok) best = size;
  }
  return best;
}

// Fewest subsets of diameter <= delta covering all points (clique cover DP).
inline std::size_t min_diameter_cover(const chaindyn::FiniteMetricSpace& s, double delta) {
  const std::size_t n = s.size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<char> clique(full + 1, 0);
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      if (mask >> i & 1)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if ((mask >> j & 1) && s.dist(PointId(i), PointId(j)) > delta) ok = false;
    clique[mask] = ok;
  }
  std::vector<std::size_t> f(full + 1, n + 1);
  f[0] = 0;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    const std::uint64_t low = mask & (~mask + 1);
    for (std::uint64_t sub = mask; sub; sub = (sub - 1) & mask)
      if ((sub & low) && clique[sub]) f[mask] = std::min(f[mask], f[mask & ~sub] + 1);
  }
  return f[full];
}

// Every (w, delta)-chain by enumerating all point sequences and checking the
// definition directly against the metric.
inline std::vector<std::vector<PointId>> all_chains(const chaindyn::GeneratorSystem& g,
                                                    const chaindyn::Word& w, double delta) {
  const std::size_t n = g.points();
  const std::size_t len = w.size() + 1;
  std::vector<std::vector<PointId>> out;
  std::vector<PointId> seq(len, 0);
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j + 1 < len && ok; ++j)
      ok = g.space().dist(g.apply(w[j], seq[j]), seq[j + 1]) <= delta;
    if (ok) out.push_back(seq);
    std::size_t i = len;
    while (i > 0 && seq[i - 1] + 1 == n) seq[--i] = 0;
    if (i == 0) break;
    ++seq[i - 1];
  }
  return out;
}

// Shortest cycle through each vertex by Floyd-Warshall on path lengths.
inline std::vector<std::optional<std::size_t>> shortest_cycles(const chaindyn::BitMatrix& rel) {
  const std::size_t n = rel.size();
  constexpr std::size_t inf = std::size_t{1} << 40;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rel.test(i, j)) d[i][j] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<std::optional<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i)
    if (d[i][i] < inf) out[i] = d[i][i];
  return out;
}

// gcd of all closed-walk lengths through v up to a length bound.
inline std::size_t cycle_gcd(const chaindyn::BitMatrix& rel, std::size_t v, std::size_t max_len) {
  const std::size_t n = rel.size();
  std::vector<char> cur(n, 0);
  cur[v] = 1;
  std::size_t g = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<char> next(n, 0);
    for (std::size_t a = 0; a < n; ++a)
      if (cur[a])
        for (std::size_t b = 0; b < n; ++b)
          if (rel.test(a, b)) next[b] = 1;
    cur = next;
    if (cur[v]) g = std::gcd(g, len);
  }
  return g;
}

}  // namespace oracle
