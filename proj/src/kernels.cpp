#include "chaindyn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "chaindyn/space.hpp"

namespace chaindyn {

long double log_big(const BigCount& value) {
  if (value <= 0) return -std::numeric_limits<long double>::infinity();
  const std::size_t bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 60) return std::log(static_cast<long double>(value.convert_to<unsigned long long>()));
  const std::size_t shift = bits - 60;
  const BigCount top = value >> shift;
  return std::log(static_cast<long double>(top.convert_to<unsigned long long>())) +
         static_cast<long double>(shift) * std::numbers::ln2_v<long double>;
}

CountMatrix CountMatrix::sum_of(std::span<const BitMatrix> relations) {
  CountMatrix s;
  s.n = relations.empty() ? 0 : relations.front().size();
  s.offsets.assign(s.n + 1, 0);
  std::vector<std::uint32_t> acc(s.n, 0);
  std::vector<PointId> touched;
  for (std::size_t x = 0; x < s.n; ++x) {
    touched.clear();
    for (const auto& r : relations)
      r.for_each_in_row(x, [&](std::size_t y) {
        if (acc[y]++ == 0) touched.push_back(static_cast<PointId>(y));
      });
    std::sort(touched.begin(), touched.end());
    for (PointId y : touched) {
      s.cols.push_back(y);
      s.mult.push_back(acc[y]);
      acc[y] = 0;
    }
    s.offsets[x + 1] = s.cols.size();
  }
  return s;
}

CountMatrix CountMatrix::from(const BitMatrix& relation) {
  return sum_of(std::span<const BitMatrix>(&relation, 1));
}

namespace kernels {

std::pair<std::size_t, std::size_t> best_cover_center(const BitMatrix& balls,
                                                      const BitSet& uncovered,
                                                      ExecPolicy policy) {
  const std::size_t n = balls.size();
  const auto u = uncovered.words();
  auto gain_of = [&](std::size_t c) {
    const auto row = balls.row_words(c);
    std::size_t g = 0;
    for (std::size_t i = 0; i < row.size(); ++i)
      g += static_cast<std::size_t>(std::popcount(row[i] & u[i]));
    return g;
  };
  std::size_t best = 0, best_gain = 0;
  if (policy == ExecPolicy::Serial) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t g = gain_of(c);
      if (g > best_gain) {
        best = c;
        best_gain = g;
      }
    }
    return {best, best_gain};
  }
  std::vector<std::size_t> gains(n);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < n; ++c) gains[c] = gain_of(c);
  for (std::size_t c = 0; c < n; ++c)
    if (gains[c] > best_gain) {
      best = c;
      best_gain = gains[c];
    }
  return {best, best_gain};
}

BitSet step_layer(const BitMatrix& forward, const BitMatrix& transposed, const BitSet& layer,
                  ExecPolicy policy) {
  const std::size_t n = forward.size();
  BitSet next(n);
  if (policy == ExecPolicy::Serial) {
    layer.for_each([&](std::size_t x) {
      const auto row = forward.row_words(x);
      auto dst = next.words();
      for (std::size_t i = 0; i < row.size(); ++i) dst[i] |= row[i];
    });
    return next;
  }
  const auto l = layer.words();
  std::vector<char> hit(n, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t y = 0; y < n; ++y) {
    const auto col = transposed.row_words(y);
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i] & l[i]) {
        hit[y] = 1;
        break;
      }
  }
  for (std::size_t y = 0; y < n; ++y)
    if (hit[y]) next.set(y);
  return next;
}

std::vector<BigCount> count_step(const CountMatrix& s, const std::vector<BigCount>& v,
                                 ExecPolicy policy) {
  std::vector<BigCount> next(s.n);
  auto row = [&](std::size_t x) {
    BigCount acc = 0;
    for (std::size_t k = s.offsets[x]; k < s.offsets[x + 1]; ++k) {
      if (s.mult[k] == 1)
        acc += v[s.cols[k]];
      else
        acc += v[s.cols[k]] * s.mult[k];
    }
    next[x] = std::move(acc);
  };
  if (policy == ExecPolicy::Serial) {
    for (std::size_t x = 0; x < s.n; ++x) row(x);
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t x = 0; x < s.n; ++x) row(x);
  }
  return next;
}

std::optional<std::size_t> shortest_cycle_through(const BitMatrix& rel, std::size_t x) {
  if (rel.test(x, x)) return 1;
  const std::size_t n = rel.size();
  BitSet visited(n);
  BitSet frontier(n);
  rel.for_each_in_row(x, [&](std::size_t y) {
    frontier.set(y);
    visited.set(y);
  });
  for (std::size_t len = 2; len <= n; ++len) {
    if (frontier.none()) return std::nullopt;
    BitSet next(n);
    frontier.for_each([&](std::size_t u) {
      const auto row = rel.row_words(u);
      auto dst = next.words();
      for (std::size_t i = 0; i < row.size(); ++i) dst[i] |= row[i];
    });
    if (next.test(x)) return len;
    auto nw = next.words();
    const auto vw = visited.words();
    for (std::size_t i = 0; i < nw.size(); ++i) nw[i] &= ~vw[i];
    visited |= next;
    frontier = std::move(next);
  }
  return std::nullopt;
}

std::optional<std::size_t> full_reach_time(const BitMatrix& rel, const BitSet& start,
                                           std::size_t cap) {
  const std::size_t n = rel.size();
  BitSet layer = start;
  for (std::size_t t = 0; t <= cap; ++t) {
    if (layer.count() == n) return t;
    BitSet next(n);
    layer.for_each([&](std::size_t x) {
      const auto row = rel.row_words(x);
      auto dst = next.words();
      for (std::size_t i = 0; i < row.size(); ++i) dst[i] |= row[i];
    });
    if (next == layer) return std::nullopt;  // fixed point short of full
    layer = std::move(next);
  }
  return std::nullopt;
}

std::vector<std::optional<std::size_t>> shortest_cycle_lengths(const BitMatrix& relation,
                                                               ExecPolicy policy) {
  const std::size_t n = relation.size();
  std::vector<std::optional<std::size_t>> out(n);
  if (policy == ExecPolicy::Serial) {
    for (std::size_t x = 0; x < n; ++x) out[x] = shortest_cycle_through(relation, x);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t x = 0; x < n; ++x) out[x] = shortest_cycle_through(relation, x);
  }
  return out;
}

std::vector<std::optional<std::size_t>> full_reach_times(const BitMatrix& relation,
                                                         const std::vector<BitSet>& starts,
                                                         std::size_t cap, ExecPolicy policy) {
  std::vector<std::optional<std::size_t>> out(starts.size());
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < starts.size(); ++i)
      out[i] = full_reach_time(relation, starts[i], cap);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < starts.size(); ++i)
      out[i] = full_reach_time(relation, starts[i], cap);
  }
  return out;
}

BitMatrix relation_from_table(const FiniteMetricSpace& space, std::span<const PointId> table,
                              double delta, ExecPolicy policy) {
  const std::size_t n = space.size();
  BitMatrix rel(n);
  if (policy == ExecPolicy::Serial) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (space.dist(table[x], static_cast<PointId>(y)) <= delta) rel.set(x, y);
    return rel;
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t x = 0; x < n; ++x) rel.set_row(x, space.ball(table[x], delta));
  return rel;
}

double perron_root(const CountMatrix& s, double tolerance, std::size_t max_iterations,
                   ExecPolicy policy) {
  const std::size_t n = s.n;
  if (n == 0) return 0.0;
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n);
  double lambda = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    auto row = [&](std::size_t x) {
      double acc = v[x];
      for (std::size_t k = s.offsets[x]; k < s.offsets[x + 1]; ++k) acc += s.mult[k] * v[s.cols[k]];
      w[x] = acc;
    };
    if (policy == ExecPolicy::Serial) {
      for (std::size_t x = 0; x < n; ++x) row(x);
    } else {
#pragma omp parallel for schedule(static)
      for (std::size_t x = 0; x < n; ++x) row(x);
    }
    double norm = 0.0;
    for (double a : w) norm += a;
    for (std::size_t x = 0; x < n; ++x) v[x] = w[x] / norm;
    const double prev = lambda;
    lambda = norm;  // ||v||_1 was 1
    if (it > 0 && std::abs(lambda - prev) <= tolerance * lambda) break;
  }
  return lambda - 1.0;
}

}  // namespace kernels
}  // namespace chaindyn
