#include <doctest.h>

#include <cmath>
#include <random>

#include "chaindyn/digraph.hpp"
#include "chaindyn/graph.hpp"
#include "chaindyn/kernels.hpp"
#include "chaindyn/solvers.hpp"
#include "oracles.hpp"

using namespace chaindyn;

namespace {

BitMatrix random_relation(std::mt19937_64& rng, std::size_t n, unsigned percent) {
  BitMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng() % 100 < percent) r.set(i, j);
  return r;
}

BitMatrix symmetric_relation(std::mt19937_64& rng, std::size_t n, unsigned percent) {
  BitMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.set(i, i);
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 100 < percent) {
        r.set(i, j);
        r.set(j, i);
      }
  }
  return r;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(3);
  auto g = from_map_specs(build_circle_grid(150), {MapSpec{AffineMap{2, 0}, ""}, MapSpec{AffineMap{3, 0.01}, ""}});
  for (double delta : {0.0, 0.01, 0.05}) {
    const auto a = kernels::relation_from_table(g.space(), g.table(1), delta, ExecPolicy::Serial);
    const auto b = kernels::relation_from_table(g.space(), g.table(1), delta, ExecPolicy::Parallel);
    CHECK(a == b);
  }
  auto cg = build_chain_graph(g, 0.02);
  CHECK(total_chain_count(cg, 9, ExecPolicy::Serial) == total_chain_count(cg, 9, ExecPolicy::Parallel));
  CHECK(count_chains_for_word(cg, {0, 1, 1, 0}, ExecPolicy::Serial) ==
        count_chains_for_word(cg, {0, 1, 1, 0}, ExecPolicy::Parallel));

  for (int trial = 0; trial < 5; ++trial) {
    auto r = random_relation(rng, 90, 3);
    auto rt = r.transpose();
    BitSet layer(90);
    for (std::size_t i = 0; i < 90; i += 7) layer.set(i);
    CHECK(kernels::step_layer(r, rt, layer, ExecPolicy::Serial) ==
          kernels::step_layer(r, rt, layer, ExecPolicy::Parallel));
    CHECK(kernels::shortest_cycle_lengths(r, ExecPolicy::Serial) ==
          kernels::shortest_cycle_lengths(r, ExecPolicy::Parallel));
    std::vector<BitSet> starts(10, BitSet(90));
    for (std::size_t i = 0; i < 10; ++i) starts[i].set(i * 3);
    CHECK(kernels::full_reach_times(r, starts, 200, ExecPolicy::Serial) ==
          kernels::full_reach_times(r, starts, 200, ExecPolicy::Parallel));
    BitSet unc = BitSet::full(90);
    CHECK(kernels::best_cover_center(r, unc, ExecPolicy::Serial) ==
          kernels::best_cover_center(r, unc, ExecPolicy::Parallel));
    const auto s = CountMatrix::from(r);
    CHECK(kernels::perron_root(s, 1e-12, 100000, ExecPolicy::Serial) ==
          doctest::Approx(kernels::perron_root(s, 1e-12, 100000, ExecPolicy::Parallel)));
  }
}

TEST_CASE("shortest cycles against Floyd-Warshall") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = random_relation(rng, 3 + rng() % 10, 20);
    CHECK(kernels::shortest_cycle_lengths(r) == oracle::shortest_cycles(r));
  }
}

TEST_CASE("perron root") {
  BitMatrix cycle(3);
  cycle.set(0, 1);
  cycle.set(1, 2);
  cycle.set(2, 0);
  CHECK(kernels::perron_root(CountMatrix::from(cycle)) == doctest::Approx(1.0));
  CHECK(kernels::perron_root(CountMatrix::from(BitMatrix::complete(5))) == doctest::Approx(5.0));
  // golden mean shift
  BitMatrix fib(2);
  fib.set(0, 0);
  fib.set(0, 1);
  fib.set(1, 0);
  CHECK(kernels::perron_root(CountMatrix::from(fib)) == doctest::Approx((1 + std::sqrt(5.0)) / 2));
}

TEST_CASE("log_big") {
  CHECK(log_big(BigCount(1)) == 0.0L);
  CHECK(std::isinf(log_big(BigCount(0))));
  BigCount big = 1;
  big <<= 1000;
  CHECK(static_cast<double>(log_big(big)) == doctest::Approx(1000 * std::log(2.0)));
  CHECK(static_cast<double>(log_big(BigCount(12345))) == doctest::Approx(std::log(12345.0)));
}

TEST_CASE("digraph helpers") {
  BitMatrix two(2);
  two.set(0, 1);
  two.set(1, 0);
  CHECK(digraph::strongly_connected(two));
  CHECK(digraph::period_of(two, {0, 1}) == 2);
  BitMatrix loop = two;
  loop.set(0, 0);
  CHECK(digraph::period_of(loop, {0, 1}) == 1);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    auto r = random_relation(rng, n, 25);
    auto comps = digraph::strongly_connected_components(r);
    // same component iff mutually reachable
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      reach[i][i] = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (r.test(i, j)) reach[i][j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK((comps.comp[i] == comps.comp[j]) == (reach[i][j] && reach[j][i]));
    if (digraph::strongly_connected(r)) {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      CHECK(digraph::period_of(r, all) == oracle::cycle_gcd(r, 0, 4 * n * n));
    }
  }
}

TEST_CASE("exact solvers against subset enumeration") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 14;
    auto r = symmetric_relation(rng, n, static_cast<unsigned>(10 + rng() % 60));
    auto pred = [&](std::size_t a, std::size_t b) { return r.test(a, b); };
    const auto mis = solvers::max_independent_set(r);
    CHECK(mis.exact);
    CHECK(mis.members.size() == oracle::max_independent(n, pred));
    for (auto a : mis.members)
      for (auto b : mis.members)
        if (a != b) CHECK_FALSE(r.test(a, b));
    const auto dom = solvers::min_dominating_set(r);
    CHECK(dom.exact);
    CHECK(dom.members.size() == oracle::min_dominating(n, pred));
    BitSet covered(n);
    for (auto c : dom.members) covered |= r.row(c);
    CHECK(covered.all());
  }
}

TEST_CASE("sparse independent sets against subset enumeration") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 4 + rng() % 15;
    auto r = symmetric_relation(rng, n, static_cast<unsigned>(3 + rng() % 22));
    auto pred = [&](std::size_t a, std::size_t b) { return r.test(a, b); };
    const auto mis = solvers::max_independent_set(r);
    CHECK(mis.exact);
    CHECK(mis.members.size() == oracle::max_independent(n, pred));
    for (auto a : mis.members)
      for (auto b : mis.members)
        if (a != b) CHECK_FALSE(r.test(a, b));
  }
}

TEST_CASE("solvers split disjoint components") {
  // 60 disjoint 5-cycles: independence 2 and domination 2 per cycle
  const std::size_t cycles = 60, n = 5 * cycles;
  BitMatrix r(n);
  for (std::size_t c = 0; c < cycles; ++c)
    for (std::size_t i = 0; i < 5; ++i) {
      const std::size_t a = 5 * c + i, b = 5 * c + (i + 1) % 5;
      r.set(a, b);
      r.set(b, a);
    }
  const auto mis = solvers::max_independent_set(r, 10000);
  CHECK(mis.exact);
  CHECK(mis.members.size() == 2 * cycles);
  for (std::size_t v = 0; v < n; ++v) r.set(v, v);
  const auto dom = solvers::min_dominating_set(r, 10000);
  CHECK(dom.exact);
  CHECK(dom.members.size() == 2 * cycles);
}

TEST_CASE("solvers on larger instances") {
  std::mt19937_64 rng(17);
  auto r = symmetric_relation(rng, 300, 4);
  const auto mis = solvers::max_independent_set(r, 200000);
  const auto greedy = solvers::greedy_maximal_independent(r);
  CHECK(mis.members.size() >= greedy.size());
  const auto dom = solvers::min_dominating_set(r, 200000);
  CHECK(dom.members.size() <= greedy.size());
}
