#include <doctest.h>

#include <numeric>

#include "chaindyn/corpus.hpp"
#include "chaindyn/digraph.hpp"
#include "chaindyn/recurrence.hpp"
#include "chaindyn/structure.hpp"
#include "oracles.hpp"

using namespace chaindyn;

namespace {

GeneratorSystem circle_maps(std::size_t n, std::vector<double> slopes) {
  std::vector<MapSpec> specs;
  for (double a : slopes) specs.push_back(MapSpec{AffineMap{a, 0}, ""});
  return from_map_specs(build_circle_grid(n), specs);
}

GeneratorSystem two_circles(std::size_t n) {
  auto c = build_circle_grid(n);
  return from_map_specs(build_disjoint_union({c, c}, 1.0),
                        {MapSpec{CrossAffineMap{2, 0, 1}, ""}, MapSpec{CrossAffineMap{3, 0, 1}, ""}});
}

FiniteMetricSpace discrete(std::size_t n) {
  std::vector<double> d(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  return FiniteMetricSpace::from_matrix(n, d);
}

}  // namespace

TEST_CASE("period_k") {
  auto loop = from_map_tables(discrete(2), {{0, 0}, {1, 0}});
  CHECK(period_k(build_chain_graph(loop, 0.5)) == 1);
  auto swap = from_map_tables(discrete(2), {{1, 0}});
  CHECK(period_k(build_chain_graph(swap, 0.5)) == 2);
  CHECK(period_k(build_chain_graph(two_circles(32), 0.05)) == 2);
  auto id = from_map_tables(discrete(3), {{0, 1, 2}});
  try {
    period_k(build_chain_graph(id, 0.5));
    FAIL("expected not-transitive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotTransitive);
  }
}

TEST_CASE("period is independent of the base point") {
  auto corpus = random_corpus(2024, 100);
  for (const auto& c : corpus) {
    auto cg = build_chain_graph(c.system, c.epsilon);
    const auto& rel = cg.union_relation();
    const std::size_t k = period_k(cg);
    std::vector<std::size_t> all(cg.points());
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t root = 0; root < all.size(); ++root) {
      CHECK(digraph::period_of(rel, all, root) == k);
      CHECK(oracle::cycle_gcd(rel, root, 2 * all.size()) == k);
    }
    for (const auto& l : kernels::shortest_cycle_lengths(rel)) CHECK(*l % k == 0);
  }
}

TEST_CASE("epsilon classes") {
  auto prim = build_chain_graph(circle_maps(16, {2, 3}), 1.0 / 16);
  auto r = epsilon_classes(prim);
  CHECK(r.k == 1);
  CHECK(r.per_class_mixing == std::vector<bool>{true});
  CHECK(r.kind == DecompositionCase::Mixing);

  auto ex = epsilon_classes(build_chain_graph(two_circles(32), 0.05));
  CHECK(ex.k == 2);
  CHECK(ex.permutation_ok);
  CHECK(ex.classes_verified);
  CHECK(ex.kind == DecompositionCase::Periodic);
  CHECK(ex.per_class_mixing == std::vector<bool>{true, true});
  for (std::size_t v = 0; v < 64; ++v) CHECK(ex.class_of[v] == ex.class_of[v < 32 ? 0 : 32]);
  CHECK(ex.class_of[0] != ex.class_of[32]);

  auto cyc = from_map_tables(discrete(3), {{1, 2, 0}});
  auto c3 = epsilon_classes(build_chain_graph(cyc, 0.5));
  CHECK(c3.k == 3);
  CHECK(c3.class_sizes == std::vector<std::size_t>{1, 1, 1});
  CHECK(c3.per_class_mixing == std::vector<bool>{true, true, true});

  Budget tight;
  tight.max_generators = 2;
  auto fb = epsilon_classes(build_chain_graph(two_circles(32), 0.05), tight);
  CHECK(fb.power_fallback);
  CHECK(fb.per_class_mixing == std::vector<bool>{true, true});
}

TEST_CASE("epsilon classes on random systems") {
  for (const auto& c : random_corpus(8, 60)) {
    auto cg = build_chain_graph(c.system, c.epsilon);
    auto r = epsilon_classes(cg);
    CHECK(r.k == period_k(cg));
    CHECK(r.permutation_ok);
    CHECK(r.classes_verified);
    CHECK(r.class_sizes.size() == r.k);
    for (auto s : r.class_sizes) CHECK(s >= 1);
    for (std::size_t u = 0; u < cg.points(); ++u)
      cg.union_relation().for_each_in_row(u, [&](std::size_t v) {
        CHECK(r.class_of[v] == (r.class_of[u] + 1) % r.k);
      });
    CHECK((r.kind == DecompositionCase::Mixing) == is_chain_mixing(cg));
  }
}

TEST_CASE("odometer system") {
  auto o2 = odometer_system({{2}});
  CHECK(o2.table(0) == std::vector<PointId>{1, 0});
  auto o22 = odometer_system({{2, 2}});
  CHECK(o22.table(0) == std::vector<PointId>{1, 2, 3, 0});
  auto o32 = odometer_system({{3, 2}});
  PointId x = 0;
  std::vector<bool> seen(6, false);
  for (int i = 0; i < 6; ++i) {
    CHECK_FALSE(seen[x]);
    seen[x] = true;
    x = o32.apply(0, x);
  }
  CHECK(x == 0);
  CHECK_THROWS_AS(odometer_system({{2, 1}}), Error);
}

TEST_CASE("odometer k at each scale") {
  for (std::size_t L = 1; L <= 6; ++L) {
    auto g = odometer_system({std::vector<std::size_t>(L, 2)});
    for (std::size_t i = 1; i <= L + 1; ++i) {
      const double eps = std::ldexp(1.0, -static_cast<int>(i));
      auto cg = build_chain_graph(g, eps);
      CHECK(is_chain_transitive(cg));
      // states told apart at scale 2^-i: the low min(i, L) digits
      CHECK(period_k(cg) == (std::size_t{1} << std::min(i, L)));
    }
  }
}

TEST_CASE("k ladder") {
  auto prim = k_ladder(circle_maps(32, {2, 3}), ScaleLadder({0.2, 0.1, 0.05}));
  for (const auto& [e, k] : prim.entries) CHECK(k == 1);
  CHECK(prim.growth == GrowthFlag::Stabilized);

  auto ex = k_ladder(two_circles(32), ScaleLadder({0.2, 0.1, 0.05}));
  for (const auto& [e, k] : ex.entries) CHECK(k == 2);
  CHECK(ex.divisibility_ok);
  CHECK(ex.growth == GrowthFlag::Stabilized);

  auto odo = k_ladder(odometer_system({std::vector<std::size_t>(6, 2)}),
                      ScaleLadder({0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125}));
  REQUIRE(odo.entries.size() == 7);
  for (std::size_t i = 0; i < 6; ++i) CHECK(odo.entries[i].second == (std::size_t{2} << i));
  CHECK(odo.entries[6].second == 64);
  CHECK(odo.divisibility_ok);
  CHECK(odo.growth == GrowthFlag::Stabilized);

  auto id = k_ladder(circle_maps(16, {1}), ScaleLadder({0.1, 0.01}));
  CHECK(id.truncated);
  CHECK(id.entries.size() == 1);
}

TEST_CASE("gcd and stabilization") {
  CHECK(gcd_of_set({4, 6}) == 2);
  CHECK(gcd_of_set({6, 10, 15}) == 1);
  CHECK(gcd_of_set({7}) == 7);
  CHECK_THROWS_AS(gcd_of_set({}), Error);

  auto s = additive_stabilization_bound({3, 5});
  CHECK(s.d == 1);
  CHECK(s.N == 8);
  s = additive_stabilization_bound({2, 3});
  CHECK(s.d == 1);
  CHECK(s.N == 2);
  s = additive_stabilization_bound({4, 6});
  CHECK(s.d == 2);
  CHECK(s.N == 2);
  CHECK(additive_stabilization_bound({1, 7}).N == 1);

  // exhaustive check on small sets
  for (std::size_t a = 1; a <= 9; ++a)
    for (std::size_t b = a; b <= 9; ++b)
      for (std::size_t c = b; c <= 12; c += 3) {
        const auto r = additive_stabilization_bound({a, b, c});
        std::vector<char> rep(400, 0);
        rep[0] = 1;
        for (std::size_t v = 1; v < rep.size(); ++v)
          for (auto g : {a, b, c})
            if (g <= v && rep[v - g]) rep[v] = 1;
        for (std::size_t n = r.N; n * r.d < rep.size(); ++n) CHECK(rep[n * r.d]);
        if (r.N > 1) CHECK_FALSE(rep[(r.N - 1) * r.d]);
      }
}

TEST_CASE("frobenius numbers") {
  for (long long a = 2; a <= 12; ++a)
    for (long long b = a + 1; b <= 12; ++b) {
      if (std::gcd(a, b) != 1) {
        CHECK_THROWS_AS(frobenius_two(a, b), Error);
        continue;
      }
      const long long g = frobenius_two(a, b);
      CHECK(g == a * b - a - b);
      std::vector<char> rep(200, 0);
      rep[0] = 1;
      for (std::size_t v = 1; v < rep.size(); ++v)
        rep[v] = (v >= std::size_t(a) && rep[v - a]) || (v >= std::size_t(b) && rep[v - b]);
      CHECK_FALSE(rep[g]);
      for (long long n = g + 1; n < 200; ++n) CHECK(rep[n]);
      for (long long n = 0; n < 200; ++n) CHECK(representable(n, a, b) == static_cast<bool>(rep[n]));
    }
  CHECK(frobenius_two(3, 5) == 7);
  CHECK_FALSE(representable(7, 3, 5));
  CHECK(representable(8, 3, 5));
  CHECK(frobenius_two(2, 3) == 1);
  CHECK(frobenius_two(1, 9) == -1);
}

TEST_CASE("connectivity equivalence") {
  auto dt = connectivity_equivalence_check(circle_maps(64, {2, 3}), 1.0 / 32);
  CHECK(dt.applicable);
  CHECK(dt.recurrent);
  CHECK(dt.transitive);
  CHECK(dt.totally_transitive);
  CHECK(dt.mixing);
  CHECK(dt.all_agree);

  auto ex = connectivity_equivalence_check(two_circles(32), 0.05);
  CHECK_FALSE(ex.applicable);
  CHECK_FALSE(ex.all_agree);

  auto id = connectivity_equivalence_check(circle_maps(32, {1}), 1.0 / 32);
  CHECK(id.applicable);
  CHECK(id.all_agree);
  CHECK(id.mixing);
}
