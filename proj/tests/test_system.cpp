#include <doctest.h>

#include <cmath>

#include "chaindyn/system.hpp"

using namespace chaindyn;

namespace {

GeneratorSystem identity_system(const FiniteMetricSpace& s, std::size_t m) {
  std::vector<MapSpec> specs(m, MapSpec{IdentityMap{}, ""});
  return from_map_specs(s, specs);
}

}  // namespace

TEST_CASE("from_map_tables") {
  auto s = build_circle_grid(4);
  auto g = from_map_tables(s, {{0, 1, 2, 3}});
  CHECK(g.m() == 1);
  CHECK(g.quantization_error() == 0.0);
  for (PointId x = 0; x < 4; ++x) CHECK(g.apply(0, x) == x);
  CHECK(from_map_tables(s, {{0, 1, 2, 3}, {0, 1, 2, 3}}).m() == 2);
  CHECK_THROWS_AS(from_map_tables(s, {{0, 1, 2, 4}}), Error);
  CHECK_THROWS_AS(from_map_tables(s, {{0, 1, 2}}), Error);
}

TEST_CASE("quantize_map") {
  auto c8 = build_circle_grid(8);
  auto q = quantize_map(c8, MapSpec{AffineMap{2, 0}, ""});
  for (PointId k = 0; k < 8; ++k) CHECK(q.table[k] == (2 * k) % 8);
  CHECK(q.error == 0.0);

  q = quantize_map(c8, MapSpec{IdentityMap{}, ""});
  for (PointId k = 0; k < 8; ++k) CHECK(q.table[k] == k);
  CHECK(q.error == 0.0);

  // Every image sits half way between two grid points; the lower index wins.
  q = quantize_map(c8, MapSpec{AffineMap{1, 1.0 / 16}, ""});
  CHECK(q.error == doctest::Approx(1.0 / 16));
  for (PointId k = 0; k < 7; ++k) CHECK(q.table[k] == k);
  CHECK(q.table[7] == 0);

  auto shift = build_shift_space(2, 3);
  CHECK_THROWS_AS(quantize_map(shift, MapSpec{AffineMap{2, 0}, ""}), Error);
  CHECK_THROWS_AS(quantize_map(c8, MapSpec{PrependMap{0}, ""}), Error);

  auto c10 = build_circle_grid(10);
  q = quantize_map(c10, MapSpec{AffineMap{1.37, 0.11}, ""});
  CHECK(q.error <= c10.dist(0, 1) / 2 + 1e-12);
}

TEST_CASE("cross maps on a union of circles") {
  auto c = build_circle_grid(8);
  auto u = build_disjoint_union({c, c}, 1.0);
  auto q = quantize_map(u, MapSpec{CrossAffineMap{3, 0, 1}, ""});
  for (PointId k = 0; k < 8; ++k) {
    CHECK(q.table[k] == 8 + (3 * k) % 8);
    CHECK(q.table[8 + k] == (3 * k) % 8);
  }
}

TEST_CASE("prepend and odometer maps") {
  auto s = build_shift_space(2, 3);
  const auto& g = std::get<ShiftGeometry>(s.geometry());
  auto q = quantize_map(s, MapSpec{PrependMap{1}, ""});
  CHECK(q.table[shift_index(g, {0, 1, 1})] == shift_index(g, {1, 0, 1}));
  CHECK(q.error == 0.0);

  auto o = build_odometer_space({2, 2});
  auto f = quantize_map(o, MapSpec{OdometerMap{}, ""});
  // index = d0 + 2 d1: (0,0) -> (1,0) -> (0,1) -> (1,1) -> (0,0)
  CHECK(f.table == std::vector<PointId>{1, 2, 3, 0});
}

TEST_CASE("apply_word composition order") {
  auto s = build_circle_grid(12);
  auto g = from_map_specs(s, {MapSpec{AffineMap{2, 0}, ""}, MapSpec{AffineMap{1, 1.0 / 12}, ""}});
  for (PointId x = 0; x < 12; ++x) {
    CHECK(apply_word(g, {0}, x) == g.apply(0, x));
    // "01": letter 1 acts first
    CHECK(apply_word(g, {0, 1}, x) == g.apply(0, g.apply(1, x)));
    CHECK(apply_word(g, {0, 1, 1, 0}, x) == apply_word(g, {0, 1}, apply_word(g, {1, 0}, x)));
  }
  CHECK_THROWS_AS(apply_word(g, {}, 0), Error);
  auto id = identity_system(s, 3);
  CHECK(apply_word(id, {2, 0, 1, 1}, 5) == 5);
}

TEST_CASE("word metric") {
  auto s = build_circle_grid(64);
  auto id = identity_system(s, 2);
  CHECK(word_metric_dw(id, {0, 1, 1}, 3, 9) == s.dist(3, 9));
  auto dbl = from_map_specs(s, {MapSpec{AffineMap{2, 0}, ""}});
  CHECK(word_metric_dw(dbl, {0, 0, 0}, 5, 5) == 0.0);
  // Terms dist(2^j x, 2^j y), j = 0..3, for adjacent x, y: 1, 2, 4, 8 steps.
  const double expected = std::max({s.dist(5, 6), s.dist(10, 12), s.dist(20, 24), s.dist(40, 48)});
  CHECK(word_metric_dw(dbl, {0, 0, 0}, 5, 6) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(8.0 / 64));
  for (PointId x = 0; x < 64; x += 7)
    for (PointId y = 0; y < 64; y += 5) {
      CHECK(word_metric_dw(dbl, {0, 0}, x, y) == word_metric_dw(dbl, {0, 0}, y, x));
      CHECK(word_metric_dw(dbl, {0, 0}, x, y) >= s.dist(x, y));
    }
}

TEST_CASE("power system") {
  auto s = build_circle_grid(9);
  auto g = from_map_specs(s, {MapSpec{AffineMap{2, 0}, ""}, MapSpec{AffineMap{1, 1.0 / 9}, ""}});
  CHECK(power_system(g, 1).tables() == g.tables());
  auto g2 = power_system(g, 2);
  CHECK(g2.m() == 4);
  const auto words = all_words(2, 2);
  for (std::size_t i = 0; i < words.size(); ++i)
    for (PointId x = 0; x < 9; ++x) CHECK(g2.apply(i, x) == apply_word(g, words[i], x));
  auto g3 = power_system(g, 3);
  const auto w3 = all_words(2, 3);
  for (std::size_t i = 0; i < w3.size(); ++i)
    for (PointId x = 0; x < 9; ++x) CHECK(g3.apply(i, x) == apply_word(g, w3[i], x));
  const auto id3 = power_system(identity_system(s, 2), 3);
  for (const auto& t : id3.tables())
    for (PointId x = 0; x < 9; ++x) CHECK(t[x] == x);
  Budget b;
  b.max_generators = 10;
  CHECK_THROWS_AS(power_system(g, 4, b), Error);
}

TEST_CASE("product system") {
  auto a = build_circle_grid(6), b = build_circle_grid(5);
  auto g = from_map_specs(a, {MapSpec{AffineMap{2, 0}, ""}, MapSpec{AffineMap{3, 0}, ""}});
  auto h = from_map_specs(b, {MapSpec{AffineMap{2, 0}, ""}, MapSpec{IdentityMap{}, ""},
                              MapSpec{AffineMap{1, 0.2}, ""}});
  auto p = product_system(g, h);
  CHECK(p.m() == 6);
  CHECK(p.points() == 30);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 3; ++k)
      for (PointId x = 0; x < 6; ++x)
        for (PointId y = 0; y < 5; ++y)
          CHECK(p.apply(j * 3 + k, x * 5 + y) == g.apply(j, x) * 5 + h.apply(k, y));

  auto one = FiniteMetricSpace::from_matrix(1, {0.0});
  auto idh = from_map_tables(one, {{0}});
  auto q = product_system(g, idh);
  CHECK(q.tables() == g.tables());
}

TEST_CASE("skew product") {
  auto s = build_circle_grid(4);
  auto g = from_map_specs(s, {MapSpec{AffineMap{2, 0}, ""}, MapSpec{AffineMap{3, 0}, ""}});
  auto f = skew_product(g, 1);
  CHECK(f.points() == 8);
  CHECK(f.m() == 2);

  auto f3 = skew_product(g, 3);
  const auto& prod = std::get<ProductGeometry>(f3.space().geometry());
  const auto& sg = std::get<ShiftGeometry>(prod.factors[0].geometry());
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t w = 0; w < 8; ++w)
      for (PointId x = 0; x < 4; ++x) {
        const auto img = f3.apply(b, PointId(w * 4 + x));
        const auto word = shift_word(sg, w);
        const auto iw = shift_word(sg, img / 4);
        CHECK(iw[0] == word[1]);
        CHECK(iw[1] == word[2]);
        CHECK(iw[2] == b);
        CHECK(img % 4 == g.apply(word[0], x));
      }

  CHECK(skew_depth(2, 1.0 / 32) == 5);
  CHECK(skew_depth(2, 0.03) == 6);
  CHECK(skew_depth(3, 0.1) == 3);
  CHECK(skew_depth(1, 0.3) == 1);
}
