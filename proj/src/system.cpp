#include "chaindyn/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chaindyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Nearest index on an n-point circle to fractional position u in [0, 1).
// Returns (index, distance in units of grid steps).
std::pair<std::size_t, double> snap(double u, std::size_t n) {
  double p = u * static_cast<double>(n);
  p = std::fmod(p, static_cast<double>(n));
  if (p < 0) p += static_cast<double>(n);
  const double lo = std::floor(p);
  const double d_lo = p - lo;
  const double d_hi = 1.0 - d_lo;
  std::size_t a = static_cast<std::size_t>(lo) % n;
  std::size_t b = (a + 1) % n;
  constexpr double tie = 1e-12;
  if (std::abs(d_lo - d_hi) <= tie) return {std::min(a, b), d_lo};
  return d_lo < d_hi ? std::pair{a, d_lo} : std::pair{b, d_hi};
}

double affine_image(double a, double b, std::size_t k, std::size_t n) {
  // a t + b with t = k / n, kept in grid units to avoid drift.
  return (a * static_cast<double>(k) + b * static_cast<double>(n)) / static_cast<double>(n);
}

const CircleGeometry& circle_part(const FiniteMetricSpace& s, const char* what) {
  const auto* c = std::get_if<CircleGeometry>(&s.geometry());
  if (!c) fail(ErrorKind::UnsupportedMap, std::string(what) + " needs circle-grid parts");
  return *c;
}

QuantizedMap quantize_affine_parts(const FiniteMetricSpace& space, double a, double b,
                                   std::size_t shift) {
  QuantizedMap out;
  out.table.resize(space.size());
  if (const auto* c = std::get_if<CircleGeometry>(&space.geometry())) {
    for (std::size_t k = 0; k < c->n; ++k) {
      auto [j, steps] = snap(affine_image(a, b, k, c->n), c->n);
      out.table[k] = static_cast<PointId>(j);
      out.error = std::max(out.error, steps * c->spacing());
    }
    return out;
  }
  const auto* u = std::get_if<UnionGeometry>(&space.geometry());
  if (!u) fail(ErrorKind::UnsupportedMap, "affine maps need a circle grid or a union of circles");
  const std::size_t parts = u->parts.size();
  for (std::size_t p = 0; p < parts; ++p) {
    const auto& src = circle_part(u->parts[p], "affine map");
    const std::size_t q = (p + shift) % parts;
    const auto& dst = circle_part(u->parts[q], "affine map");
    for (std::size_t k = 0; k < src.n; ++k) {
      const double t = affine_image(a, b, k, src.n);
      auto [j, steps] = snap(t, dst.n);
      out.table[u->offsets[p] + k] = static_cast<PointId>(u->offsets[q] + j);
      out.error = std::max(out.error, steps * dst.spacing());
    }
  }
  return out;
}

}  // namespace

Word parse_word(std::string_view digits) {
  Word w;
  for (char c : digits) {
    if (c < '0' || c > '9') fail(ErrorKind::InvalidArgument, "word letters must be digits");
    w.push_back(static_cast<Letter>(c - '0'));
  }
  return w;
}

std::string to_string(const Word& w) {
  std::string s;
  for (auto l : w) {
    if (!s.empty() && l >= 10) s += '.';
    s += std::to_string(l);
  }
  return s;
}

std::string describe(const MapSpec& spec) {
  if (!spec.text.empty()) return spec.text;
  return std::visit(
      overloaded{
          [](const IdentityMap&) { return std::string("identity"); },
          [](const TableMap& t) { return "table[" + std::to_string(t.table.size()) + "]"; },
          [](const AffineMap& m) { return fmt(m.a) + "x+" + fmt(m.b); },
          [](const CrossAffineMap& m) {
            return "cross(" + fmt(m.a) + "x+" + fmt(m.b) + "," + std::to_string(m.shift) + ")";
          },
          [](const PrependMap& m) { return "prepend(" + std::to_string(m.symbol) + ")"; },
          [](const OdometerMap&) { return std::string("odometer"); },
          [](const ProductMap& m) {
            std::string s = "product(";
            for (std::size_t i = 0; i < m.factors.size(); ++i)
              s += (i ? "," : "") + describe(m.factors[i]);
            return s + ")";
          },
      },
      spec.form);
}

QuantizedMap quantize_map(const FiniteMetricSpace& space, const MapSpec& spec) {
  const std::size_t n = space.size();
  return std::visit(
      overloaded{
          [&](const IdentityMap&) {
            QuantizedMap q;
            q.table.resize(n);
            for (std::size_t x = 0; x < n; ++x) q.table[x] = static_cast<PointId>(x);
            return q;
          },
          [&](const TableMap& t) {
            if (t.table.size() != n)
              fail(ErrorKind::InvalidArgument, "map table length differs from point count");
            for (auto y : t.table)
              if (y >= n) fail(ErrorKind::InvalidArgument, "map table entry out of range");
            return QuantizedMap{t.table, 0.0};
          },
          [&](const AffineMap& m) { return quantize_affine_parts(space, m.a, m.b, 0); },
          [&](const CrossAffineMap& m) {
            if (!std::holds_alternative<UnionGeometry>(space.geometry()))
              fail(ErrorKind::UnsupportedMap, "cross maps need a disjoint union of circles");
            return quantize_affine_parts(space, m.a, m.b, m.shift);
          },
          [&](const PrependMap& m) {
            const auto* s = std::get_if<ShiftGeometry>(&space.geometry());
            if (!s) fail(ErrorKind::UnsupportedMap, "prepend maps need a shift space");
            if (m.symbol >= s->m) fail(ErrorKind::InvalidArgument, "prepend symbol out of range");
            const std::size_t top = n / s->m;  // m^(depth-1)
            QuantizedMap q;
            q.table.resize(n);
            for (std::size_t w = 0; w < n; ++w)
              q.table[w] = static_cast<PointId>(m.symbol * top + w / s->m);
            return q;
          },
          [&](const OdometerMap&) {
            if (!std::holds_alternative<OdometerGeometry>(space.geometry()))
              fail(ErrorKind::UnsupportedMap, "odometer map needs an odometer space");
            // Digit 0 is least significant, so add-one-with-carry is index + 1 mod n.
            QuantizedMap q;
            q.table.resize(n);
            for (std::size_t x = 0; x < n; ++x) q.table[x] = static_cast<PointId>((x + 1) % n);
            return q;
          },
          [&](const ProductMap& m) {
            const auto* p = std::get_if<ProductGeometry>(&space.geometry());
            if (!p) fail(ErrorKind::UnsupportedMap, "product maps need a product space");
            if (m.factors.size() != 2)
              fail(ErrorKind::InvalidArgument, "product maps take exactly two factors");
            const auto qa = quantize_map(p->factors[0], m.factors[0]);
            const auto qb = quantize_map(p->factors[1], m.factors[1]);
            const std::size_t nb = p->factors[1].size();
            QuantizedMap q;
            q.table.resize(n);
            for (std::size_t x = 0; x < n; ++x)
              q.table[x] = static_cast<PointId>(qa.table[x / nb] * nb + qb.table[x % nb]);
            q.error = std::max(qa.error, qb.error);
            return q;
          },
      },
      spec.form);
}

GeneratorSystem::GeneratorSystem(FiniteMetricSpace space, std::vector<std::vector<PointId>> tables,
                                 double quantization_error, std::vector<std::string> names)
    : space_(std::move(space)),
      tables_(std::move(tables)),
      quantization_error_(quantization_error),
      names_(std::move(names)) {
  if (tables_.empty()) fail(ErrorKind::InvalidArgument, "a system needs at least one generator");
  const std::size_t n = space_.size();
  for (const auto& t : tables_) {
    if (t.size() != n) fail(ErrorKind::InvalidArgument, "map table length differs from point count");
    for (auto y : t)
      if (y >= n) fail(ErrorKind::InvalidArgument, "map table entry out of range");
  }
  if (names_.empty())
    for (std::size_t i = 0; i < tables_.size(); ++i) names_.push_back("f" + std::to_string(i));
  if (names_.size() != tables_.size())
    fail(ErrorKind::InvalidArgument, "generator names must match the generator count");
}

GeneratorSystem from_map_tables(const FiniteMetricSpace& space,
                                std::vector<std::vector<PointId>> tables) {
  return GeneratorSystem(space, std::move(tables), 0.0);
}

GeneratorSystem from_map_specs(const FiniteMetricSpace& space, const std::vector<MapSpec>& specs) {
  std::vector<std::vector<PointId>> tables;
  std::vector<std::string> names;
  double err = 0.0;
  for (const auto& s : specs) {
    auto q = quantize_map(space, s);
    err = std::max(err, q.error);
    tables.push_back(std::move(q.table));
    names.push_back(describe(s));
  }
  return GeneratorSystem(space, std::move(tables), err, std::move(names));
}

PointId apply_word(const GeneratorSystem& g, const Word& w, PointId x) {
  if (w.empty()) fail(ErrorKind::InvalidArgument, "apply_word needs a nonempty word");
  for (std::size_t j = w.size(); j-- > 0;) {
    if (w[j] >= g.m()) fail(ErrorKind::InvalidArgument, "word letter out of range");
    x = g.apply(w[j], x);
  }
  return x;
}

std::vector<PointId> word_orbit(const GeneratorSystem& g, const Word& w, PointId x) {
  std::vector<PointId> orbit{x};
  for (auto letter : w) {
    if (letter >= g.m()) fail(ErrorKind::InvalidArgument, "word letter out of range");
    x = g.apply(letter, x);
    orbit.push_back(x);
  }
  return orbit;
}

double word_metric_dw(const GeneratorSystem& g, const Word& w, PointId x, PointId y) {
  const auto& s = g.space();
  double d = s.dist(x, y);
  for (auto letter : w) {
    if (letter >= g.m()) fail(ErrorKind::InvalidArgument, "word letter out of range");
    x = g.apply(letter, x);
    y = g.apply(letter, y);
    d = std::max(d, s.dist(x, y));
  }
  return d;
}

std::vector<Word> all_words(std::size_t m, std::size_t k) {
  std::vector<Word> out;
  Word w(k, 0);
  while (true) {
    out.push_back(w);
    std::size_t i = k;
    while (i > 0 && w[i - 1] + 1 == m) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  return out;
}

GeneratorSystem power_system(const GeneratorSystem& g, std::size_t k, const Budget& budget) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "power k must be positive");
  std::size_t count = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (count > budget.max_generators / g.m())
      fail(ErrorKind::Resource, "m^k exceeds the generator budget");
    count *= g.m();
  }
  if (k == 1) return g;
  const std::size_t n = g.points();
  std::vector<std::vector<PointId>> tables;
  std::vector<std::string> names;
  tables.reserve(count);
  for (const auto& w : all_words(g.m(), k)) {
    std::vector<PointId> t(n);
    for (std::size_t x = 0; x < n; ++x) t[x] = apply_word(g, w, static_cast<PointId>(x));
    tables.push_back(std::move(t));
    names.push_back("w" + to_string(w));
  }
  return GeneratorSystem(g.space(), std::move(tables), g.quantization_error(), std::move(names));
}

GeneratorSystem product_system(const GeneratorSystem& g, const GeneratorSystem& h,
                               const Budget& budget) {
  const std::size_t na = g.points(), nb = h.points();
  if (nb != 0 && na > budget.max_points / nb)
    fail(ErrorKind::Resource, "product space exceeds the point budget");
  if (g.m() * h.m() > budget.max_generators)
    fail(ErrorKind::Resource, "product generator count exceeds the budget");
  auto space = build_product(g.space(), h.space());
  std::vector<std::vector<PointId>> tables;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < g.m(); ++j)
    for (std::size_t k = 0; k < h.m(); ++k) {
      std::vector<PointId> t(na * nb);
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b)
          t[a * nb + b] = static_cast<PointId>(g.apply(j, static_cast<PointId>(a)) * nb +
                                               h.apply(k, static_cast<PointId>(b)));
      tables.push_back(std::move(t));
      names.push_back(g.names()[j] + "x" + h.names()[k]);
    }
  return GeneratorSystem(space, std::move(tables),
                         std::max(g.quantization_error(), h.quantization_error()),
                         std::move(names));
}

std::size_t skew_depth(std::size_t m, double delta) {
  if (m < 2 || delta >= 1.0) return 1;
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "skew depth needs delta > 0");
  std::size_t depth = 0;
  double scale = 1.0;
  while (scale > delta) {
    scale /= static_cast<double>(m);
    ++depth;
  }
  return std::max<std::size_t>(depth, 1);
}

GeneratorSystem skew_product(const GeneratorSystem& g, std::size_t depth, const Budget& budget) {
  if (depth == 0) fail(ErrorKind::InvalidArgument, "skew product depth must be positive");
  const std::size_t m = g.m();
  const std::size_t nx = g.points();
  FiniteMetricSpace symbols;
  std::size_t ns = 1;
  if (m == 1) {
    symbols = FiniteMetricSpace::from_matrix(1, {0.0}, {"0"});
  } else {
    symbols = build_shift_space(m, depth, budget);
    ns = symbols.size();
  }
  if (ns > budget.max_points / nx) fail(ErrorKind::Resource, "skew product exceeds the point budget");
  auto space = build_product(symbols, g.space());
  const std::size_t top = ns / m;  // m^(depth-1); 1 when m = 1
  std::vector<std::vector<PointId>> tables;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<PointId> t(ns * nx);
    for (std::size_t w = 0; w < ns; ++w) {
      const std::size_t lead = m == 1 ? 0 : w / top;
      const std::size_t shifted = m == 1 ? 0 : (w % top) * m + s;
      for (std::size_t x = 0; x < nx; ++x)
        t[w * nx + x] = static_cast<PointId>(shifted * nx + g.apply(lead, static_cast<PointId>(x)));
    }
    tables.push_back(std::move(t));
    names.push_back("branch" + std::to_string(s));
  }
  return GeneratorSystem(space, std::move(tables), g.quantization_error(), std::move(names));
}

}  // namespace chaindyn
