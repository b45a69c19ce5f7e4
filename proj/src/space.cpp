#include "chaindyn/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "chaindyn/kernels.hpp"

namespace chaindyn {

struct FiniteMetricSpace::Impl {
  Geometry geometry;
  std::size_t n = 0;
  std::vector<double> dense;  // empty when evaluated on demand
  double diameter = 0.0;
  double min_positive = 0.0;
  std::vector<std::string> labels;
  std::vector<double> scales;  // shift / odometer: scale of first disagreement at k
};

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t geometry_size(const Geometry& g) {
  return std::visit(
      overloaded{
          [](const ExplicitGeometry&) -> std::size_t { return 0; },
          [](const CircleGeometry& c) { return c.n; },
          [](const UnionGeometry& u) {
            std::size_t n = 0;
            for (const auto& p : u.parts) n += p.size();
            return n;
          },
          [](const ShiftGeometry& s) {
            std::size_t n = 1;
            for (std::size_t i = 0; i < s.depth; ++i) n *= s.m;
            return n;
          },
          [](const ProductGeometry& p) { return p.factors[0].size() * p.factors[1].size(); },
          [](const OdometerGeometry& o) {
            std::size_t n = 1;
            for (auto j : o.radices) n *= j;
            return n;
          },
      },
      g);
}

double geometric_dist(const FiniteMetricSpace::Impl& impl, PointId a, PointId b) {
  if (a == b) return 0.0;
  return std::visit(
      overloaded{
          [&](const ExplicitGeometry&) { return impl.dense[std::size_t{a} * impl.n + b]; },
          [&](const CircleGeometry& c) {
            const std::size_t diff = a > b ? a - b : b - a;
            const std::size_t steps = std::min(diff, c.n - diff);
            return static_cast<double>(steps) * c.spacing();
          },
          [&](const UnionGeometry& u) {
            const auto pa = static_cast<std::size_t>(
                std::upper_bound(u.offsets.begin(), u.offsets.end(), std::size_t{a}) -
                u.offsets.begin() - 1);
            const auto pb = static_cast<std::size_t>(
                std::upper_bound(u.offsets.begin(), u.offsets.end(), std::size_t{b}) -
                u.offsets.begin() - 1);
            if (pa != pb) return u.cross_distance;
            return u.parts[pa].dist(static_cast<PointId>(a - u.offsets[pa]),
                                    static_cast<PointId>(b - u.offsets[pa]));
          },
          [&](const ShiftGeometry& s) {
            // Most significant digit is the first symbol.
            std::size_t place = impl.n / s.m;
            for (std::size_t k = 0; k < s.depth; ++k, place /= s.m) {
              if ((a / place) % s.m != (b / place) % s.m) return impl.scales[k];
            }
            return 0.0;
          },
          [&](const ProductGeometry& p) {
            const std::size_t nb = p.factors[1].size();
            return std::max(p.factors[0].dist(static_cast<PointId>(a / nb),
                                              static_cast<PointId>(b / nb)),
                            p.factors[1].dist(static_cast<PointId>(a % nb),
                                              static_cast<PointId>(b % nb)));
          },
          [&](const OdometerGeometry& o) {
            std::size_t x = a, y = b;
            for (std::size_t k = 0; k < o.radices.size(); ++k) {
              if (x % o.radices[k] != y % o.radices[k]) return impl.scales[k];
              x /= o.radices[k];
              y /= o.radices[k];
            }
            return 0.0;
          },
      },
      impl.geometry);
}

// Diameter and smallest positive distance from the construction, for spaces
// too large to scan.
std::pair<double, double> structural_extremes(const Geometry& g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto fix = [](double mn) { return std::isinf(mn) ? 0.0 : mn; };
  return std::visit(
      overloaded{
          [&](const ExplicitGeometry&) { return std::pair{0.0, 0.0}; },
          [&](const CircleGeometry& c) {
            if (c.n < 2) return std::pair{0.0, 0.0};
            return std::pair{static_cast<double>(c.n / 2) * c.spacing(), c.spacing()};
          },
          [&](const UnionGeometry& u) {
            double diam = 0.0, mn = inf;
            for (const auto& p : u.parts) {
              diam = std::max(diam, p.diameter());
              if (p.size() > 1) mn = std::min(mn, p.min_positive_distance());
            }
            if (u.parts.size() > 1) {
              diam = std::max(diam, u.cross_distance);
              mn = std::min(mn, u.cross_distance);
            }
            return std::pair{diam, fix(mn)};
          },
          [&](const ShiftGeometry& s) {
            if (s.depth == 0) return std::pair{0.0, 0.0};
            return std::pair{1.0, 1.0 / std::pow(static_cast<double>(s.m),
                                                 static_cast<double>(s.depth - 1))};
          },
          [&](const ProductGeometry& p) {
            double diam = 0.0, mn = inf;
            for (const auto& f : p.factors) {
              diam = std::max(diam, f.diameter());
              if (f.size() > 1) mn = std::min(mn, f.min_positive_distance());
            }
            return std::pair{diam, fix(mn)};
          },
          [&](const OdometerGeometry& o) {
            if (o.radices.empty()) return std::pair{0.0, 0.0};
            double prod = 1.0;
            for (std::size_t k = 0; k + 1 < o.radices.size(); ++k)
              prod *= static_cast<double>(o.radices[k]);
            return std::pair{1.0, 1.0 / prod};
          },
      },
      g);
}

std::string join_word(const std::vector<std::size_t>& w) {
  std::string s;
  for (auto c : w) s += std::to_string(c);
  return s;
}

}  // namespace

FiniteMetricSpace make_space(Geometry geometry, std::vector<std::string> labels) {
  auto impl = std::make_shared<FiniteMetricSpace::Impl>();
  impl->geometry = std::move(geometry);
  impl->n = geometry_size(impl->geometry);
  impl->labels = std::move(labels);
  if (const auto* s = std::get_if<ShiftGeometry>(&impl->geometry)) {
    double scale = 1.0;
    for (std::size_t k = 0; k < s->depth; ++k) {
      impl->scales.push_back(scale);
      scale /= static_cast<double>(s->m);
    }
  } else if (const auto* o = std::get_if<OdometerGeometry>(&impl->geometry)) {
    double scale = 1.0;
    for (auto j : o->radices) {
      impl->scales.push_back(scale);
      scale /= static_cast<double>(j);
    }
  }

  const std::size_t n = impl->n;
  if (n <= FiniteMetricSpace::kDenseLimit) {
    impl->dense.assign(n * n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        impl->dense[a * n + b] =
            geometric_dist(*impl, static_cast<PointId>(a), static_cast<PointId>(b));
    double diam = 0.0, mn = std::numeric_limits<double>::infinity();
    for (double d : impl->dense) {
      diam = std::max(diam, d);
      if (d > 0.0) mn = std::min(mn, d);
    }
    impl->diameter = diam;
    impl->min_positive = std::isinf(mn) ? 0.0 : mn;
  } else {
    auto [diam, mn] = structural_extremes(impl->geometry);
    impl->diameter = diam;
    impl->min_positive = mn;
  }
  return FiniteMetricSpace(std::move(impl));
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::size_t n, std::vector<double> dist,
                                                 std::vector<std::string> labels) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "space must have at least one point");
  if (dist.size() != n * n)
    fail(ErrorKind::InvalidArgument, "distance matrix must have n*n entries");
  if (n > kDenseLimit)
    fail(ErrorKind::Resource, "explicit spaces are limited to " + std::to_string(kDenseLimit) +
                                  " points");
  auto impl = std::make_shared<Impl>();
  impl->geometry = ExplicitGeometry{};
  impl->n = n;
  impl->dense = std::move(dist);
  impl->labels = std::move(labels);
  double diam = 0.0, mn = std::numeric_limits<double>::infinity();
  for (double d : impl->dense) {
    diam = std::max(diam, d);
    if (d > 0.0) mn = std::min(mn, d);
  }
  impl->diameter = diam;
  impl->min_positive = std::isinf(mn) ? 0.0 : mn;
  return FiniteMetricSpace(std::move(impl));
}

std::size_t FiniteMetricSpace::size() const { return impl_ ? impl_->n : 0; }

double FiniteMetricSpace::dist(PointId a, PointId b) const {
  if (!impl_->dense.empty()) return impl_->dense[std::size_t{a} * impl_->n + b];
  return geometric_dist(*impl_, a, b);
}

double FiniteMetricSpace::diameter() const { return impl_->diameter; }
double FiniteMetricSpace::min_positive_distance() const { return impl_->min_positive; }
const Geometry& FiniteMetricSpace::geometry() const { return impl_->geometry; }
bool FiniteMetricSpace::dense() const { return !impl_->dense.empty(); }

std::string FiniteMetricSpace::label(PointId p) const {
  if (p < impl_->labels.size()) return impl_->labels[p];
  return std::visit(
      overloaded{
          [&](const ShiftGeometry& s) { return join_word(shift_word(s, p)); },
          [&](const ProductGeometry& g) {
            const std::size_t nb = g.factors[1].size();
            return "(" + g.factors[0].label(static_cast<PointId>(p / nb)) + "," +
                   g.factors[1].label(static_cast<PointId>(p % nb)) + ")";
          },
          [&](const UnionGeometry& u) {
            const auto part = static_cast<std::size_t>(
                std::upper_bound(u.offsets.begin(), u.offsets.end(), std::size_t{p}) -
                u.offsets.begin() - 1);
            return "p" + std::to_string(part) + ":" +
                   u.parts[part].label(static_cast<PointId>(p - u.offsets[part]));
          },
          [&](const auto&) { return std::to_string(p); },
      },
      impl_->geometry);
}

BitSet FiniteMetricSpace::ball(PointId center, double radius) const {
  const std::size_t n = size();
  BitSet out(n);
  if (const auto* p = std::get_if<ProductGeometry>(&impl_->geometry); p && !dense()) {
    const std::size_t nb = p->factors[1].size();
    const auto ba = p->factors[0].ball(static_cast<PointId>(center / nb), radius);
    const auto bb = p->factors[1].ball(static_cast<PointId>(center % nb), radius).indices();
    ba.for_each([&](std::size_t a) {
      for (auto b : bb) out.set(a * nb + b);
    });
    return out;
  }
  if (dense()) {
    const double* row = impl_->dense.data() + std::size_t{center} * n;
    for (std::size_t y = 0; y < n; ++y)
      if (row[y] <= radius) out.set(y);
    return out;
  }
  for (std::size_t y = 0; y < n; ++y)
    if (dist(center, static_cast<PointId>(y)) <= radius) out.set(y);
  return out;
}

ScaleLadder::ScaleLadder(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorKind::InvalidArgument, "ladder must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0)) fail(ErrorKind::InvalidArgument, "ladder values must be positive");
    if (i > 0 && !(values_[i] < values_[i - 1]))
      fail(ErrorKind::InvalidArgument, "ladder must be strictly decreasing");
  }
}

FiniteMetricSpace build_circle_grid(std::size_t n, double circumference) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "circle grid needs n >= 2");
  if (!(circumference > 0.0)) fail(ErrorKind::InvalidArgument, "circumference must be positive");
  return make_space(CircleGeometry{n, circumference});
}

FiniteMetricSpace build_disjoint_union(const std::vector<FiniteMetricSpace>& parts,
                                       double cross_distance) {
  if (parts.empty()) fail(ErrorKind::InvalidArgument, "union needs at least one part");
  if (parts.size() == 1) return parts.front();
  double max_diam = 0.0;
  for (const auto& p : parts) max_diam = std::max(max_diam, p.diameter());
  if (!(cross_distance > 0.0) || cross_distance < max_diam / 2.0) {
    std::ostringstream os;
    os << "cross_distance " << cross_distance << " below max part diameter / 2 = "
       << max_diam / 2.0;
    fail(ErrorKind::MetricViolation, os.str());
  }
  UnionGeometry g;
  g.parts = parts;
  g.cross_distance = cross_distance;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    g.offsets.push_back(offset);
    offset += p.size();
  }
  return make_space(std::move(g));
}

FiniteMetricSpace build_product(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  return make_space(ProductGeometry{{a, b}});
}

FiniteMetricSpace build_shift_space(std::size_t m, std::size_t depth, const Budget& budget) {
  if (m < 2) fail(ErrorKind::InvalidArgument, "shift space needs m >= 2");
  if (depth == 0) fail(ErrorKind::InvalidArgument, "shift space depth must be positive");
  std::size_t n = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    if (n > budget.max_points / m)
      fail(ErrorKind::Resource, "shift space m^depth exceeds point budget");
    n *= m;
  }
  return make_space(ShiftGeometry{m, depth});
}

FiniteMetricSpace build_odometer_space(const std::vector<std::size_t>& radices,
                                       const Budget& budget) {
  if (radices.empty()) fail(ErrorKind::InvalidArgument, "odometer needs at least one digit");
  std::size_t n = 1;
  for (auto j : radices) {
    if (j < 2) fail(ErrorKind::InvalidArgument, "odometer radices must be >= 2");
    if (n > budget.max_points / j) fail(ErrorKind::Resource, "odometer exceeds point budget");
    n *= j;
  }
  return make_space(OdometerGeometry{radices});
}

std::vector<std::size_t> shift_word(const ShiftGeometry& g, std::size_t index) {
  std::vector<std::size_t> w(g.depth);
  for (std::size_t i = g.depth; i-- > 0;) {
    w[i] = index % g.m;
    index /= g.m;
  }
  return w;
}

std::size_t shift_index(const ShiftGeometry& g, const std::vector<std::size_t>& word) {
  std::size_t idx = 0;
  for (auto c : word) idx = idx * g.m + c;
  return idx;
}

ValidationReport validate_metric(const FiniteMetricSpace& s) {
  ValidationReport rep;
  const std::size_t n = s.size();
  auto violation = [&](const char* axiom, PointId a, PointId b, PointId c, std::string msg) {
    rep.ok = false;
    rep.axiom = axiom;
    rep.witness = {a, b, c};
    rep.message = std::move(msg);
    return rep;
  };
  for (PointId a = 0; a < n; ++a) {
    for (PointId b = 0; b < n; ++b) {
      const double d = s.dist(a, b);
      if (d < 0.0 || std::isnan(d)) return violation("nonnegativity", a, b, b, "negative distance");
      if (a == b && d != 0.0) return violation("identity", a, a, a, "d(x,x) != 0");
      if (a != b && d == 0.0)
        return violation("identity", a, b, a, "distinct points at distance 0");
      if (d != s.dist(b, a)) return violation("symmetry", a, b, a, "d(x,y) != d(y,x)");
    }
  }
  const double tol = 1e-12 * std::max(1.0, s.diameter());
  auto check = [&](PointId a, PointId b, PointId c) {
    return s.dist(a, c) <= s.dist(a, b) + s.dist(b, c) + tol;
  };
  constexpr std::size_t kExhaustiveLimit = 512;
  if (n <= kExhaustiveLimit) {
    for (PointId a = 0; a < n; ++a)
      for (PointId b = 0; b < n; ++b)
        for (PointId c = 0; c < n; ++c)
          if (!check(a, b, c))
            return violation("triangle", a, b, c, "d(x,z) > d(x,y) + d(y,z)");
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(0);
    for (std::size_t t = 0; t < 2'000'000; ++t) {
      const auto a = static_cast<PointId>(rng() % n);
      const auto b = static_cast<PointId>(rng() % n);
      const auto c = static_cast<PointId>(rng() % n);
      if (!check(a, b, c)) return violation("triangle", a, b, c, "d(x,z) > d(x,y) + d(y,z)");
    }
  }
  return rep;
}

namespace {

CoverCount exact_diameter_cover(const FiniteMetricSpace& s, double delta) {
  const std::size_t n = s.size();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<char> ok(std::size_t{full} + 1, 0);
  ok[0] = 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const auto low = static_cast<PointId>(std::countr_zero(mask));
    const std::uint32_t rest = mask & (mask - 1);
    if (!ok[rest]) continue;
    bool good = true;
    for (std::uint32_t r = rest; r && good; r &= r - 1)
      good = s.dist(low, static_cast<PointId>(std::countr_zero(r))) <= delta;
    ok[mask] = good;
  }
  // Subsets of a valid set stay valid, so a minimum cover can be taken as a
  // partition; the lowest element of each remainder picks its block.
  std::vector<std::uint8_t> dp(std::size_t{full} + 1, 0xff);
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t lowbit = mask & (~mask + 1);
    std::uint8_t best = 0xff;
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & lowbit) || !ok[sub]) continue;
      best = std::min<std::uint8_t>(best, static_cast<std::uint8_t>(dp[mask ^ sub] + 1));
    }
    dp[mask] = best;
  }
  return {dp[full], true};
}

CoverCount greedy_diameter_cover(const FiniteMetricSpace& s, double delta) {
  const std::size_t n = s.size();
  std::vector<char> covered(n, 0);
  std::vector<double> seed_dist(n, std::numeric_limits<double>::infinity());
  std::size_t remaining = n, count = 0;
  std::vector<PointId> order(n), members;
  while (remaining > 0) {
    // Farthest uncovered point from the seeds chosen so far.
    PointId seed = 0;
    double best = -1.0;
    for (PointId y = 0; y < n; ++y)
      if (!covered[y] && seed_dist[y] > best) {
        best = seed_dist[y];
        seed = y;
      }
    std::iota(order.begin(), order.end(), PointId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](PointId a, PointId b) { return s.dist(seed, a) < s.dist(seed, b); });
    members.clear();
    for (PointId y : order) {
      if (covered[y]) continue;
      if (s.dist(seed, y) > delta) break;
      bool fits = true;
      for (PointId z : members)
        if (s.dist(y, z) > delta) {
          fits = false;
          break;
        }
      if (!fits) continue;
      members.push_back(y);
    }
    for (PointId y : members) {
      covered[y] = 1;
      --remaining;
    }
    for (PointId y = 0; y < n; ++y) seed_dist[y] = std::min(seed_dist[y], s.dist(seed, y));
    ++count;
  }
  return {count, false};
}

}  // namespace

CoverCount covering_number(const FiniteMetricSpace& s, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "delta must be positive");
  if (delta >= s.diameter()) return {1, true};
  if (delta < s.min_positive_distance()) return {s.size(), true};
  if (s.size() <= kExactCoverLimit) return exact_diameter_cover(s, delta);
  return greedy_diameter_cover(s, delta);
}

CoverCount ball_covering_number(const FiniteMetricSpace& s, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "radius must be positive");
  const std::size_t n = s.size();
  if (radius < s.min_positive_distance()) return {n, true};
  BitMatrix balls(n);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < n; ++c) balls.set_row(c, s.ball(static_cast<PointId>(c), radius));

  if (n <= kExactCoverLimit) {
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<std::uint32_t> rows(n);
    for (std::size_t c = 0; c < n; ++c) rows[c] = static_cast<std::uint32_t>(balls.row_words(c)[0]);
    std::vector<std::uint32_t> cover(std::size_t{full} + 1, 0);
    std::size_t best = n;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      cover[mask] = cover[mask & (mask - 1)] | rows[static_cast<std::size_t>(std::countr_zero(mask))];
      if (cover[mask] == full)
        best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
    }
    return {best, true};
  }

  BitSet uncovered = BitSet::full(n);
  std::size_t count = 0;
  while (!uncovered.none()) {
    const auto [center, gain] = kernels::best_cover_center(balls, uncovered);
    (void)gain;
    auto row = balls.row_words(center);
    auto w = uncovered.words();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] &= ~row[i];
    ++count;
  }
  return {count, false};
}

BoxDimension box_dimension_estimate(const FiniteMetricSpace& s, const ScaleLadder& ladder,
                                    CoverKind kind) {
  BoxDimension out;
  out.kind = kind;
  if (s.size() <= 1) {
    for (double d : ladder) out.curve.emplace_back(d, 1);
    return out;
  }
  if (ladder.size() < 2)
    fail(ErrorKind::InvalidArgument, "box dimension needs at least two ladder values");
  for (double d : ladder)
    if (!(d > s.min_positive_distance()) || !(d < s.diameter()))
      fail(ErrorKind::InvalidArgument,
           "ladder value outside (min positive distance, diameter)");
  for (double d : ladder) {
    const CoverCount c = kind == CoverKind::Balls ? ball_covering_number(s, d)
                                                  : covering_number(s, d);
    out.exact = out.exact && c.exact;
    out.curve.emplace_back(d, c.count);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < out.curve.size(); ++i) {
    const auto [d0, n0] = out.curve[i];
    const auto [d1, n1] = out.curve[i + 1];
    const double slope = (std::log(static_cast<double>(n1)) - std::log(static_cast<double>(n0))) /
                         (std::log(1.0 / d1) - std::log(1.0 / d0));
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  }
  out.lower_b = lo;
  out.upper_b = hi;
  return out;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::MetricViolation: return "metric-violation";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::UnsupportedMap: return "unsupported-map";
    case ErrorKind::NotTransitive: return "not-transitive";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace chaindyn
