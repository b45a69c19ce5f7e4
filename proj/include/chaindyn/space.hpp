#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chaindyn/bits.hpp"
#include "chaindyn/error.hpp"

namespace chaindyn {

using PointId = std::uint32_t;

class FiniteMetricSpace;

// Geometry descriptors remember how a space was built so that analytic maps
// can be evaluated on the underlying continuum before snapping to the grid.
struct CircleGeometry {
  std::size_t n = 0;
  double circumference = 1.0;
  double spacing() const { return circumference / static_cast<double>(n); }
};
struct UnionGeometry {
  std::vector<FiniteMetricSpace> parts;
  std::vector<std::size_t> offsets;  // offsets[p] = index of the first point of part p
  double cross_distance = 0.0;
};
struct ShiftGeometry {
  std::size_t m = 2;
  std::size_t depth = 1;
};
struct ProductGeometry {
  std::vector<FiniteMetricSpace> factors;  // exactly two; index = a * |b| + b
};
struct OdometerGeometry {
  std::vector<std::size_t> radices;  // J truncated; digit 0 is the least significant
};
struct ExplicitGeometry {};

using Geometry = std::variant<ExplicitGeometry, CircleGeometry, UnionGeometry, ShiftGeometry,
                              ProductGeometry, OdometerGeometry>;

// Immutable finite metric space. Copies share the underlying storage.
// Distances are kept in a dense matrix up to kDenseLimit points and evaluated
// from the geometry above that.
class FiniteMetricSpace {
 public:
  static constexpr std::size_t kDenseLimit = 4096;

  FiniteMetricSpace() = default;

  // Builds an explicit space from a row-major n x n matrix. No axioms are
  // checked here; use validate_metric.
  static FiniteMetricSpace from_matrix(std::size_t n, std::vector<double> dist,
                                       std::vector<std::string> labels = {});

  std::size_t size() const;
  double dist(PointId a, PointId b) const;
  double diameter() const;
  // Smallest positive pairwise distance (0 for a one-point space).
  double min_positive_distance() const;
  const Geometry& geometry() const;
  bool dense() const;
  std::string label(PointId p) const;

  // Closed ball {y : d(center, y) <= radius}.
  BitSet ball(PointId center, double radius) const;

  struct Impl;

 private:
  explicit FiniteMetricSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend FiniteMetricSpace make_space(Geometry geometry, std::vector<std::string> labels);
  std::shared_ptr<const Impl> impl_;
};

FiniteMetricSpace make_space(Geometry geometry, std::vector<std::string> labels = {});

// Strictly decreasing list of positive scales (epsilon or delta ladders).
class ScaleLadder {
 public:
  ScaleLadder() = default;
  explicit ScaleLadder(std::vector<double> values);
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double finest() const { return values_.back(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::vector<double> values_;
};

FiniteMetricSpace build_circle_grid(std::size_t n, double circumference = 1.0);
FiniteMetricSpace build_disjoint_union(const std::vector<FiniteMetricSpace>& parts,
                                       double cross_distance);
FiniteMetricSpace build_product(const FiniteMetricSpace& a, const FiniteMetricSpace& b);
FiniteMetricSpace build_shift_space(std::size_t m, std::size_t depth, const Budget& budget = {});
// Truncated adding-machine state space with the first-disagreement metric
// d(a,b) = 1 / (j_1 ... j_k), k the first differing digit.
FiniteMetricSpace build_odometer_space(const std::vector<std::size_t>& radices,
                                       const Budget& budget = {});

// Word <-> index helpers for shift spaces: index = sum w_i m^(depth-1-i).
std::vector<std::size_t> shift_word(const ShiftGeometry& g, std::size_t index);
std::size_t shift_index(const ShiftGeometry& g, const std::vector<std::size_t>& word);

struct ValidationReport {
  bool ok = true;
  std::string axiom;  // "nonnegativity" | "identity" | "symmetry" | "triangle"
  std::array<PointId, 3> witness{};
  bool exhaustive = true;
  std::string message;
};

ValidationReport validate_metric(const FiniteMetricSpace& s);

struct CoverCount {
  std::size_t count = 0;
  bool exact = false;
};

// N_delta: fewest subsets of diameter <= delta covering the space.
CoverCount covering_number(const FiniteMetricSpace& s, double delta);
// Fewest closed balls of the given radius (centred at points) covering the space.
CoverCount ball_covering_number(const FiniteMetricSpace& s, double radius);

inline constexpr std::size_t kExactCoverLimit = 16;

enum class CoverKind { Balls, Diameter };

struct BoxDimension {
  double lower_b = 0.0;
  double upper_b = 0.0;
  std::vector<std::pair<double, std::size_t>> curve;  // (delta, N_delta)
  bool exact = true;
  CoverKind kind = CoverKind::Balls;
};

// Min/max of consecutive-pair slopes of log N_delta against log(1/delta).
// Defaults to closed-ball covers of radius delta; box dimension is the same
// for either cover family.
BoxDimension box_dimension_estimate(const FiniteMetricSpace& s, const ScaleLadder& ladder,
                                    CoverKind kind = CoverKind::Balls);

}  // namespace chaindyn
