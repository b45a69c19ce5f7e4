#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaindyn/error.hpp"
#include "chaindyn/space.hpp"

namespace chaindyn {

// Words over [0, m). f_w composes with the rightmost letter acting first:
// f_{i0 i1 ... i(k-1)} = f_{i0} o f_{i1} o ... o f_{i(k-1)}.
// Chains and the word metric walk the letters in order i0, i1, ..., so the
// orbit segment attached to w is x, f_{i0}(x), f_{i1}f_{i0}(x), ...
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

// "0120" -> {0,1,2,0}; letters must be single digits.
Word parse_word(std::string_view digits);
std::string to_string(const Word& w);

struct Chain {
  Word word;
  std::vector<PointId> points;  // word.size() + 1 entries
};

// Map language. Circle maps act on the fractional coordinate t in [0, 1).
struct IdentityMap {};
struct TableMap {
  std::vector<PointId> table;
};
struct AffineMap {  // t -> a t + b mod 1, within each circle
  double a = 1.0;
  double b = 0.0;
};
struct CrossAffineMap {  // t -> a t + b mod 1, landing in circle (p + shift) mod parts
  double a = 1.0;
  double b = 0.0;
  std::size_t shift = 1;
};
struct PrependMap {  // s0 s1 ... -> c s0 s1 ... on a truncated shift space
  std::size_t symbol = 0;
};
struct OdometerMap {};  // add one with carry towards higher digits
struct MapSpec;
struct ProductMap {
  std::vector<MapSpec> factors;  // two entries, acting coordinatewise
};
struct MapSpec {
  std::variant<IdentityMap, TableMap, AffineMap, CrossAffineMap, PrependMap, OdometerMap,
               ProductMap>
      form;
  std::string text;  // canonical description for reports
};

std::string describe(const MapSpec& spec);

struct QuantizedMap {
  std::vector<PointId> table;
  double error = 0.0;  // max distance from the true image to the chosen point
};

// Nearest grid point to the true image; ties go to the lower point index.
QuantizedMap quantize_map(const FiniteMetricSpace& space, const MapSpec& spec);

class GeneratorSystem {
 public:
  GeneratorSystem() = default;
  GeneratorSystem(FiniteMetricSpace space, std::vector<std::vector<PointId>> tables,
                  double quantization_error = 0.0, std::vector<std::string> names = {});

  const FiniteMetricSpace& space() const { return space_; }
  std::size_t points() const { return space_.size(); }
  std::size_t m() const { return tables_.size(); }
  const std::vector<PointId>& table(std::size_t i) const { return tables_[i]; }
  const std::vector<std::vector<PointId>>& tables() const { return tables_; }
  PointId apply(std::size_t i, PointId x) const { return tables_[i][x]; }
  double quantization_error() const { return quantization_error_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  FiniteMetricSpace space_;
  std::vector<std::vector<PointId>> tables_;
  double quantization_error_ = 0.0;
  std::vector<std::string> names_;
};

GeneratorSystem from_map_tables(const FiniteMetricSpace& space,
                                std::vector<std::vector<PointId>> tables);
GeneratorSystem from_map_specs(const FiniteMetricSpace& space, const std::vector<MapSpec>& specs);

PointId apply_word(const GeneratorSystem& g, const Word& w, PointId x);
// x, f_{i0}(x), f_{i1} f_{i0}(x), ..., |w| + 1 points.
std::vector<PointId> word_orbit(const GeneratorSystem& g, const Word& w, PointId x);
// Bowen-type metric: max over the orbit segment above, identity term included.
double word_metric_dw(const GeneratorSystem& g, const Word& w, PointId x, PointId y);

// All m^k words of length k in lexicographic order.
std::vector<Word> all_words(std::size_t m, std::size_t k);

// One generator per length-k word in lexicographic order, each f_w.
GeneratorSystem power_system(const GeneratorSystem& g, std::size_t k, const Budget& budget = {});
// Generator j * h.m() + k acts as (f_j x g_k) on build_product(space_g, space_h).
GeneratorSystem product_system(const GeneratorSystem& g, const GeneratorSystem& h,
                               const Budget& budget = {});
// Branch s sends (w, x) to (sigma(w) s, f_{w0}(x)) on Sigma_m(depth) x X.
// For m = 1 the symbolic factor is a single point.
GeneratorSystem skew_product(const GeneratorSystem& g, std::size_t depth,
                             const Budget& budget = {});
// Smallest depth with m^-depth <= delta (1 for m = 1 or delta >= 1).
std::size_t skew_depth(std::size_t m, double delta);

}  // namespace chaindyn
