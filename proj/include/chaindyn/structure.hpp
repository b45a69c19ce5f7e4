#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chaindyn/graph.hpp"

namespace chaindyn {

// Digraph period of the union graph. Throws NotTransitive unless strongly
// connected.
std::size_t period_k(const ChainGraph& cg);

enum class DecompositionCase { Mixing, Periodic, DiagnosticOnly };
const char* to_string(DecompositionCase c);

struct DecompositionReport {
  double epsilon = 0.0;
  std::size_t k = 1;
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> class_sizes;
  bool permutation_ok = false;   // every union edge advances the class by one
  bool classes_verified = false;  // residues of walk lengths agree with class_of
  std::size_t verified_sources = 0;
  std::vector<bool> per_class_mixing;
  bool power_fallback = false;  // U^k used because m^k exceeded the generator budget
  DecompositionCase kind = DecompositionCase::Mixing;
};

DecompositionReport epsilon_classes(const ChainGraph& cg, const Budget& budget = {},
                                    ExecPolicy policy = ExecPolicy::Parallel);

// delta = factor * epsilon along a ladder
struct DeltaRule {
  double factor = 1.0;
};

enum class GrowthFlag { Stabilized, Growing };
const char* to_string(GrowthFlag f);

struct LadderDiagnostic {
  std::vector<std::pair<double, std::size_t>> entries;  // (epsilon, k_epsilon)
  bool divisibility_ok = true;
  GrowthFlag growth = GrowthFlag::Stabilized;
  bool truncated = false;
  std::string note;
  // Classes at the finest transitive epsilon: the finite stand-in for the
  // intersection over all epsilon.
  std::vector<std::size_t> finest_classes;
};

LadderDiagnostic k_ladder(const GeneratorSystem& g, const ScaleLadder& eps_ladder,
                          DeltaRule rule = {}, ExecPolicy policy = ExecPolicy::Parallel);

struct OdometerSpec {
  std::vector<std::size_t> J;
};

// One map, add one with carry, on the digit product with the j-adic
// first-disagreement metric.
GeneratorSystem odometer_system(const OdometerSpec& spec, const Budget& budget = {});

std::size_t gcd_of_set(const std::vector<std::size_t>& t);

struct Stabilization {
  std::size_t d = 0;
  std::size_t N = 0;
};
// d = gcd of the generators; N = least value with n d a nonnegative integer
// combination of the generators for every n >= N.
Stabilization additive_stabilization_bound(const std::vector<std::size_t>& generators);

// a b - a - b for coprime a, b.
long long frobenius_two(long long a, long long b);
bool representable(long long n, long long a, long long b);

struct ConnectivityReport {
  double epsilon = 0.0;
  bool applicable = false;  // the space is epsilon-connected and every power image eps-covers it
  std::size_t uncovered_power = 0;  // first power whose images leave points uncovered, 0 if none
  bool recurrent = false;
  bool transitive = false;
  bool totally_transitive = false;  // G^j transitive for j <= power_cap
  std::size_t power_cap = 4;
  bool mixing = false;
  bool all_agree = false;
  std::string note;
};

ConnectivityReport connectivity_equivalence_check(const GeneratorSystem& g, double epsilon,
                                                  const Budget& budget = {},
                                                  ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace chaindyn
