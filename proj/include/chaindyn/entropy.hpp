#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chaindyn/graph.hpp"

namespace chaindyn {

enum class EntropyMethod {
  OrbitSeparated,
  OrbitSpanning,
  PseudoSeparated,
  PseudoSpanning,
  SpectralOracle,
};
const char* to_string(EntropyMethod m);

enum class Exactness { Exact, LowerBound, UpperBound };
const char* to_string(Exactness e);

struct CountResult {
  BigCount count = 0;
  Exactness exactness = Exactness::Exact;
  std::size_t candidates = 0;  // items the optimum ranges over
};

// Comparison conventions. Orbit counts default to the section 2 rule
// (separated at >= eps, spanned at < eps); pseudo counts to the section 3 rule
// (separated at > eps, spanned at <= eps, coordinates i < n only).
struct CountOptions {
  std::optional<bool> strict;  // unset: the definition's own rule
  bool include_endpoint = false;  // pseudo counts: also compare coordinate n
  std::size_t exact_limit = 0;    // 0: 16 for orbit counts, 2000 for pseudo counts
  std::size_t node_limit = 250'000;  // solver work units per count
  std::size_t max_candidates = std::size_t{1} << 20;
  ExecPolicy policy = ExecPolicy::Parallel;
};

inline constexpr std::size_t kOrbitExactLimit = 16;
inline constexpr std::size_t kPseudoExactLimit = 2000;

CountResult orbit_separated_count(const GeneratorSystem& g, const Word& w, double epsilon,
                                  const CountOptions& opt = {});
CountResult orbit_spanning_count(const GeneratorSystem& g, const Word& w, double epsilon,
                                 const CountOptions& opt = {});

// Chains are compared on coordinates 0..n-1, so two chains that share those
// coordinates are indistinguishable and the optimum ranges over the distinct
// prefixes (x_0, ..., x_{n-1}).
CountResult pseudo_separated_count(const ChainGraph& cg, const Word& w, double epsilon,
                                   const CountOptions& opt = {});
CountResult pseudo_spanning_count(const ChainGraph& cg, const Word& w, double epsilon,
                                  const CountOptions& opt = {});

// Distinct compared prefixes of E(w, delta), in lexicographic order, flattened
// with `length` points per prefix. Throws Resource past max_candidates.
struct PrefixSet {
  std::size_t length = 0;
  std::vector<PointId> points;
  std::size_t size() const { return length ? points.size() / length : 0; }
};
PrefixSet chain_prefixes(const ChainGraph& cg, const Word& w, bool include_endpoint,
                         std::size_t max_candidates);

struct EntropyEstimate {
  double value = 0.0;
  EntropyMethod method = EntropyMethod::SpectralOracle;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t n_lo = 0, n_hi = 0;  // raw curve range actually computed
  std::size_t fit_lo = 0;          // least squares over [fit_lo, n_hi]
  std::size_t word_sample = 0;     // 0 = exhaustive
  std::vector<std::pair<std::size_t, double>> raw_curve;  // (n, log average count)
  bool all_exact = true;
  std::string note;
};

struct NRange {
  std::size_t lo = 1, hi = 6;
};

struct SamplingOptions {
  std::size_t word_sample = 0;  // 0 = exhaustive (errors past the word budget)
  std::uint64_t seed = 0;
  Budget budget;
};

// Sample size used by the pipeline: exhaustive when m^n_hi fits the word
// budget, otherwise 256 uniform words.
std::size_t default_word_sample(std::size_t m, std::size_t n_hi, const Budget& budget);

// Words used for length n: every word, or `sample` seeded uniform words.
std::vector<Word> words_for_length(std::size_t m, std::size_t n, const SamplingOptions& s);

// Least-squares slope over the top half of the curve.
double fit_growth(const std::vector<std::pair<std::size_t, double>>& curve, std::size_t* fit_lo);

EntropyEstimate bufetov_entropy(const GeneratorSystem& g, double epsilon, NRange range,
                                const SamplingOptions& sampling, const CountOptions& opt = {});

// h*(eps, delta) from pseudo-separated counts. Stops the curve early when the
// chain enumeration budget runs out and records why.
EntropyEstimate pseudo_entropy_cell(const ChainGraph& cg, double epsilon, NRange range,
                                    const SamplingOptions& sampling, const CountOptions& opt = {});

struct PseudoEntropyMatrix {
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<std::vector<EntropyEstimate>> cells;  // [eps][delta]
  double corner = 0.0;  // smallest eps, smallest delta
};

PseudoEntropyMatrix pseudo_entropy(const GeneratorSystem& g, const ScaleLadder& eps_ladder,
                                   const ScaleLadder& delta_ladder, NRange range,
                                   const SamplingOptions& sampling, const CountOptions& opt = {});

struct SpectralGrowth {
  double value = 0.0;        // log lambda(sum A_i) - log m
  double log_lambda = 0.0;   // from count ratios
  double perron_log = 0.0;   // float power iteration cross-check
  std::size_t window = 1;    // count ratio c_{t+L} / c_t with L = lcm of cyclic periods
  std::size_t iterations = 0;
  bool converged = false;
  bool perron_agrees = false;  // relative 1e-6
};

struct SpectralOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 20000;
  std::size_t window = 0;  // 0: lcm of component periods
  bool single_relation = false;  // grow the union relation as one map
  ExecPolicy policy = ExecPolicy::Parallel;
};

SpectralGrowth spectral_growth(const ChainGraph& cg, const SpectralOptions& opt = {});
double spectral_growth_rate(const ChainGraph& cg);

struct SkewReport {
  std::size_t depth = 0;
  std::size_t skew_points = 0;
  double delta = 0.0;
  double log_m = 0.0;
  double h_g = 0.0;  // growth of G's chain counts
  double h_f = 0.0;  // growth of F's chain relation as a single map
  double discrepancy = 0.0;
  std::size_t window = 1;
  std::size_t iterations = 0;
  bool converged = false;
};

SkewReport verify_skew_identity(const GeneratorSystem& g, double delta, const Budget& budget = {},
                                ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace chaindyn
