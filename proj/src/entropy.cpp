#include "chaindyn/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "chaindyn/digraph.hpp"
#include "chaindyn/rng.hpp"
#include "chaindyn/solvers.hpp"

namespace chaindyn {

const char* to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::OrbitSeparated: return "orbit-separated";
    case EntropyMethod::OrbitSpanning: return "orbit-spanning";
    case EntropyMethod::PseudoSeparated: return "pseudo-separated";
    case EntropyMethod::PseudoSpanning: return "pseudo-spanning";
    case EntropyMethod::SpectralOracle: return "spectral-oracle";
  }
  return "?";
}

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "exact";
    case Exactness::LowerBound: return "lower-bound";
    case Exactness::UpperBound: return "upper-bound";
  }
  return "?";
}

namespace {

// Radius for "not distinguishable": d <= eps when separation is strict (> eps),
// d < eps otherwise.
double close_radius(double eps, bool strict) {
  return strict ? eps : std::nextafter(eps, 0.0);
}

BitMatrix point_closeness(const FiniteMetricSpace& s, double radius, ExecPolicy policy) {
  const std::size_t n = s.size();
  BitMatrix close(n);
  if (policy == ExecPolicy::Serial) {
    for (std::size_t x = 0; x < n; ++x) close.set_row(x, s.ball(static_cast<PointId>(x), radius));
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t x = 0; x < n; ++x) close.set_row(x, s.ball(static_cast<PointId>(x), radius));
  }
  return close;
}

// Items i, j are close when close(a_i[k], a_j[k]) for every coordinate k.
BitMatrix tuple_closeness(const std::vector<PointId>& flat, std::size_t length,
                          const BitMatrix& close, ExecPolicy policy) {
  const std::size_t count = flat.size() / length;
  BitMatrix out(count);
  auto row = [&](std::size_t i) {
    const PointId* a = flat.data() + i * length;
    for (std::size_t j = 0; j < count; ++j) {
      const PointId* b = flat.data() + j * length;
      bool ok = true;
      for (std::size_t k = 0; k < length && ok; ++k) ok = close.test(a[k], b[k]);
      if (ok) out.set(i, j);
    }
  };
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < count; ++i) row(i);
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < count; ++i) row(i);
  }
  return out;
}

CountResult solve(const BitMatrix& close, bool separated, std::size_t node_limit) {
  CountResult r;
  r.candidates = close.size();
  const auto s = separated ? solvers::max_independent_set(close, node_limit)
                           : solvers::min_dominating_set(close, node_limit);
  r.count = s.members.size();
  r.exactness = s.exact ? Exactness::Exact
                        : (separated ? Exactness::LowerBound : Exactness::UpperBound);
  return r;
}

CountResult greedy(const BitMatrix& close, bool separated) {
  CountResult r;
  r.candidates = close.size();
  r.count = solvers::greedy_maximal_independent(close).size();
  r.exactness = separated ? Exactness::LowerBound : Exactness::UpperBound;
  return r;
}

CountResult orbit_count(const GeneratorSystem& g, const Word& w, double eps, const CountOptions& opt,
                        bool separated) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
  const bool strict = opt.strict.value_or(false);
  const std::size_t n = g.points();
  const std::size_t len = w.size() + 1;
  std::vector<PointId> orbits(n * len);
  for (std::size_t x = 0; x < n; ++x) {
    const auto o = word_orbit(g, w, static_cast<PointId>(x));
    std::copy(o.begin(), o.end(), orbits.begin() + static_cast<std::ptrdiff_t>(x * len));
  }
  const auto close = tuple_closeness(
      orbits, len, point_closeness(g.space(), close_radius(eps, strict), opt.policy), opt.policy);
  const std::size_t limit = opt.exact_limit ? opt.exact_limit : kOrbitExactLimit;
  return n <= limit ? solve(close, separated, opt.node_limit) : greedy(close, separated);
}

// Prefix trie of accepted chains for the greedy pass.
class PrefixTrie {
 public:
  explicit PrefixTrie(std::size_t length) : length_(length), children_(1) {}

  bool has_close(const PointId* p, const BitMatrix& close) const {
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      auto [node, depth] = stack.back();
      stack.pop_back();
      if (depth == length_) return true;
      for (const auto& [pt, child] : children_[node])
        if (close.test(pt, p[depth])) stack.push_back({child, depth + 1});
    }
    return false;
  }

  void insert(const PointId* p) {
    std::uint32_t node = 0;
    for (std::size_t d = 0; d < length_; ++d) {
      std::uint32_t next = 0;
      for (const auto& [pt, child] : children_[node])
        if (pt == p[d]) next = child;
      if (next == 0) {
        next = static_cast<std::uint32_t>(children_.size());
        children_.emplace_back();
        children_[node].push_back({p[d], next});
      }
      node = next;
    }
  }

 private:
  std::size_t length_;
  std::vector<std::vector<std::pair<PointId, std::uint32_t>>> children_;
};

// Depth-first enumeration of prefixes in lexicographic order.
template <class Visit>
void for_each_prefix(const ChainGraph& cg, const Word& w, std::size_t length, Visit&& visit) {
  const std::size_t n = cg.points();
  std::vector<PointId> cur(length);
  std::vector<std::vector<PointId>> options(length);
  std::vector<std::size_t> pos(length, 0);
  options[0].resize(n);
  std::iota(options[0].begin(), options[0].end(), PointId{0});
  std::size_t depth = 0;
  while (true) {
    if (pos[depth] == options[depth].size()) {
      if (depth == 0) return;
      --depth;
      continue;
    }
    cur[depth] = options[depth][pos[depth]++];
    if (depth + 1 == length) {
      visit(cur.data());
      continue;
    }
    ++depth;
    options[depth].clear();
    cg.relation(w[depth - 1]).for_each_in_row(cur[depth - 1], [&](std::size_t y) {
      options[depth].push_back(static_cast<PointId>(y));
    });
    pos[depth] = 0;
  }
}

CountResult pseudo_count(const ChainGraph& cg, const Word& w, double eps, const CountOptions& opt,
                         bool separated) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
  for (auto l : w)
    if (l >= cg.m()) fail(ErrorKind::InvalidArgument, "word letter out of range");
  const bool strict = opt.strict.value_or(true);
  const std::size_t length = w.size() + (opt.include_endpoint ? 1 : 0);
  if (length == 0) {
    CountResult r;
    r.count = 1;
    r.candidates = 1;
    return r;
  }
  const Word head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(length - 1));
  const BigCount candidates = count_chains_for_word(cg, head, opt.policy);

  const auto& space = cg.system().space();
  const double minpos = space.min_positive_distance();
  const bool distinct_separate = strict ? eps < minpos : eps <= minpos;
  if (distinct_separate || space.size() == 1) {
    CountResult r;
    r.count = candidates;
    r.candidates = candidates > BigCount(std::numeric_limits<std::size_t>::max())
                       ? std::numeric_limits<std::size_t>::max()
                       : candidates.convert_to<std::size_t>();
    return r;
  }
  if (candidates > BigCount(opt.max_candidates))
    fail(ErrorKind::Resource, "chain enumeration exceeds the candidate budget");
  const auto total = candidates.convert_to<std::size_t>();
  const auto close = point_closeness(space, close_radius(eps, strict), opt.policy);
  const std::size_t limit = opt.exact_limit ? opt.exact_limit : kPseudoExactLimit;

  if (total <= limit) {
    std::vector<PointId> flat;
    flat.reserve(total * length);
    for_each_prefix(cg, w, length, [&](const PointId* p) { flat.insert(flat.end(), p, p + length); });
    return solve(tuple_closeness(flat, length, close, opt.policy), separated, opt.node_limit);
  }

  PrefixTrie trie(length);
  std::size_t accepted = 0;
  for_each_prefix(cg, w, length, [&](const PointId* p) {
    if (!trie.has_close(p, close)) {
      trie.insert(p);
      ++accepted;
    }
  });
  CountResult r;
  r.count = accepted;
  r.candidates = total;
  r.exactness = separated ? Exactness::LowerBound : Exactness::UpperBound;
  return r;
}

}  // namespace

CountResult orbit_separated_count(const GeneratorSystem& g, const Word& w, double epsilon,
                                  const CountOptions& opt) {
  return orbit_count(g, w, epsilon, opt, true);
}

CountResult orbit_spanning_count(const GeneratorSystem& g, const Word& w, double epsilon,
                                 const CountOptions& opt) {
  return orbit_count(g, w, epsilon, opt, false);
}

CountResult pseudo_separated_count(const ChainGraph& cg, const Word& w, double epsilon,
                                   const CountOptions& opt) {
  return pseudo_count(cg, w, epsilon, opt, true);
}

CountResult pseudo_spanning_count(const ChainGraph& cg, const Word& w, double epsilon,
                                  const CountOptions& opt) {
  return pseudo_count(cg, w, epsilon, opt, false);
}

PrefixSet chain_prefixes(const ChainGraph& cg, const Word& w, bool include_endpoint,
                         std::size_t max_candidates) {
  PrefixSet out;
  out.length = w.size() + (include_endpoint ? 1 : 0);
  if (out.length == 0) return out;
  const Word head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(out.length - 1));
  if (count_chains_for_word(cg, head) > BigCount(max_candidates))
    fail(ErrorKind::Resource, "chain enumeration exceeds the candidate budget");
  for_each_prefix(cg, w, out.length,
                  [&](const PointId* p) { out.points.insert(out.points.end(), p, p + out.length); });
  return out;
}

std::size_t default_word_sample(std::size_t m, std::size_t n_hi, const Budget& budget) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n_hi; ++i) {
    if (count > budget.max_words / m) return 256;
    count *= m;
  }
  return 0;
}

std::vector<Word> words_for_length(std::size_t m, std::size_t n, const SamplingOptions& s) {
  if (s.word_sample == 0) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (count > s.budget.max_words / m)
        fail(ErrorKind::Resource, "m^n exceeds the word budget; use word sampling");
      count *= m;
    }
    return all_words(m, n);
  }
  Rng rng(s.seed, n);
  std::vector<Word> out(s.word_sample, Word(n));
  for (auto& w : out)
    for (auto& l : w) l = static_cast<Letter>(rng.below(m));
  return out;
}

double fit_growth(const std::vector<std::pair<std::size_t, double>>& curve, std::size_t* fit_lo) {
  if (curve.empty()) return 0.0;
  if (curve.size() == 1) {
    if (fit_lo) *fit_lo = curve[0].first;
    return curve[0].first ? curve[0].second / static_cast<double>(curve[0].first) : 0.0;
  }
  const std::size_t take = std::max<std::size_t>(2, (curve.size() + 1) / 2);
  const std::size_t start = curve.size() - take;
  if (fit_lo) *fit_lo = curve[start].first;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = start; i < curve.size(); ++i) {
    const double x = static_cast<double>(curve[i].first), y = curve[i].second;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(take);
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace {

double log_average(const BigCount& sum, std::size_t words) {
  return static_cast<double>(log_big(sum) - std::log(static_cast<long double>(words)));
}

}  // namespace

EntropyEstimate bufetov_entropy(const GeneratorSystem& g, double epsilon, NRange range,
                                const SamplingOptions& sampling, const CountOptions& opt) {
  if (range.lo > range.hi) fail(ErrorKind::InvalidArgument, "empty n range");
  EntropyEstimate e;
  e.method = EntropyMethod::OrbitSeparated;
  e.epsilon = epsilon;
  e.word_sample = sampling.word_sample;
  e.n_lo = range.lo;
  // A word whose count reaches |X| has run out of points to separate; lengths
  // from there on measure the grid, not growth, so the curve stops before them.
  const BigCount cap = g.points();
  for (std::size_t n = range.lo; n <= range.hi; ++n) {
    const auto words = words_for_length(g.m(), n, sampling);
    BigCount sum = 0;
    bool saturated = false, exact = true;
    for (const auto& w : words) {
      const auto c = orbit_separated_count(g, w, epsilon, opt);
      sum += c.count;
      saturated = saturated || c.count >= cap;
      exact = exact && c.exactness == Exactness::Exact;
    }
    if (saturated && !e.raw_curve.empty()) {
      e.note = "curve stopped at n=" + std::to_string(n - 1) + ": counts reach the point count at n=" +
               std::to_string(n);
      break;
    }
    e.all_exact = e.all_exact && exact;
    e.raw_curve.emplace_back(n, log_average(sum, words.size()));
    e.n_hi = n;
    if (saturated) {
      e.note = "counts reach the point count at n=" + std::to_string(n);
      break;
    }
  }
  e.value = fit_growth(e.raw_curve, &e.fit_lo);
  return e;
}

EntropyEstimate pseudo_entropy_cell(const ChainGraph& cg, double epsilon, NRange range,
                                    const SamplingOptions& sampling, const CountOptions& opt) {
  if (range.lo > range.hi) fail(ErrorKind::InvalidArgument, "empty n range");
  EntropyEstimate e;
  e.method = EntropyMethod::PseudoSeparated;
  e.epsilon = epsilon;
  e.delta = cg.delta();
  e.word_sample = sampling.word_sample;
  e.n_lo = range.lo;
  for (std::size_t n = range.lo; n <= range.hi; ++n) {
    const auto words = words_for_length(cg.m(), n, sampling);
    BigCount sum = 0;
    bool exact = true;
    try {
      for (const auto& w : words) {
        const auto c = pseudo_separated_count(cg, w, epsilon, opt);
        sum += c.count;
        exact = exact && c.exactness == Exactness::Exact;
      }
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Resource || e.raw_curve.empty()) throw;
      e.note = "curve stopped at n=" + std::to_string(n - 1) + ": " + err.what();
      break;
    }
    e.all_exact = e.all_exact && exact;
    e.raw_curve.emplace_back(n, log_average(sum, words.size()));
    e.n_hi = n;
  }
  e.value = fit_growth(e.raw_curve, &e.fit_lo);
  return e;
}

PseudoEntropyMatrix pseudo_entropy(const GeneratorSystem& g, const ScaleLadder& eps_ladder,
                                   const ScaleLadder& delta_ladder, NRange range,
                                   const SamplingOptions& sampling, const CountOptions& opt) {
  PseudoEntropyMatrix out;
  out.eps = eps_ladder.values();
  out.delta = delta_ladder.values();
  std::vector<ChainGraph> graphs;
  for (double d : delta_ladder) graphs.push_back(build_chain_graph(g, d, opt.policy));
  for (double eps : eps_ladder) {
    std::vector<EntropyEstimate> row;
    for (const auto& cg : graphs) row.push_back(pseudo_entropy_cell(cg, eps, range, sampling, opt));
    out.cells.push_back(std::move(row));
  }
  out.corner = out.cells.back().back().value;
  return out;
}

namespace {

// Exact path-count series 1^T S^t 1 with periodic rescaling so the integers
// stay bounded; log c_t is tracked with the accumulated shift.
class CountSeries {
 public:
  CountSeries(CountMatrix s, ExecPolicy policy)
      : s_(std::move(s)), v_(s_.n, BigCount(1)), policy_(policy) {
    logs_.push_back(std::log(static_cast<long double>(s_.n)));
  }

  void step() {
    v_ = kernels::count_step(s_, v_, policy_);
    BigCount sum = 0;
    for (const auto& c : v_) sum += c;
    if (sum == 0) {
      logs_.push_back(-std::numeric_limits<long double>::infinity());
      return;
    }
    const std::size_t bits = boost::multiprecision::msb(sum) + 1;
    if (bits > kMaxBits) {
      const std::size_t drop = bits - kKeepBits;
      for (auto& c : v_) c >>= drop;
      shift_ += drop;
      sum >>= drop;
    }
    logs_.push_back(log_big(sum) + static_cast<long double>(shift_) * std::numbers::ln2_v<long double>);
  }

  long double log_count(std::size_t t) const { return logs_[t]; }
  std::size_t steps() const { return logs_.size() - 1; }
  double rate(std::size_t window) const {
    const std::size_t t = steps();
    return static_cast<double>((logs_[t] - logs_[t - window]) / static_cast<long double>(window));
  }

 private:
  static constexpr std::size_t kMaxBits = 4096;
  static constexpr std::size_t kKeepBits = 2048;
  CountMatrix s_;
  std::vector<BigCount> v_;
  ExecPolicy policy_;
  std::size_t shift_ = 0;
  std::vector<long double> logs_;
};

// Iterates all series in lockstep until every windowed rate settles.
struct LockstepResult {
  std::vector<double> rates;
  std::size_t iterations = 0;
  bool converged = false;
};

LockstepResult run_lockstep(std::vector<CountSeries>& series, std::size_t window, double tol,
                            std::size_t max_iterations) {
  LockstepResult out;
  out.rates.assign(series.size(), 0.0);
  std::vector<double> prev(series.size(), 0.0);
  std::size_t calm = 0;
  for (std::size_t t = 1; t <= max_iterations; ++t) {
    for (auto& s : series) s.step();
    out.iterations = t;
    if (t < window) continue;
    bool settled = t > window;
    for (std::size_t i = 0; i < series.size(); ++i) {
      out.rates[i] = series[i].rate(window);
      if (std::isinf(out.rates[i]) || std::isnan(out.rates[i])) {
        settled = settled && true;
        continue;
      }
      if (std::abs(out.rates[i] - prev[i]) > tol * std::max(1.0, std::abs(out.rates[i])))
        settled = false;
      prev[i] = out.rates[i];
    }
    calm = settled ? calm + 1 : 0;
    if (calm >= 3) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

SpectralGrowth spectral_growth(const ChainGraph& cg, const SpectralOptions& opt) {
  SpectralGrowth out;
  const CountMatrix s = opt.single_relation ? CountMatrix::from(cg.union_relation()) : cg.sum_counts();
  const double log_m = opt.single_relation ? 0.0 : std::log(static_cast<double>(cg.m()));
  out.window = opt.window ? opt.window : digraph::cyclic_period_lcm(cg.union_relation(), 64);
  std::vector<CountSeries> series;
  series.emplace_back(s, opt.policy);
  const auto run = run_lockstep(series, out.window, opt.tolerance, opt.max_iterations);
  out.log_lambda = run.rates[0];
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.value = std::isinf(out.log_lambda) ? -std::numeric_limits<double>::infinity()
                                         : out.log_lambda - log_m;
  const double lambda = kernels::perron_root(s, 1e-14, 200000, opt.policy);
  out.perron_log = lambda > 0 ? std::log(lambda) : -std::numeric_limits<double>::infinity();
  out.perron_agrees = std::abs(lambda - std::exp(out.log_lambda)) <= 1e-6 * std::max(1.0, lambda);
  return out;
}

double spectral_growth_rate(const ChainGraph& cg) { return spectral_growth(cg).value; }

SkewReport verify_skew_identity(const GeneratorSystem& g, double delta, const Budget& budget,
                                ExecPolicy policy) {
  SkewReport r;
  r.delta = delta;
  r.depth = skew_depth(g.m(), delta);
  const auto f = skew_product(g, r.depth, budget);
  r.skew_points = f.points();
  r.log_m = std::log(static_cast<double>(g.m()));
  const auto cg_g = build_chain_graph(g, delta, policy);
  const auto cg_f = build_chain_graph(f, delta, policy);
  const std::size_t lg = digraph::cyclic_period_lcm(cg_g.union_relation(), 64);
  const std::size_t lf = digraph::cyclic_period_lcm(cg_f.union_relation(), 64);
  r.window = std::min<std::size_t>(std::lcm(lg, lf), 4096);
  std::vector<CountSeries> series;
  series.emplace_back(cg_g.sum_counts(), policy);
  series.emplace_back(CountMatrix::from(cg_f.union_relation()), policy);
  const auto run = run_lockstep(series, r.window, 1e-10, 20000);
  r.h_g = run.rates[0] - r.log_m;
  r.h_f = run.rates[1];
  r.discrepancy = std::abs(r.h_f - (r.log_m + r.h_g));
  r.iterations = run.iterations;
  r.converged = run.converged;
  return r;
}

}  // namespace chaindyn
