// Acceptance run: one PASS/FAIL line per criterion with its runtime.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chaindyn/corpus.hpp"
#include "chaindyn/digraph.hpp"
#include "chaindyn/entropy.hpp"
#include "chaindyn/presets.hpp"
#include "chaindyn/recurrence.hpp"
#include "chaindyn/run.hpp"
#include "chaindyn/structure.hpp"
#include "oracles.hpp"

using namespace chaindyn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0: no runtime bound
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GeneratorSystem preset_system(const char* name, const PresetParams& params = {}) {
  return build_system(preset_config(name, {"recurrence"}, params));
}

Outcome skew_identity() {
  std::string detail;
  bool pass = true;
  auto one = [&](const char* label, const GeneratorSystem& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = verify_skew_identity(g, 1.0 / 32);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.converged && r.discrepancy <= 1e-6 && secs < 10;
    pass = pass && ok;
    detail += fmt("%s: h(F)=%.9f log m + h(G)=%.9f diff=%.2e depth=%zu %.2fs; ", label, r.h_f, r.log_m + r.h_g,
                  r.discrepancy, r.depth, secs);
  };
  one("identity-4", preset_system("identity-4"));
  one("doubling-tripling n=32", preset_system("doubling-tripling", {{"n", "32"}}));
  return {pass, detail};
}

Outcome two_circles() {
  const auto g = preset_system("example-4.1");
  const auto cg = build_chain_graph(g, 0.05);
  const bool transitive = is_chain_transitive(cg), mixing = is_chain_mixing(cg);
  const auto d = epsilon_classes(cg);
  bool circles = d.class_of.size() == 64 && d.class_of[0] != d.class_of[32];
  for (std::size_t i = 0; i < d.class_of.size() && circles; ++i) circles = d.class_of[i] == d.class_of[i < 32 ? 0 : 32];
  const bool per_class = d.per_class_mixing.size() == 2 && d.per_class_mixing[0] && d.per_class_mixing[1];
  return {transitive && !mixing && d.k == 2 && circles && d.permutation_ok && per_class,
          fmt("transitive=%d mixing=%d k=%zu classes_are_circles=%d permutation_ok=%d G^2_mixing=%d", transitive, mixing,
              d.k, circles, d.permutation_ok, per_class)};
}

Outcome prepend_shift() {
  const double eps = 0.3;
  const auto g = preset_system("example-4.2");
  const auto cg = build_chain_graph(g, eps);
  std::size_t N = 1;
  while (!(std::ldexp(1.0, -static_cast<int>(N - 1)) < eps)) ++N;
  const PointId from = 0, to = static_cast<PointId>(g.points() - 1);
  BitSet start(g.points());
  start.set(from);
  const std::size_t n_max = 4 * g.points();
  const auto layers = reach_layers(cg, start, n_max);
  std::size_t missing = 0;
  for (std::size_t n = N; n <= n_max; ++n) missing += !layers[n].test(to);
  const bool mixing = is_chain_mixing(cg);
  return {mixing && missing == 0,
          fmt("mixing=%d N=%zu chains %s -> %s at every length %zu..%zu: %s", mixing, N, g.space().label(from).c_str(),
              g.space().label(to).c_str(), N, n_max, missing ? "no" : "yes")};
}

Outcome propositions() {
  const auto corpus = random_corpus(2024, 50);
  std::size_t checked = 0, failures = 0, max_points = 0, max_m = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& a = corpus[i];
    const auto& b = corpus[(i + 1) % corpus.size()];
    max_points = std::max(max_points, a.system.points());
    max_m = std::max(max_m, a.system.m());
    const auto rep = proposition_suite(a.system, b.system, 1 + i % 3, std::max(a.epsilon, b.epsilon), 0.05);
    for (const auto& c : rep.checks) {
      if (c.status == CheckStatus::Info || c.status == CheckStatus::Skipped) continue;
      checked += c.checked;
      failures += c.failures;
    }
  }
  return {failures == 0 && checked > 0,
          fmt("50 systems (|X|<=%zu, m<=%zu, k 1..3): %zu checks, %zu failures", max_points, max_m, checked, failures)};
}

Outcome period_basepoint() {
  const auto corpus = random_corpus(77, 100);
  std::size_t checked = 0, failures = 0;
  for (const auto& s : corpus) {
    const auto cg = build_chain_graph(s.system, s.epsilon);
    const auto& rel = cg.union_relation();
    std::vector<std::size_t> all(rel.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t k = digraph::period_of(rel, all, 0);
    for (std::size_t root = 0; root < all.size(); ++root) {
      ++checked;
      const bool ok = digraph::period_of(rel, all, root) == k && oracle::cycle_gcd(rel, root, 2 * all.size() * all.size()) == k;
      failures += !ok;
    }
  }
  return {failures == 0, fmt("100 graphs, %zu basepoints, %zu failures", checked, failures)};
}

Outcome sandwich() {
  CorpusOptions opt;
  opt.max_points = 8;
  opt.max_generators = 2;
  const auto corpus = random_corpus(31, 30, opt);
  std::size_t checked = 0, failures = 0, inexact = 0;
  for (const auto& s : corpus) {
    const auto& g = s.system;
    for (double delta : {0.05, 0.1, 0.2}) {
      const auto cg = build_chain_graph(g, delta);
      for (double eps : {0.04, 0.1, 0.25})
        for (std::size_t n = 1; n <= 4; ++n)
          for (const auto& w : all_words(g.m(), n)) {
            const auto sep = pseudo_separated_count(cg, w, eps);
            const auto span = pseudo_spanning_count(cg, w, eps);
            const auto half = pseudo_spanning_count(cg, w, eps / 2);
            if (sep.exactness != Exactness::Exact || span.exactness != Exactness::Exact ||
                half.exactness != Exactness::Exact) {
              ++inexact;
              continue;
            }
            ++checked;
            failures += !(half.count >= sep.count && sep.count >= span.count);
          }
    }
  }
  return {failures == 0 && inexact == 0 && checked > 0,
          fmt("30 systems (|X|<=8, m<=2), n<=4, 3x3 grid: %zu instances, %zu failures, %zu beyond the exact solvers",
              checked, failures, inexact)};
}

Outcome oracle_equivalence() {
  const auto corpus = random_corpus(5, 20);
  std::size_t totals = 0, total_fail = 0, words = 0, word_fail = 0, counts = 0, count_fail = 0;
  for (const auto& s : corpus) {
    const auto& g = s.system;
    const auto cg = build_chain_graph(g, s.epsilon);
    for (std::size_t n = 0; n <= 5; ++n) {
      BigCount sum = 0;
      for (const auto& w : all_words(g.m(), n)) sum += count_chains_for_word(cg, w);
      ++totals;
      total_fail += sum != total_chain_count(cg, n);
    }
    if (g.points() > 8) continue;
    for (std::size_t n = 1; n <= 3; ++n)
      for (const auto& w : all_words(g.m(), n)) {
        const auto chains = oracle::all_chains(g, w, s.epsilon);
        ++words;
        word_fail += count_chains_for_word(cg, w) != chains.size();
        std::set<std::vector<PointId>> prefixes;
        for (const auto& c : chains) prefixes.insert(std::vector<PointId>(c.begin(), c.end() - 1));
        if (prefixes.size() > 18) continue;
        const std::vector<std::vector<PointId>> items(prefixes.begin(), prefixes.end());
        for (double eps : {0.04, 0.1, 0.25}) {
          auto close = [&](std::size_t a, std::size_t b) {
            for (std::size_t k = 0; k < n; ++k)
              if (g.space().dist(items[a][k], items[b][k]) > eps) return false;
            return true;
          };
          const auto sep = pseudo_separated_count(cg, w, eps);
          const auto span = pseudo_spanning_count(cg, w, eps);
          counts += 2;
          count_fail += sep.exactness != Exactness::Exact || sep.count != oracle::max_independent(items.size(), close);
          count_fail += span.exactness != Exactness::Exact || span.count != oracle::min_dominating(items.size(), close);
        }
      }
  }
  return {total_fail + word_fail + count_fail == 0,
          fmt("total_chain_count vs word sums: %zu/%zu ok; per-word counts vs enumeration: %zu/%zu ok; "
              "pseudo counts vs exhaustive optima: %zu/%zu ok",
              totals - total_fail, totals, words - word_fail, words, counts - count_fail, counts)};
}

Outcome frobenius() {
  std::size_t pairs = 0, failures = 0;
  for (long long a = 2; a <= 12; ++a)
    for (long long b = a + 1; b <= 12; ++b) {
      if (std::gcd(a, b) != 1) continue;
      ++pairs;
      const long long limit = 3 * a * b;
      std::vector<char> rep(static_cast<std::size_t>(limit + 1), 0);
      rep[0] = 1;
      for (long long n = 1; n <= limit; ++n)
        rep[n] = (n >= a && rep[n - a]) || (n >= b && rep[n - b]);
      const long long g = a * b - a - b;
      bool ok = !rep[g] && frobenius_two(a, b) == g && !representable(g, a, b);
      for (long long n = g + 1; n <= limit; ++n) ok = ok && rep[n] && representable(n, a, b);
      for (long long n = 0; n <= limit; ++n) ok = ok && (rep[n] != 0) == representable(n, a, b);
      failures += !ok;
    }
  const auto s = additive_stabilization_bound({3, 5});
  const bool stab = s.d == 1 && s.N == 8;
  return {failures == 0 && stab,
          fmt("%zu coprime pairs, %zu failures; stabilization bound {3,5} = (%zu, %zu)", pairs, failures, s.d, s.N)};
}

Outcome doubling_reduction() {
  const double s = 1.0 / 128;
  const auto g = preset_system("doubling");
  SamplingOptions samp;
  const auto pe = pseudo_entropy(g, ScaleLadder({s}), ScaleLadder({s}), NRange{1, 6}, samp);
  const auto spec = spectral_growth(build_chain_graph(g, s));
  const double gap = std::abs(pe.corner - spec.value), to_log2 = std::abs(spec.value - std::log(2.0));
  return {gap <= 0.05 && to_log2 <= 0.1,
          fmt("pseudo corner=%.4f spectral=%.4f |diff|=%.4f |spectral-log 2|=%.4f", pe.corner, spec.value, gap, to_log2)};
}

RunResult doubling_tripling_verify() {
  auto cfg = preset_config("doubling-tripling", {"verify-all"});
  auto& p = cfg.analyses[0].params;
  p["eps"] = {0.2, 0.1, 0.05, 0.025};
  p["delta"] = {0.2, 0.1};
  p["lbm_eps"] = {0.1, 0.05, 0.025};
  p["corpus"] = 0;
  return run_analyses(cfg);
}

Json suite(const RunResult& r, const std::string& name) {
  for (const auto& s : r.report["analyses"]["verify-all"]["result"]["suites"])
    if (s["name"] == name) return s;
  throw std::runtime_error("missing suite " + name);
}

Outcome lbm() {
  const auto d = suite(doubling_tripling_verify(), "lbm_inequality");
  const auto& x = d["detail"];
  return {d["status"] == "pass",
          fmt("h_hat=%.4f rhs=b*max ratio - log 2=%.4f (b=%.4f) slack=%.1f", x["h_hat"].get<double>(),
              x["rhs_raw"].get<double>(), x["lower_b"].get<double>(), x["slack"].get<double>())};
}

Outcome ubd() {
  const auto x = suite(doubling_tripling_verify(), "ubd_trend")["detail"];
  std::string curve;
  for (const auto& e : x["entries"])
    curve += fmt("%g:%s ", e["epsilon"].get<double>(), e["product"].is_null() ? "none" : fmt("%.4f", e["product"].get<double>()).c_str());
  const bool finite = !x["max_product"].is_null() && std::isfinite(x["max_product"].get<double>());
  return {finite, fmt("b_upper=%.4f r*eps^(b+1): %smax=%s", x["box_upper"].get<double>(), curve.c_str(),
                      finite ? fmt("%.4f", x["max_product"].get<double>()).c_str() : "none")};
}

Outcome odometer() {
  const auto g = preset_system("odometer-6");
  std::vector<double> ladder;
  for (int i = 1; i <= 7; ++i) ladder.push_back(std::ldexp(1.0, -i));
  const auto d = k_ladder(g, ScaleLadder(ladder));
  bool increasing = !d.entries.empty() && d.entries.back().second == 64;
  std::string ks;
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    ks += std::to_string(d.entries[i].second) + " ";
    if (i && d.entries[i - 1].second < 64) increasing = increasing && d.entries[i].second > d.entries[i - 1].second;
    if (i && d.entries[i - 1].second == 64) increasing = increasing && d.entries[i].second == 64;
  }
  return {d.divisibility_ok && increasing,
          fmt("k along 2^-1..2^-7: %sdivisibility_ok=%d", ks.c_str(), d.divisibility_ok)};
}

Outcome determinism() {
  auto cfg = preset_config("doubling-tripling", {"verify-all"});
  cfg.seed = 99;
  const auto a = run_analyses(cfg).report["analyses"].dump();
  const auto b = run_analyses(cfg).report["analyses"].dump();
  return {a == b, fmt("two verify-all runs, seed 99: %zu bytes each, identical=%d", a.size(), a == b)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "skew-product entropy identity", 20, skew_identity},
      {2, "two-circle periodic decomposition", 1, two_circles},
      {3, "prepend shift chain mixing", 1, prepend_shift},
      {4, "product and power propositions on random systems", 30, propositions},
      {5, "digraph period independent of basepoint", 0, period_basepoint},
      {6, "pseudo count sandwich inequalities", 0, sandwich},
      {7, "brute-force oracle equivalence", 0, oracle_equivalence},
      {8, "Frobenius number and stabilization", 0, frobenius},
      {9, "single-map pseudo entropy vs spectral oracle", 20, doubling_reduction},
      {10, "mixing-time lower bound on entropy", 30, lbm},
      {11, "recurrence-time trend against box dimension", 0, ubd},
      {12, "adding-machine k ladder", 5, odometer},
      {13, "verify-all determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += fmt(" [over the %.0fs limit]", c.limit_seconds);
    }
    failed += !o.pass;
    std::printf("%s %2d %-50s %8.3fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
