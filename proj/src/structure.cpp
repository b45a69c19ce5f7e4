#include "chaindyn/structure.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "chaindyn/digraph.hpp"
#include "chaindyn/recurrence.hpp"

namespace chaindyn {

std::size_t period_k(const ChainGraph& cg) {
  if (!is_chain_transitive(cg)) fail(ErrorKind::NotTransitive, "union graph is not strongly connected");
  std::vector<std::size_t> all(cg.points());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return digraph::period_of(cg.union_relation(), all);
}

const char* to_string(DecompositionCase c) {
  switch (c) {
    case DecompositionCase::Mixing: return "mixing";
    case DecompositionCase::Periodic: return "periodic";
    case DecompositionCase::DiagnosticOnly: return "diagnostic-only";
  }
  return "?";
}

const char* to_string(GrowthFlag f) { return f == GrowthFlag::Growing ? "growing" : "stabilized"; }

namespace {

BitSet reach_within(const BitMatrix& rel, const BitSet& member, std::size_t root) {
  BitSet seen(rel.size());
  seen.set(root);
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    rel.for_each_in_row(v, [&](std::size_t w) {
      if (member.test(w) && !seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
    });
  }
  return seen;
}

// Primitivity of the subgraph induced on `verts`.
bool induced_primitive(const BitMatrix& rel, const BitMatrix& rel_t,
                       const std::vector<std::size_t>& verts) {
  if (verts.empty()) return false;
  BitSet member(rel.size());
  for (auto v : verts) member.set(v);
  if (reach_within(rel, member, verts[0]) != member) return false;
  if (reach_within(rel_t, member, verts[0]) != member) return false;
  return digraph::period_of(rel, verts) == 1;
}

// From `source`, the walk lengths reaching v must all be congruent to
// class(v) - class(source) mod k, and every v must be reached.
bool residues_match(const BitMatrix& rel, const std::vector<std::size_t>& class_of, std::size_t k,
                    std::size_t source) {
  const std::size_t n = rel.size();
  std::vector<char> seen(n * k, 0);
  std::deque<std::pair<std::size_t, std::size_t>> queue{{source, 0}};
  seen[source * k] = 1;
  while (!queue.empty()) {
    const auto [v, r] = queue.front();
    queue.pop_front();
    const std::size_t nr = (r + 1) % k;
    rel.for_each_in_row(v, [&](std::size_t w) {
      if (!seen[w * k + nr]) {
        seen[w * k + nr] = 1;
        queue.push_back({w, nr});
      }
    });
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t expect = (class_of[v] + k - class_of[source]) % k;
    for (std::size_t r = 0; r < k; ++r)
      if (static_cast<bool>(seen[v * k + r]) != (r == expect)) return false;
  }
  return true;
}

}  // namespace

DecompositionReport epsilon_classes(const ChainGraph& cg, const Budget& budget, ExecPolicy policy) {
  DecompositionReport rep;
  rep.epsilon = cg.delta();
  rep.k = period_k(cg);
  const auto& rel = cg.union_relation();
  const std::size_t n = cg.points();
  const std::size_t k = rep.k;

  const auto levels = digraph::bfs_levels(rel, 0);
  rep.class_of.resize(n);
  rep.class_sizes.assign(k, 0);
  for (std::size_t v = 0; v < n; ++v) {
    rep.class_of[v] = *levels[v] % k;
    ++rep.class_sizes[rep.class_of[v]];
  }

  rep.permutation_ok = true;
  for (std::size_t u = 0; u < n && rep.permutation_ok; ++u)
    rel.for_each_in_row(u, [&](std::size_t v) {
      if (rep.class_of[v] != (rep.class_of[u] + 1) % k) rep.permutation_ok = false;
    });

  // Every source when cheap, otherwise 16 evenly spaced ones.
  std::vector<std::size_t> sources;
  if (n * n * k <= (std::size_t{1} << 22)) {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), std::size_t{0});
  } else {
    for (std::size_t i = 0; i < 16; ++i) sources.push_back(i * n / 16);
  }
  std::vector<char> ok(sources.size(), 0);
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < sources.size(); ++i) ok[i] = residues_match(rel, rep.class_of, k, sources[i]);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < sources.size(); ++i) ok[i] = residues_match(rel, rep.class_of, k, sources[i]);
  }
  rep.classes_verified = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  rep.verified_sources = sources.size();

  if (k == 1) {
    rep.per_class_mixing = {is_chain_mixing(cg)};
  } else {
    BitMatrix rel_k;
    std::size_t gens = 1;
    bool fits = true;
    for (std::size_t i = 0; i < k && fits; ++i) {
      if (gens > budget.max_generators / cg.m()) fits = false;
      gens *= cg.m();
    }
    if (fits) {
      rel_k = build_chain_graph(power_system(cg.system(), k, budget), cg.delta(), policy).union_relation();
    } else {
      rep.power_fallback = true;
      rel_k = rel;
      for (std::size_t i = 1; i < k; ++i) rel_k = rel_k.compose(rel);
    }
    const auto rel_kt = rel_k.transpose();
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t v = 0; v < n; ++v) members[rep.class_of[v]].push_back(v);
    rep.per_class_mixing.resize(k);
    for (std::size_t c = 0; c < k; ++c) rep.per_class_mixing[c] = induced_primitive(rel_k, rel_kt, members[c]);
  }
  rep.kind = !rep.permutation_ok || !rep.classes_verified ? DecompositionCase::DiagnosticOnly
             : k == 1                                      ? DecompositionCase::Mixing
                                                           : DecompositionCase::Periodic;
  return rep;
}

LadderDiagnostic k_ladder(const GeneratorSystem& g, const ScaleLadder& eps_ladder, DeltaRule rule,
                          ExecPolicy policy) {
  if (!(rule.factor > 0.0)) fail(ErrorKind::InvalidArgument, "delta rule factor must be positive");
  LadderDiagnostic out;
  for (double eps : eps_ladder) {
    const auto cg = build_chain_graph(g, eps * rule.factor, policy);
    if (!is_chain_transitive(cg)) {
      out.truncated = true;
      out.note = "not chain transitive at epsilon " + std::to_string(eps) + "; ladder truncated";
      break;
    }
    const std::size_t k = period_k(cg);
    for (const auto& [e, prev] : out.entries)
      if (k % prev != 0) out.divisibility_ok = false;
    out.entries.emplace_back(eps, k);
    const auto levels = digraph::bfs_levels(cg.union_relation(), 0);
    out.finest_classes.resize(cg.points());
    for (std::size_t v = 0; v < cg.points(); ++v) out.finest_classes[v] = *levels[v] % k;
  }
  const auto& e = out.entries;
  out.growth = e.size() >= 2 && e[e.size() - 1].second != e[e.size() - 2].second ? GrowthFlag::Growing
                                                                                 : GrowthFlag::Stabilized;
  return out;
}

GeneratorSystem odometer_system(const OdometerSpec& spec, const Budget& budget) {
  return from_map_specs(build_odometer_space(spec.J, budget), {MapSpec{OdometerMap{}, ""}});
}

std::size_t gcd_of_set(const std::vector<std::size_t>& t) {
  if (t.empty()) fail(ErrorKind::InvalidArgument, "gcd of an empty set");
  std::size_t g = 0;
  for (auto v : t) {
    if (v == 0) fail(ErrorKind::InvalidArgument, "gcd_of_set expects positive integers");
    g = std::gcd(g, v);
  }
  return g;
}

Stabilization additive_stabilization_bound(const std::vector<std::size_t>& generators) {
  Stabilization s;
  s.d = gcd_of_set(generators);
  std::vector<std::size_t> red;
  for (auto v : generators) red.push_back(v / s.d);
  std::sort(red.begin(), red.end());
  red.erase(std::unique(red.begin(), red.end()), red.end());
  const std::size_t lo = red.front(), hi = red.back();
  // Gaps of a gcd-one set end below (lo - 1)(hi - 1); a run of lo
  // consecutive representable values confirms it.
  const std::size_t limit = (lo - 1) * (hi - 1) + lo + 1;
  std::vector<char> rep(limit + 1, 0);
  rep[0] = 1;
  std::size_t last_gap = 0, run = 0;
  for (std::size_t v = 1; v <= limit; ++v) {
    for (auto a : red)
      if (a <= v && rep[v - a]) {
        rep[v] = 1;
        break;
      }
    if (rep[v]) {
      ++run;
    } else {
      last_gap = v;
      run = 0;
    }
  }
  if (run < lo) fail(ErrorKind::Resource, "stabilization not confirmed within the search bound");
  s.N = last_gap + 1;
  return s;
}

long long frobenius_two(long long a, long long b) {
  if (a <= 0 || b <= 0) fail(ErrorKind::InvalidArgument, "frobenius_two needs positive integers");
  if (std::gcd(a, b) != 1) fail(ErrorKind::InvalidArgument, "frobenius_two needs coprime integers");
  return a * b - a - b;
}

bool representable(long long n, long long a, long long b) {
  if (a <= 0 || b <= 0) fail(ErrorKind::InvalidArgument, "representable needs positive generators");
  if (n < 0) return false;
  for (long long x = 0; x * a <= n; ++x)
    if ((n - x * a) % b == 0) return true;
  return false;
}

ConnectivityReport connectivity_equivalence_check(const GeneratorSystem& g, double epsilon,
                                                  const Budget& budget, ExecPolicy policy) {
  ConnectivityReport rep;
  rep.epsilon = epsilon;
  const auto& s = g.space();
  const std::size_t n = s.size();
  BitMatrix prox(n);
  for (std::size_t x = 0; x < n; ++x) prox.set_row(x, s.ball(static_cast<PointId>(x), epsilon));
  rep.applicable = digraph::strongly_connected(prox);

  const auto cg = build_chain_graph(g, epsilon, policy);
  rep.recurrent = is_chain_recurrent(cg);
  rep.transitive = is_chain_transitive(cg);
  rep.mixing = is_chain_mixing(cg);
  rep.totally_transitive = rep.transitive;
  std::size_t gens = g.m();
  for (std::size_t j = 2; j <= rep.power_cap && rep.totally_transitive; ++j) {
    if (gens > budget.max_generators / g.m()) {
      rep.power_cap = j - 1;
      rep.note = "power cap lowered to " + std::to_string(j - 1) + " by the generator budget";
      break;
    }
    gens *= g.m();
    const auto gj = power_system(g, j, budget);
    // A grid map need not be onto. If the images of G^j miss an eps-ball, no
    // chain reaches its centre and G^j fails for reasons of resolution only.
    BitSet covered(n);
    for (const auto& t : gj.tables())
      for (PointId y : t) covered |= prox.row(y);
    if (covered.count() < n) {
      rep.uncovered_power = j;
      rep.power_cap = j - 1;
      rep.applicable = false;
      rep.note = "images of G^" + std::to_string(j) + " do not eps-cover the space (grid resolution)";
      break;
    }
    rep.totally_transitive = is_chain_transitive(build_chain_graph(gj, epsilon, policy));
  }
  rep.all_agree = rep.recurrent == rep.transitive && rep.transitive == rep.totally_transitive &&
                  rep.totally_transitive == rep.mixing;
  if (!rep.applicable && rep.note.empty()) rep.note = "space is not epsilon-connected; the equivalence does not apply";
  return rep;
}

}  // namespace chaindyn
