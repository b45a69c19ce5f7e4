#include "chaindyn/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chaindyn/digraph.hpp"

namespace chaindyn {

std::size_t wielandt_cap(std::size_t points) {
  return points == 0 ? 1 : (points - 1) * (points - 1) + 1;
}

bool is_chain_recurrent(const ChainGraph& cg) {
  const auto& rel = cg.union_relation();
  const auto comps = digraph::strongly_connected_components(rel);
  std::vector<std::size_t> size(comps.count, 0);
  for (auto c : comps.comp) ++size[c];
  for (std::size_t v = 0; v < rel.size(); ++v)
    if (size[comps.comp[v]] == 1 && !rel.test(v, v)) return false;
  return true;
}

bool is_chain_transitive(const ChainGraph& cg) {
  return digraph::strongly_connected(cg.union_relation());
}

bool is_chain_mixing(const ChainGraph& cg) {
  if (!is_chain_transitive(cg)) return false;
  std::vector<std::size_t> all(cg.points());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return digraph::period_of(cg.union_relation(), all) == 1;
}

Length recurrence_time_point(const ChainGraph& cg, PointId x) {
  if (x >= cg.points()) fail(ErrorKind::InvalidArgument, "point out of range");
  return kernels::shortest_cycle_through(cg.union_relation(), x);
}

RecurrenceReport recurrence_time(const ChainGraph& cg, ExecPolicy policy) {
  RecurrenceReport r;
  r.epsilon = cg.delta();
  r.wielandt_cap = wielandt_cap(cg.points());
  r.r_per_point = kernels::shortest_cycle_lengths(cg.union_relation(), policy);
  r.recurrent = std::all_of(r.r_per_point.begin(), r.r_per_point.end(),
                            [](const Length& l) { return l.has_value(); });
  r.transitive = is_chain_transitive(cg);
  if (r.transitive) {
    std::vector<std::size_t> all(cg.points());
    std::iota(all.begin(), all.end(), std::size_t{0});
    r.period = digraph::period_of(cg.union_relation(), all);
  }
  r.mixing = r.transitive && r.period == 1;
  if (r.recurrent) {
    std::size_t best = 0;
    for (const auto& l : r.r_per_point) best = std::max(best, *l);
    r.r_global = best;
  }
  return r;
}

Length mixing_time_point(const ChainGraph& cg, PointId x, double delta_ball) {
  if (x >= cg.points()) fail(ErrorKind::InvalidArgument, "point out of range");
  if (!is_chain_mixing(cg)) return std::nullopt;
  const auto t = kernels::full_reach_time(cg.union_relation(), cg.system().space().ball(x, delta_ball),
                                          wielandt_cap(cg.points()));
  if (!t) return std::nullopt;
  return std::max<std::size_t>(1, *t);
}

MixingReport mixing_time(const ChainGraph& cg, double delta_ball, ExecPolicy policy) {
  MixingReport r;
  r.epsilon = cg.delta();
  r.delta = delta_ball;
  r.wielandt_cap = wielandt_cap(cg.points());
  r.mixing = is_chain_mixing(cg);
  r.m_per_point.assign(cg.points(), std::nullopt);
  if (!r.mixing) return r;
  std::vector<BitSet> starts;
  starts.reserve(cg.points());
  for (std::size_t x = 0; x < cg.points(); ++x)
    starts.push_back(cg.system().space().ball(static_cast<PointId>(x), delta_ball));
  const auto times = kernels::full_reach_times(cg.union_relation(), starts, r.wielandt_cap, policy);
  std::size_t best = 0;
  bool all = true;
  for (std::size_t x = 0; x < times.size(); ++x) {
    if (times[x]) {
      r.m_per_point[x] = std::max<std::size_t>(1, *times[x]);
      best = std::max(best, *r.m_per_point[x]);
    } else {
      all = false;
    }
  }
  if (all) r.m_global = best;
  return r;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::Info: return "info";
  }
  return "?";
}

bool PropositionReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

namespace {

CheckResult tally(std::string name, std::size_t checked, std::size_t failures, std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.checked = checked;
  c.failures = failures;
  c.status = failures ? CheckStatus::Fail : CheckStatus::Pass;
  c.detail = std::move(detail);
  return c;
}

CheckResult skipped(std::string name, std::string why) {
  CheckResult c;
  c.name = std::move(name);
  c.status = CheckStatus::Skipped;
  c.detail = std::move(why);
  return c;
}

constexpr std::size_t kEpsSearchSteps = 8;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

PropositionReport proposition_suite(const GeneratorSystem& g, const GeneratorSystem& h,
                                    std::size_t k, double epsilon, double delta,
                                    const Budget& budget, ExecPolicy policy) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "power k must be positive");
  PropositionReport rep;
  rep.epsilon = epsilon;
  rep.delta = delta;
  rep.k = k;

  const auto cg_g = build_chain_graph(g, epsilon, policy);
  const auto cg_h = build_chain_graph(h, epsilon, policy);
  const auto cg_p = build_chain_graph(product_system(g, h, budget), epsilon, policy);
  const auto cg_k = build_chain_graph(power_system(g, k, budget), epsilon, policy);
  const auto r_g = recurrence_time(cg_g, policy);
  const auto r_h = recurrence_time(cg_h, policy);
  const auto r_p = recurrence_time(cg_p, policy);
  const auto r_k = recurrence_time(cg_k, policy);
  const std::size_t ny = h.points();

  rep.checks.push_back(tally("product_recurrence_iff", 1,
                             (r_g.recurrent && r_h.recurrent) != r_p.recurrent ? 1 : 0));
  if (r_g.recurrent && r_h.recurrent) {
    std::size_t lower_fail = 0, upper_fail = 0, n = 0;
    for (std::size_t x = 0; x < g.points(); ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        ++n;
        const auto a = *r_g.r_per_point[x], b = *r_h.r_per_point[y];
        const auto& v = r_p.r_per_point[x * ny + y];
        if (!v || *v < std::max(a, b)) ++lower_fail;
        if (!v || *v > std::lcm(a, b)) ++upper_fail;
      }
    rep.checks.push_back(tally("product_recurrence_lower", n, lower_fail));
    rep.checks.push_back(tally("product_recurrence_lcm", n, upper_fail));
  } else {
    rep.checks.push_back(skipped("product_recurrence_lower", "a factor is not chain recurrent"));
    rep.checks.push_back(skipped("product_recurrence_lcm", "a factor is not chain recurrent"));
  }

  // A G^k chain step unfolds into k steps of G, so recurrence of G^k forces
  // recurrence of G at the same epsilon; the converse needs a smaller epsilon.
  rep.checks.push_back(tally("power_recurrence_implies", 1, r_k.recurrent && !r_g.recurrent ? 1 : 0));
  if (r_g.recurrent) {
    std::size_t n = 0, bad = 0, undefined = 0;
    for (std::size_t x = 0; x < g.points(); ++x) {
      if (!r_k.r_per_point[x]) {
        ++undefined;
        continue;
      }
      ++n;
      if (k * *r_k.r_per_point[x] < *r_g.r_per_point[x]) ++bad;
    }
    rep.checks.push_back(tally("power_recurrence_lower", n, bad,
                               undefined ? std::to_string(undefined) + " points not recurrent under G^k"
                                         : std::string{}));
  } else {
    rep.checks.push_back(skipped("power_recurrence_lower", "G is not chain recurrent"));
  }

  {
    // exists eps' <= eps with r_eps(x, G^k) <= r_eps'(x, G)
    CheckResult c;
    c.name = "power_recurrence_eps_search";
    c.status = CheckStatus::Info;
    std::vector<Length> found_at(g.points());
    std::vector<bool> found(g.points(), false);
    double eps_prime = epsilon;
    double smallest = epsilon;
    for (std::size_t step = 0; step < kEpsSearchSteps; ++step, eps_prime /= 2) {
      const auto r = recurrence_time(build_chain_graph(g, eps_prime, policy), policy);
      for (std::size_t x = 0; x < g.points(); ++x) {
        if (found[x] || !r_k.r_per_point[x] || !r.r_per_point[x]) continue;
        if (*r_k.r_per_point[x] <= *r.r_per_point[x]) {
          found[x] = true;
          smallest = std::min(smallest, eps_prime);
        }
      }
    }
    for (std::size_t x = 0; x < g.points(); ++x)
      if (r_k.r_per_point[x]) ++c.checked;
    const auto hits = static_cast<std::size_t>(std::count(found.begin(), found.end(), true));
    c.detail = std::to_string(hits) + "/" + std::to_string(c.checked) +
               " points found an eps' (smallest used " + fmt(smallest) + ")";
    rep.checks.push_back(c);
  }

  const auto m_g = mixing_time(cg_g, delta, policy);
  const auto m_h = mixing_time(cg_h, delta, policy);
  const auto m_p = mixing_time(cg_p, delta, policy);
  const auto m_k = mixing_time(cg_k, delta, policy);

  rep.checks.push_back(tally("product_mixing_iff", 1, (m_g.mixing && m_h.mixing) != m_p.mixing ? 1 : 0));
  if (m_g.mixing && m_h.mixing) {
    std::size_t n = 0, bad = 0;
    for (std::size_t x = 0; x < g.points(); ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        ++n;
        const auto& v = m_p.m_per_point[x * ny + y];
        if (!v || *v != std::max(*m_g.m_per_point[x], *m_h.m_per_point[y])) ++bad;
      }
    ++n;
    if (m_p.m_global != std::max(*m_g.m_global, *m_h.m_global)) ++bad;
    rep.checks.push_back(tally("product_mixing_max", n, bad));
  } else {
    rep.checks.push_back(skipped("product_mixing_max", "a factor is not chain mixing"));
  }

  rep.checks.push_back(tally("power_mixing_implies", 1, m_k.mixing && !m_g.mixing ? 1 : 0));
  if (m_g.mixing && m_k.mixing) {
    rep.checks.push_back(tally("power_mixing_lower", 1, k * *m_k.m_global < *m_g.m_global ? 1 : 0));
  } else {
    rep.checks.push_back(
        skipped("power_mixing_lower", m_g.mixing ? "G^k is not chain mixing at this epsilon"
                                                 : "G is not chain mixing"));
  }

  {
    CheckResult c;
    c.name = "power_mixing_eps_search";
    c.status = CheckStatus::Info;
    if (!m_k.mixing) {
      c.detail = "G^k is not chain mixing at this epsilon";
    } else {
      c.checked = 1;
      double eps_prime = epsilon;
      bool hit = false;
      for (std::size_t step = 0; step < kEpsSearchSteps && !hit; ++step, eps_prime /= 2) {
        const auto m = mixing_time(build_chain_graph(g, eps_prime, policy), delta, policy);
        hit = m.m_global && *m_k.m_global <= *m.m_global;
        if (hit) c.detail = "found eps' = " + fmt(eps_prime);
      }
      if (!hit) c.detail = "search exhausted after " + std::to_string(kEpsSearchSteps) + " halvings";
    }
    rep.checks.push_back(c);
  }
  return rep;
}

UbdReport verify_ubd(const GeneratorSystem& g, const ScaleLadder& eps_ladder, double box_upper,
                     ExecPolicy policy) {
  UbdReport rep;
  rep.box_upper = box_upper;
  std::vector<double> products;
  for (double eps : eps_ladder) {
    const auto r = recurrence_time(build_chain_graph(g, eps, policy), policy);
    UbdEntry e;
    e.epsilon = eps;
    e.recurrent = r.recurrent;
    e.transitive = r.transitive;
    e.r = r.r_global;
    if (e.r) {
      e.product = static_cast<double>(*e.r) * std::pow(eps, box_upper + 1.0);
      products.push_back(*e.product);
      rep.max_product = std::max(rep.max_product.value_or(0.0), *e.product);
    }
    if (!e.transitive) rep.complete = false;
    rep.entries.push_back(e);
  }
  rep.growing = products.size() >= 2;
  for (std::size_t i = 1; i < products.size(); ++i)
    if (!(products[i] > products[i - 1])) rep.growing = false;
  if (!rep.complete) rep.note = "not chain transitive at some ladder epsilon; r reported where recurrent";
  return rep;
}

LbmReport verify_lbm(const GeneratorSystem& g, const ScaleLadder& eps_ladder,
                     const ScaleLadder& delta_ladder, double lower_b, const LbmOptions& opt,
                     ExecPolicy policy) {
  LbmReport rep;
  rep.lower_b = lower_b;
  rep.eps = eps_ladder.values();
  rep.slack = opt.slack;
  rep.log_m = std::log(static_cast<double>(g.m()));
  for (double d : delta_ladder) {
    LbmEntry e;
    e.delta = d;
    rep.per_delta.push_back(e);
  }
  ChainGraph finest;
  for (double eps : eps_ladder) {
    auto cg = build_chain_graph(g, eps, policy);
    const bool mixing = is_chain_mixing(cg);
    if (!mixing) rep.complete = false;
    for (auto& e : rep.per_delta)
      e.m_by_eps.push_back(mixing ? mixing_time(cg, e.delta, policy).m_global : std::nullopt);
    finest = std::move(cg);
  }
  std::optional<double> best;
  for (auto& e : rep.per_delta) {
    e.m_hat = e.m_by_eps.back();
    if (e.m_hat) {
      e.ratio = std::log(1.0 / e.delta) / static_cast<double>(*e.m_hat);
      best = std::max(best.value_or(-1.0), *e.ratio);
    }
  }
  rep.evaluated = best.has_value();
  if (rep.evaluated) {
    rep.rhs_raw = lower_b * *best - rep.log_m;
    rep.rhs = std::max(0.0, rep.rhs_raw);
  }

  SamplingOptions s = opt.sampling;
  if (s.word_sample == 0) s.word_sample = default_word_sample(g.m(), opt.n_range.hi, s.budget);
  CountOptions copt;
  copt.policy = policy;
  // The estimate is nondecreasing as eps shrinks in the limit, but on a grid the
  // finest eps saturates first; the ladder max is the usable surrogate. Only
  // curves with a slope count: a single point is log N / n and overshoots.
  rep.h_hat = 0.0;
  bool sloped = false;
  for (double eps : eps_ladder) {
    const auto b = bufetov_entropy(g, eps, opt.n_range, s, copt);
    if (b.raw_curve.size() < 2) continue;
    sloped = true;
    rep.h_hat = std::max(rep.h_hat, b.value);
  }
  SpectralOptions sopt;
  sopt.policy = policy;
  rep.h_spectral = spectral_growth(finest, sopt).value;
  rep.holds = rep.evaluated && rep.h_hat >= rep.rhs - rep.slack;
  if (!rep.complete) rep.note = "not chain mixing at some ladder epsilon; mixing times missing there";
  if (!sloped) rep.note += std::string(rep.note.empty() ? "" : "; ") + "orbit-count curves saturate before two lengths";
  return rep;
}

}  // namespace chaindyn
