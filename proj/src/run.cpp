#include "chaindyn/run.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>

#include "chaindyn/corpus.hpp"
#include "chaindyn/digraph.hpp"
#include "chaindyn/entropy.hpp"
#include "chaindyn/recurrence.hpp"
#include "chaindyn/structure.hpp"

namespace chaindyn {

const char* to_string(AnalysisStatus s) {
  switch (s) {
    case AnalysisStatus::Ok: return "ok";
    case AnalysisStatus::PreconditionFailed: return "precondition-failed";
    case AnalysisStatus::CheckFailed: return "check-failed";
  }
  return "?";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string system_digest(const RunConfig& cfg, const GeneratorSystem& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const auto space = cfg.space.dump();
  feed(space.data(), space.size());
  for (const auto& t : g.tables()) {
    const std::uint64_t n = t.size();
    feed(&n, sizeof n);
    for (PointId y : t) {
      const std::uint64_t v = y;
      feed(&v, sizeof v);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json length_json(const Length& l) { return l ? Json(*l) : Json(nullptr); }

Json lengths_json(const std::vector<Length>& v) {
  Json out = Json::array();
  for (const auto& l : v) out.push_back(length_json(l));
  return out;
}

std::string cell(const Length& l) { return l ? std::to_string(*l) : ""; }

Json ladder_json(const ScaleLadder& l) { return l.values(); }

struct Context {
  const RunConfig& cfg;
  const GeneratorSystem& g;
  std::vector<double> default_eps;
};

ScaleLadder eps_of(const Context& ctx, const AnalysisRequest& a, const char* key = "eps") {
  return ladder_param(a.params, key, ctx.default_eps);
}

std::optional<ScaleLadder> optional_ladder(const AnalysisRequest& a, const char* key) {
  if (!a.params.contains(key)) return std::nullopt;
  return ladder_param(a.params, key, {});
}

Json curve_json(const std::vector<std::pair<std::size_t, double>>& c) {
  Json out = Json::array();
  for (const auto& [n, v] : c) out.push_back({n, v});
  return out;
}

Json estimate_json(const EntropyEstimate& e) {
  Json j = {{"method", to_string(e.method)},
            {"value", e.value},
            {"epsilon", e.epsilon},
            {"delta", e.delta},
            {"n_lo", e.n_lo},
            {"n_hi", e.n_hi},
            {"fit_lo", e.fit_lo},
            {"word_sample", e.word_sample},
            {"all_exact", e.all_exact},
            {"raw_curve", curve_json(e.raw_curve)}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

void add_curve_rows(CsvTable& t, const EntropyEstimate& e) {
  for (const auto& [n, v] : e.raw_curve)
    t.rows.push_back({to_string(e.method), format_number(e.epsilon), format_number(e.delta), std::to_string(n),
                      format_number(v)});
}

Json spectral_json(const SpectralGrowth& s, double delta) {
  return {{"delta", delta},
          {"value", s.value},
          {"log_lambda", s.log_lambda},
          {"perron_log", s.perron_log},
          {"perron_agrees", s.perron_agrees},
          {"window", s.window},
          {"iterations", s.iterations},
          {"converged", s.converged}};
}

// ---- analyses ----

AnalysisOutput analyze_entropy(const Context& ctx, const AnalysisRequest& a) {
  const auto& g = ctx.g;
  const auto eps = eps_of(ctx, a);
  const auto delta = optional_ladder(a, "delta").value_or(eps);
  NRange range;
  if (a.params.contains("n_range")) range = {a.params["n_range"][0].get<std::size_t>(), a.params["n_range"][1].get<std::size_t>()};
  SamplingOptions sampling;
  sampling.seed = ctx.cfg.seed;
  sampling.budget = ctx.cfg.budget;
  sampling.word_sample = a.params.contains("word_sample") ? a.params["word_sample"].get<std::size_t>()
                                                          : default_word_sample(g.m(), range.hi, ctx.cfg.budget);
  CountOptions opt;
  if (a.params.contains("strict")) opt.strict = a.params["strict"].get<bool>();
  opt.include_endpoint = a.params.value("include_endpoint", false);
  const std::string method = a.params.value("method", "all");

  AnalysisOutput out;
  out.payload = {{"epsilon", ladder_json(eps)},
                 {"delta", ladder_json(delta)},
                 {"n_range", {range.lo, range.hi}},
                 {"word_sample", sampling.word_sample},
                 {"quantization_error", g.quantization_error()}};
  CsvTable curves{{"method", "epsilon", "delta", "n", "log_avg_count"}, {}};

  if (method == "all" || method == "pseudo") {
    const auto m = pseudo_entropy(g, eps, delta, range, sampling, opt);
    Json cells = Json::array();
    Json values = Json::array();
    for (const auto& row : m.cells) {
      Json r = Json::array(), v = Json::array();
      for (const auto& c : row) {
        r.push_back(estimate_json(c));
        v.push_back(c.value);
        add_curve_rows(curves, c);
      }
      cells.push_back(r);
      values.push_back(v);
    }
    out.payload["pseudo"] = {{"matrix", values}, {"corner", m.corner}, {"cells", cells}};
  }
  if (method == "all" || method == "bufetov") {
    Json list = Json::array();
    for (double e : eps) {
      const auto est = bufetov_entropy(g, e, range, sampling, opt);
      list.push_back(estimate_json(est));
      add_curve_rows(curves, est);
    }
    out.payload["bufetov"] = list;
  }
  if (method == "all" || method == "spectral") {
    Json list = Json::array();
    for (double d : delta) {
      const auto cg = build_chain_graph(g, d);
      auto j = spectral_json(spectral_growth(cg), d);
      j["effective_tolerance"] = cg.effective_tolerance();
      list.push_back(j);
    }
    out.payload["spectral"] = list;
  }
  out.tables["entropy_curves"] = std::move(curves);
  return out;
}

AnalysisOutput analyze_recurrence(const Context& ctx, const AnalysisRequest& a) {
  AnalysisOutput out;
  const auto eps = eps_of(ctx, a);
  CsvTable t{{"epsilon", "r_global"}, {}};
  Json entries = Json::array();
  for (double e : eps) {
    const auto cg = build_chain_graph(ctx.g, e);
    const auto r = recurrence_time(cg);
    entries.push_back({{"epsilon", e},
                       {"effective_tolerance", cg.effective_tolerance()},
                       {"recurrent", r.recurrent},
                       {"transitive", r.transitive},
                       {"mixing", r.mixing},
                       {"period", r.period},
                       {"r_global", length_json(r.r_global)},
                       {"r_per_point", lengths_json(r.r_per_point)},
                       {"wielandt_cap", r.wielandt_cap}});
    t.rows.push_back({format_number(e), cell(r.r_global)});
  }
  out.payload = {{"epsilon", ladder_json(eps)}, {"entries", entries}};
  out.tables["recurrence"] = std::move(t);
  return out;
}

AnalysisOutput analyze_mixing(const Context& ctx, const AnalysisRequest& a) {
  AnalysisOutput out;
  const auto eps = eps_of(ctx, a);
  const auto radii = optional_ladder(a, "delta");
  CsvTable t{{"epsilon", "delta", "m_global"}, {}};
  Json entries = Json::array();
  for (double e : eps) {
    const auto cg = build_chain_graph(ctx.g, e);
    const std::vector<double> rs = radii ? radii->values() : std::vector<double>{e};
    for (double r : rs) {
      const auto m = mixing_time(cg, r);
      entries.push_back({{"epsilon", e},
                         {"delta", r},
                         {"effective_tolerance", cg.effective_tolerance()},
                         {"mixing", m.mixing},
                         {"m_global", length_json(m.m_global)},
                         {"m_per_point", lengths_json(m.m_per_point)},
                         {"wielandt_cap", m.wielandt_cap}});
      t.rows.push_back({format_number(e), format_number(r), cell(m.m_global)});
    }
  }
  out.payload = {{"epsilon", ladder_json(eps)}, {"delta", radii ? ladder_json(*radii) : Json("epsilon")},
                 {"entries", entries}};
  out.tables["mixing"] = std::move(t);
  return out;
}

Json decomposition_json(const DecompositionReport& r) {
  Json mix = Json::array();
  for (bool b : r.per_class_mixing) mix.push_back(b);
  return {{"epsilon", r.epsilon},
          {"transitive", true},
          {"k", r.k},
          {"case", to_string(r.kind)},
          {"class_sizes", r.class_sizes},
          {"permutation_ok", r.permutation_ok},
          {"classes_verified", r.classes_verified},
          {"verified_sources", r.verified_sources},
          {"per_class_mixing", mix},
          {"power_fallback", r.power_fallback},
          {"class_of", r.class_of}};
}

AnalysisOutput analyze_decompose(const Context& ctx, const AnalysisRequest& a) {
  AnalysisOutput out;
  const auto eps = eps_of(ctx, a);
  CsvTable t{{"epsilon", "point_id", "class"}, {}};
  Json entries = Json::array();
  for (double e : eps) {
    const auto cg = build_chain_graph(ctx.g, e);
    if (!is_chain_transitive(cg)) {
      entries.push_back({{"epsilon", e}, {"transitive", false}, {"note", "union graph is not strongly connected"}});
      out.status = AnalysisStatus::PreconditionFailed;
      continue;
    }
    const auto r = epsilon_classes(cg, ctx.cfg.budget);
    auto j = decomposition_json(r);
    j["effective_tolerance"] = cg.effective_tolerance();
    entries.push_back(j);
    for (std::size_t v = 0; v < r.class_of.size(); ++v)
      t.rows.push_back({format_number(e), std::to_string(v), std::to_string(r.class_of[v])});
  }
  out.payload = {{"epsilon", ladder_json(eps)}, {"entries", entries}};
  out.tables["classes"] = std::move(t);
  return out;
}

Json ladder_diag_json(const LadderDiagnostic& d) {
  Json entries = Json::array();
  for (const auto& [e, k] : d.entries) entries.push_back({{"epsilon", e}, {"k", k}});
  Json j = {{"entries", entries},
            {"divisibility_ok", d.divisibility_ok},
            {"growth", to_string(d.growth)},
            {"truncated", d.truncated},
            {"finest_classes", d.finest_classes}};
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

AnalysisOutput analyze_ladder(const Context& ctx, const AnalysisRequest& a) {
  AnalysisOutput out;
  const auto eps = eps_of(ctx, a);
  const double factor = a.params.value("delta_factor", 1.0);
  const auto d = k_ladder(ctx.g, eps, DeltaRule{factor});
  out.payload = ladder_diag_json(d);
  out.payload["epsilon"] = ladder_json(eps);
  out.payload["delta_factor"] = factor;
  CsvTable t{{"epsilon", "k"}, {}};
  for (const auto& [e, k] : d.entries) t.rows.push_back({format_number(e), std::to_string(k)});
  out.tables["ladder"] = std::move(t);
  if (d.entries.empty()) out.status = AnalysisStatus::PreconditionFailed;
  else if (!d.divisibility_ok) out.status = AnalysisStatus::CheckFailed;
  return out;
}

// ---- verify-all ----

struct Suite {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::size_t checked = 0;
  std::size_t failures = 0;
  Json detail = Json::object();

  void check(bool ok) {
    ++checked;
    if (!ok) {
      ++failures;
      status = CheckStatus::Fail;
    }
  }
  Json json() const {
    Json j = {{"name", name}, {"status", to_string(status)}, {"checked", checked}, {"failures", failures}};
    if (!detail.empty()) j["detail"] = detail;
    return j;
  }
};

Suite skipped(std::string name, std::string why) {
  Suite s{std::move(name), CheckStatus::Skipped};
  s.detail["reason"] = std::move(why);
  return s;
}

// Box-dimension estimate on diam 2^-i, i >= 1, kept above twice the
// resolution where possible. Spaces too coarse for two scales get zeros.
BoxDimension box_estimate(const FiniteMetricSpace& s) {
  const double diam = s.diameter();
  const double res = s.min_positive_distance();
  std::vector<double> ladder;
  for (int i = 1; i <= 5; ++i) {
    const double v = std::ldexp(diam, -i);
    if (v <= res || (v <= 2 * res && ladder.size() >= 2)) break;
    ladder.push_back(v);
  }
  if (ladder.size() < 2) {
    BoxDimension none;
    none.exact = false;
    return none;
  }
  return box_dimension_estimate(s, ScaleLadder(ladder));
}

Json box_json(const BoxDimension& b) {
  Json curve = Json::array();
  for (const auto& [d, n] : b.curve) curve.push_back({d, n});
  return {{"available", !b.curve.empty()}, {"lower", b.lower_b}, {"upper", b.upper_b},
          {"exact_covers", b.exact}, {"curve", curve}};
}

Suite suite_metric(const GeneratorSystem& g) {
  Suite s{"metric_axioms"};
  const auto rep = validate_metric(g.space());
  s.check(rep.ok);
  s.detail = {{"exhaustive", rep.exhaustive}};
  if (!rep.ok) s.detail["violation"] = rep.axiom;
  return s;
}

Suite suite_skew(const Context& ctx, double delta) {
  Suite s{"skew_identity"};
  try {
    const auto r = verify_skew_identity(ctx.g, delta, ctx.cfg.budget);
    s.check(r.converged && r.discrepancy <= 1e-6);
    s.detail = {{"delta", r.delta},     {"depth", r.depth},         {"skew_points", r.skew_points},
                {"log_m", r.log_m},     {"h_g", r.h_g},             {"h_f", r.h_f},
                {"discrepancy", r.discrepancy}, {"tolerance", 1e-6}, {"window", r.window},
                {"converged", r.converged}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Resource) throw;
    return skipped(s.name, e.what());
  }
  return s;
}

Suite suite_recurrence(const Context& ctx, const ScaleLadder& eps) {
  Suite s{"recurrence_invariants"};
  std::vector<RecurrenceReport> reps;
  for (double e : eps) reps.push_back(recurrence_time(build_chain_graph(ctx.g, e)));
  Json rows = Json::array();
  for (const auto& r : reps) {
    s.check(!r.mixing || r.transitive);
    s.check(!r.transitive || r.recurrent);
    if (r.transitive)
      for (const auto& l : r.r_per_point) s.check(l && *l % r.period == 0);
    rows.push_back({{"epsilon", r.epsilon}, {"r_global", length_json(r.r_global)}, {"period", r.period}});
  }
  // finer epsilon has fewer chains, so recurrence can only take longer
  for (std::size_t i = 1; i < reps.size(); ++i)
    for (std::size_t x = 0; x < ctx.g.points(); ++x) {
      const auto& fine = reps[i].r_per_point[x];
      const auto& coarse = reps[i - 1].r_per_point[x];
      if (fine) s.check(coarse && *coarse <= *fine);
    }
  s.detail["ladder"] = rows;
  return s;
}

Suite suite_mixing(const Context& ctx, const ScaleLadder& eps, const ScaleLadder& radii) {
  Suite s{"mixing_invariants"};
  const std::size_t n = ctx.g.points();
  // m[i][j] = mixing report at eps[i], radius radii[j]
  std::vector<std::vector<MixingReport>> m;
  Json rows = Json::array();
  for (double e : eps) {
    const auto cg = build_chain_graph(ctx.g, e);
    m.emplace_back();
    for (double r : radii) {
      m.back().push_back(mixing_time(cg, r));
      rows.push_back({{"epsilon", e}, {"delta", r}, {"m_global", length_json(m.back().back().m_global)}});
    }
  }
  auto no_later = [&](const MixingReport& early, const MixingReport& late) {
    for (std::size_t x = 0; x < n; ++x)
      if (late.m_per_point[x]) s.check(early.m_per_point[x] && *early.m_per_point[x] <= *late.m_per_point[x]);
  };
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (i > 0) no_later(m[i - 1][j], m[i][j]);  // coarser epsilon mixes no later
      if (j > 0) no_later(m[i][j - 1], m[i][j]);  // larger start ball mixes no later
    }
  s.detail["ladder"] = rows;
  return s;
}

Suite suite_connectivity(const Context& ctx, const ScaleLadder& eps) {
  Suite s{"connectivity_equivalence"};
  Json rows = Json::array();
  std::size_t applicable = 0;
  for (double e : eps) {
    const auto r = connectivity_equivalence_check(ctx.g, e, ctx.cfg.budget);
    rows.push_back({{"epsilon", e},
                    {"applicable", r.applicable},
                    {"recurrent", r.recurrent},
                    {"transitive", r.transitive},
                    {"totally_transitive", r.totally_transitive},
                    {"power_cap", r.power_cap},
                    {"mixing", r.mixing},
                    {"all_agree", r.all_agree}});
    if (r.uncovered_power) rows.back()["uncovered_power"] = r.uncovered_power;
    if (!r.note.empty()) rows.back()["note"] = r.note;
    if (!r.applicable) continue;
    ++applicable;
    s.check(r.all_agree);
  }
  if (!applicable) s.status = CheckStatus::Skipped;
  s.detail["ladder"] = rows;
  return s;
}

Suite suite_ubd(const Context& ctx, const ScaleLadder& eps, const BoxDimension& box) {
  Suite s{"ubd_trend", CheckStatus::Info};
  const auto r = verify_ubd(ctx.g, eps, box.upper_b);
  Json rows = Json::array();
  for (const auto& e : r.entries)
    rows.push_back({{"epsilon", e.epsilon},
                    {"transitive", e.transitive},
                    {"r", length_json(e.r)},
                    {"product", e.product ? Json(*e.product) : Json(nullptr)}});
  s.detail = {{"box_upper", r.box_upper},
              {"entries", rows},
              {"max_product", r.max_product ? Json(*r.max_product) : Json(nullptr)},
              {"growing", r.growing},
              {"complete", r.complete}};
  if (!r.note.empty()) s.detail["note"] = r.note;
  return s;
}

Suite suite_lbm(const Context& ctx, const ScaleLadder& eps, const ScaleLadder& delta, const BoxDimension& box) {
  Suite s{"lbm_inequality"};
  LbmOptions opt;
  opt.sampling.seed = ctx.cfg.seed;
  opt.sampling.budget = ctx.cfg.budget;
  const auto r = verify_lbm(ctx.g, eps, delta, box.lower_b, opt);
  Json rows = Json::array();
  for (const auto& d : r.per_delta)
    rows.push_back({{"delta", d.delta},
                    {"m_by_eps", lengths_json(d.m_by_eps)},
                    {"m_hat", length_json(d.m_hat)},
                    {"ratio", d.ratio ? Json(*d.ratio) : Json(nullptr)}});
  s.detail = {{"lower_b", r.lower_b}, {"epsilon", r.eps},   {"per_delta", rows},
              {"log_m", r.log_m},     {"rhs_raw", r.rhs_raw}, {"rhs", r.rhs},
              {"h_hat", r.h_hat},     {"h_spectral", r.h_spectral}, {"slack", r.slack},
              {"complete", r.complete}};
  if (!r.note.empty()) s.detail["note"] = r.note;
  if (!r.evaluated) {
    s.status = CheckStatus::Skipped;
    return s;
  }
  s.check(r.holds);
  return s;
}

Suite suite_decomposition(const Context& ctx, const ScaleLadder& eps) {
  Suite s{"decomposition"};
  Json rows = Json::array();
  for (double e : eps) {
    const auto cg = build_chain_graph(ctx.g, e);
    if (!is_chain_transitive(cg)) {
      rows.push_back({{"epsilon", e}, {"transitive", false}});
      continue;
    }
    const auto r = epsilon_classes(cg, ctx.cfg.budget);
    s.check(r.permutation_ok);
    s.check(r.classes_verified);
    for (bool b : r.per_class_mixing) s.check(b);
    rows.push_back({{"epsilon", e}, {"k", r.k}, {"case", to_string(r.kind)}, {"class_sizes", r.class_sizes}});
  }
  if (!s.checked) s.status = CheckStatus::Skipped;
  s.detail["ladder"] = rows;
  return s;
}

Suite suite_ladder(const Context& ctx, const ScaleLadder& eps) {
  Suite s{"ladder_divisibility"};
  const auto d = k_ladder(ctx.g, eps);
  if (d.entries.empty()) return skipped(s.name, d.note);
  s.check(d.divisibility_ok);
  Json j = ladder_diag_json(d);
  j.erase("finest_classes");
  s.detail = j;
  return s;
}

void merge_checks(Suite& s, const PropositionReport& rep) {
  for (const auto& c : rep.checks) {
    if (c.status == CheckStatus::Skipped || c.status == CheckStatus::Info) continue;
    s.checked += c.checked;
    s.failures += c.failures;
    if (c.status == CheckStatus::Fail) s.status = CheckStatus::Fail;
  }
}

Json checks_json(const PropositionReport& rep) {
  Json out = Json::array();
  for (const auto& c : rep.checks) {
    Json j = {{"name", c.name}, {"status", to_string(c.status)}, {"checked", c.checked}, {"failures", c.failures}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    out.push_back(j);
  }
  return out;
}

Suite suite_self_product(const Context& ctx, std::size_t k, double eps, double delta) {
  Suite s{"product_and_power"};
  const std::size_t n = ctx.g.points();
  if (n * n > 4096) return skipped(s.name, "G x G has more than 4096 points");
  if (ctx.g.m() * ctx.g.m() > ctx.cfg.budget.max_generators)
    return skipped(s.name, "G x G exceeds the generator budget");
  const auto rep = proposition_suite(ctx.g, ctx.g, k, eps, delta, ctx.cfg.budget);
  merge_checks(s, rep);
  s.detail = {{"epsilon", eps}, {"delta", delta}, {"k", k}, {"checks", checks_json(rep)}};
  return s;
}

std::vector<Suite> corpus_suites(std::uint64_t seed, std::size_t count) {
  const auto corpus = random_corpus(seed, count);
  Suite props{"corpus_propositions"}, period{"corpus_period_basepoint"}, counts{"corpus_chain_counts"},
      sandwich{"corpus_sandwich"};

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& a = corpus[i];
    const auto& b = corpus[(i + 1) % corpus.size()];
    const double eps = std::max(a.epsilon, b.epsilon);
    merge_checks(props, proposition_suite(a.system, b.system, 1 + i % 3, eps, 0.05));

    const auto cg = build_chain_graph(a.system, a.epsilon);
    const auto& rel = cg.union_relation();
    std::vector<std::size_t> all(cg.points());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t k = digraph::period_of(rel, all, 0);
    for (std::size_t root = 1; root < all.size(); ++root) period.check(digraph::period_of(rel, all, root) == k);

    for (std::size_t n = 0; n <= 4; ++n) {
      BigCount sum = 0;
      for (const auto& w : all_words(cg.m(), n)) sum += count_chains_for_word(cg, w);
      counts.check(sum == total_chain_count(cg, n));
    }

    const auto& g = a.system;
    if (g.points() > 8 || g.m() > 2) continue;
    for (double delta : {0.05, 0.1, 0.2}) {
      const auto dg = build_chain_graph(g, delta);
      for (double e : {0.04, 0.1, 0.25})
        for (std::size_t n = 1; n <= 3; ++n)
          for (const auto& w : all_words(g.m(), n)) {
            const auto sep = pseudo_separated_count(dg, w, e);
            const auto span = pseudo_spanning_count(dg, w, e);
            const auto half = pseudo_spanning_count(dg, w, e / 2);
            if (sep.exactness != Exactness::Exact || span.exactness != Exactness::Exact ||
                half.exactness != Exactness::Exact)
              continue;
            sandwich.check(half.count >= sep.count && sep.count >= span.count);
          }
    }
  }
  for (auto* s : {&props, &period, &counts, &sandwich}) {
    s->detail["seed"] = seed;
    s->detail["systems"] = corpus.size();
  }
  if (!sandwich.checked) sandwich.status = CheckStatus::Skipped;
  return {props, period, counts, sandwich};
}

AnalysisOutput analyze_verify_all(const Context& ctx, const AnalysisRequest& a) {
  const auto eps = eps_of(ctx, a);
  const auto delta = optional_ladder(a, "delta").value_or(ScaleLadder({eps.finest()}));
  const auto lbm_eps = optional_ladder(a, "lbm_eps").value_or(eps);
  const double skew_delta = a.params.value("skew_delta", delta.finest());
  const std::size_t corpus = a.params.value("corpus", std::size_t{20});
  const std::size_t k = a.params.value("k", std::size_t{2});

  const auto box = box_estimate(ctx.g.space());
  std::vector<Suite> suites;
  suites.push_back(suite_metric(ctx.g));
  suites.push_back(suite_skew(ctx, skew_delta));
  suites.push_back(suite_recurrence(ctx, eps));
  suites.push_back(suite_mixing(ctx, eps, delta));
  suites.push_back(suite_connectivity(ctx, eps));
  suites.push_back(suite_decomposition(ctx, eps));
  suites.push_back(suite_ladder(ctx, eps));
  suites.push_back(suite_ubd(ctx, eps, box));
  suites.push_back(suite_lbm(ctx, lbm_eps, delta, box));
  suites.push_back(suite_self_product(ctx, k, eps.finest(), delta.finest()));
  if (corpus > 0)
    for (auto& s : corpus_suites(ctx.cfg.seed, corpus)) suites.push_back(std::move(s));

  AnalysisOutput out;
  Json list = Json::array();
  std::size_t failed = 0;
  for (const auto& s : suites) {
    list.push_back(s.json());
    if (s.status == CheckStatus::Fail) ++failed;
  }
  out.payload = {{"epsilon", ladder_json(eps)},
                 {"delta", ladder_json(delta)},
                 {"lbm_epsilon", ladder_json(lbm_eps)},
                 {"skew_delta", skew_delta},
                 {"box_dimension", box_json(box)},
                 {"failed_suites", failed},
                 {"suites", list}};

  CsvTable ubd{{"epsilon", "r_global", "product"}, {}};
  for (const auto& s : suites)
    if (s.name == "ubd_trend")
      for (const auto& e : s.detail["entries"])
        ubd.rows.push_back({format_number(e["epsilon"].get<double>()),
                            e["r"].is_null() ? "" : std::to_string(e["r"].get<std::size_t>()),
                            e["product"].is_null() ? "" : format_number(e["product"].get<double>())});
  out.tables["ubd"] = std::move(ubd);
  if (failed) out.status = AnalysisStatus::CheckFailed;
  return out;
}

AnalysisOutput dispatch(const Context& ctx, const AnalysisRequest& a) {
  if (a.kind == "entropy") return analyze_entropy(ctx, a);
  if (a.kind == "recurrence") return analyze_recurrence(ctx, a);
  if (a.kind == "mixing") return analyze_mixing(ctx, a);
  if (a.kind == "decompose") return analyze_decompose(ctx, a);
  if (a.kind == "ladder") return analyze_ladder(ctx, a);
  if (a.kind == "verify-all") return analyze_verify_all(ctx, a);
  fail(ErrorKind::Config, "unknown analysis '" + a.kind + "'");
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text, std::vector<std::filesystem::path>& written) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::Resource, "cannot write " + p.string());
  out << text;
  if (!out) fail(ErrorKind::Resource, "write failed for " + p.string());
  written.push_back(p);
}

}  // namespace

RunResult run_analyses(const RunConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto started = utc_now();
  const auto t0 = Clock::now();
  const auto g = build_system(cfg);
  const double diam = g.space().diameter();
  Context ctx{cfg, g, {0.2 * diam, 0.1 * diam, 0.05 * diam}};

  RunResult res;
  std::vector<const AnalysisRequest*> order;
  for (const auto& a : cfg.analyses) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](auto* x, auto* y) { return x->name < y->name; });

  Json analyses = Json::object();
  Json timings = Json::object();
  for (const auto* a : order) {
    const auto s0 = Clock::now();
    AnalysisOutput out;
    try {
      out = dispatch(ctx, *a);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config) throw;
      out = AnalysisOutput{};
      out.status = AnalysisStatus::PreconditionFailed;
      out.payload = {{"error", to_string(e.kind())}, {"message", e.what()}};
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - s0).count();
    Json entry = {{"kind", a->kind}, {"status", to_string(out.status)}, {"params", a->params}};
    entry["result"] = out.payload;
    analyses[a->name] = entry;
    timings[a->name] = out.seconds;
    if (out.status != AnalysisStatus::Ok) res.exit_code = 1;
    res.analyses[a->name] = std::move(out);
  }

  Json generators = Json::array();
  for (const auto& m : cfg.maps) generators.push_back(map_to_json(m));
  res.report = {{"schema_version", kSchemaVersion},
                {"system_digest", system_digest(cfg, g)},
                {"system",
                 {{"label", cfg.label},
                  {"space", cfg.space},
                  {"points", g.points()},
                  {"generators", generators},
                  {"diameter", diam},
                  {"min_positive_distance", g.space().min_positive_distance()},
                  {"quantization_error", g.quantization_error()},
                  {"seed", cfg.seed},
                  {"budget",
                   {{"points", cfg.budget.max_points},
                    {"words", cfg.budget.max_words},
                    {"generators", cfg.budget.max_generators}}}}},
                {"analyses", analyses}};
  res.metadata = {{"schema_version", kSchemaVersion},
                  {"started_at", started},
                  {"finished_at", utc_now()},
                  {"threads", omp_get_max_threads()},
                  {"total_seconds", std::chrono::duration<double>(Clock::now() - t0).count()},
                  {"analysis_seconds", timings},
                  {"exit_code", res.exit_code}};
  return res;
}

RunResult run(const RunConfig& cfg) {
  auto res = run_analyses(cfg);
  const std::filesystem::path dir = cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Resource, "cannot create output directory " + dir.string() + ": " + ec.message());
  if (cfg.format != OutputFormat::Csv) {
    write_file(dir / "report.json", res.report.dump(2) + "\n", res.written);
    write_file(dir / "metadata.json", res.metadata.dump(2) + "\n", res.written);
  }
  if (cfg.format != OutputFormat::Json)
    for (const auto& [name, out] : res.analyses)
      for (const auto& [suffix, table] : out.tables)
        write_file(dir / (name + "." + suffix + ".csv"), to_csv(table), res.written);
  return res;
}

}  // namespace chaindyn
