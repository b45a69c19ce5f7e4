#include "chaindyn/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace chaindyn {

namespace {

using Values = std::map<std::string, double>;

struct Preset {
  std::string name;    // exact name, or family prefix ending in '-'
  std::string suffix;  // family parameter set by the name suffix, empty for fixed presets
  std::string description;
  Values defaults;
  std::function<Json(const Values&)> build;  // {space, maps, defaults: {kind: params}}
};

std::size_t as_size(const Values& v, const std::string& key, std::size_t lo = 1) {
  const double x = v.at(key);
  if (!(x >= static_cast<double>(lo)) || x != std::floor(x) || x > 1e9)
    fail(ErrorKind::Config, "preset parameter " + key + " must be an integer >= " + std::to_string(lo));
  return static_cast<std::size_t>(x);
}

double positive(const Values& v, const std::string& key) {
  const double x = v.at(key);
  if (!(x > 0)) fail(ErrorKind::Config, "preset parameter " + key + " must be positive");
  return x;
}

// Coarse values above eps, then eps itself.
Json down_to(double eps, std::initializer_list<double> coarse) {
  Json out = Json::array();
  for (double c : coarse)
    if (c > eps) out.push_back(c);
  out.push_back(eps);
  return out;
}

Json circle(std::size_t n) { return {{"kind", "circle"}, {"n", n}}; }

Json dyadic(std::size_t from, std::size_t to) {
  Json out = Json::array();
  for (std::size_t i = from; i <= to; ++i) out.push_back(std::ldexp(1.0, -static_cast<int>(i)));
  return out;
}

const std::vector<Preset>& registry() {
  static const std::vector<Preset> presets = {
      {"example-4.1", "",
       "two circles at distance 1, maps 2x and 3x each landing in the other circle; periodic with k = 2",
       {{"n", 32}, {"eps", 0.05}},
       [](const Values& v) {
         const auto n = as_size(v, "n");
         const double eps = positive(v, "eps");
         const Json coarse = down_to(eps, {0.2, 0.1});
         return Json{
             {"space", {{"kind", "union"}, {"parts", {circle(n), circle(n)}}, {"cross_distance", 1.0}}},
             {"maps", {"cross(2, 0, 1)", "cross(3, 0, 1)"}},
             {"defaults",
              {{"entropy", {{"eps", {eps}}, {"delta", {eps}}, {"n_range", {1, 4}}}},
               {"recurrence", {{"eps", coarse}}},
               {"mixing", {{"eps", {eps}}, {"delta", {eps}}}},
               {"decompose", {{"eps", {eps}}}},
               {"ladder", {{"eps", coarse}}},
               {"verify-all", {{"eps", coarse}, {"delta", {eps}}, {"lbm_eps", {eps}}, {"skew_delta", eps}}}}}};
       }},
      {"example-4.2", "",
       "prepend-0 and prepend-1 on the depth-truncated two-symbol shift; chain mixing",
       {{"depth", 6}, {"eps", 0.3}},
       [](const Values& v) {
         const auto depth = as_size(v, "depth");
         const double eps = positive(v, "eps");
         Json ladder = down_to(eps, {0.5});
         ladder.push_back(eps / 2);
         return Json{
             {"space", {{"kind", "shift"}, {"m", 2}, {"depth", depth}}},
             {"maps", {"prepend(0)", "prepend(1)"}},
             {"defaults",
              {{"entropy", {{"eps", {eps}}, {"delta", {eps}}, {"n_range", {1, 4}}}},
               {"recurrence", {{"eps", ladder}}},
               {"mixing", {{"eps", ladder}}},
               {"decompose", {{"eps", {eps}}}},
               {"ladder", {{"eps", ladder}}},
               {"verify-all", {{"eps", ladder}, {"delta", {eps}}, {"lbm_eps", ladder}, {"skew_delta", eps}}}}}};
       }},
      {"doubling-tripling", "", "circle grid with the maps 2x and 3x mod 1", {{"n", 128}},
       [](const Values& v) {
         const auto n = as_size(v, "n");
         const Json ladder = {0.2, 0.1, 0.05, 0.025};
         return Json{
             {"space", circle(n)},
             {"maps", {"affine(2, 0)", "affine(3, 0)"}},
             {"defaults",
              {{"entropy", {{"eps", {0.1, 0.05}}, {"delta", {0.1, 0.05}}, {"n_range", {1, 5}}}},
               {"recurrence", {{"eps", ladder}}},
               {"mixing", {{"eps", ladder}, {"delta", {0.2, 0.1}}}},
               {"decompose", {{"eps", {0.05}}}},
               {"ladder", {{"eps", ladder}}},
               {"verify-all",
                {{"eps", ladder}, {"delta", {0.2, 0.1}}, {"lbm_eps", {0.1, 0.05, 0.025}}, {"skew_delta", 0.05}}}}}};
       }},
      {"doubling", "", "circle grid with the single map 2x mod 1", {{"n", 128}},
       [](const Values& v) {
         const auto n = as_size(v, "n");
         const double s = 1.0 / static_cast<double>(n);
         const Json ladder = {4 * s, 2 * s, s};
         return Json{{"space", circle(n)},
                     {"maps", {"affine(2, 0)"}},
                     {"defaults",
                      {{"entropy", {{"eps", {s}}, {"delta", {s}}, {"n_range", {1, 6}}}},
                       {"recurrence", {{"eps", ladder}}},
                       {"mixing", {{"eps", ladder}}},
                       {"decompose", {{"eps", {s}}}},
                       {"ladder", {{"eps", ladder}}},
                       {"verify-all", {{"eps", ladder}, {"delta", {s}}, {"lbm_eps", down_to(s, {0.25, 0.125, 4 * s, 2 * s})}, {"skew_delta", s}}}}}};
       }},
      {"odometer-", "L", "dyadic adding machine on L binary digits; k grows with each scale", {{"L", 6}},
       [](const Values& v) {
         const auto L = as_size(v, "L");
         const Json ladder = dyadic(1, L + 1);
         const double fine = std::ldexp(1.0, -static_cast<int>(L));
         return Json{
             {"space", {{"kind", "odometer"}, {"radices", std::vector<std::size_t>(L, 2)}}},
             {"maps", {"odometer"}},
             {"defaults",
              {{"entropy", {{"eps", {fine}}, {"delta", {fine}}, {"n_range", {1, 4}}}},
               {"recurrence", {{"eps", ladder}}},
               {"mixing", {{"eps", ladder}}},
               {"decompose", {{"eps", {fine}}}},
               {"ladder", {{"eps", ladder}}},
               {"verify-all", {{"eps", ladder}, {"delta", {fine}}, {"lbm_eps", {fine}}, {"skew_delta", fine}}}}}};
       }},
      {"identity-", "n", "n-point circle grid with two identity maps", {{"n", 4}},
       [](const Values& v) {
         const auto n = as_size(v, "n");
         const double s = 1.0 / static_cast<double>(n);
         return Json{{"space", circle(n)},
                     {"maps", {"identity", "identity"}},
                     {"defaults",
                      {{"entropy", {{"eps", {s}}, {"delta", {s}}, {"n_range", {1, 4}}}},
                       {"recurrence", {{"eps", {s}}}},
                       {"mixing", {{"eps", {s}}}},
                       {"decompose", {{"eps", {s}}}},
                       {"ladder", {{"eps", {s}}}},
                       {"verify-all", {{"eps", {s}}, {"delta", {s}}, {"lbm_eps", {s}}, {"skew_delta", 1.0 / 32}}}}}};
       }},
      {"complete-", "n", "n points at mutual distance 1 with identity and a cyclic shift; complete at eps >= 1",
       {{"n", 5}},
       [](const Values& v) {
         const auto n = as_size(v, "n");
         Json matrix = Json::array();
         Json table = Json::array();
         for (std::size_t i = 0; i < n; ++i) {
           Json row = Json::array();
           for (std::size_t j = 0; j < n; ++j) row.push_back(i == j ? 0.0 : 1.0);
           matrix.push_back(row);
           table.push_back((i + 1) % n);
         }
         const Json ladder = {1.0, 0.5};
         return Json{{"space", {{"kind", "explicit"}, {"matrix", matrix}}},
                     {"maps", {"identity", {{"kind", "table"}, {"table", table}}}},
                     {"defaults",
                      {{"entropy", {{"eps", {1.0}}, {"delta", {1.0}}, {"n_range", {1, 4}}}},
                       {"recurrence", {{"eps", ladder}}},
                       {"mixing", {{"eps", {1.0}}}},
                       {"decompose", {{"eps", {1.0}}}},
                       {"ladder", {{"eps", {1.0}}}},
                       {"verify-all", {{"eps", {1.0}}, {"delta", {1.0}}, {"lbm_eps", {1.0}}, {"skew_delta", 1.0}}}}}};
       }},
  };
  return presets;
}

struct Match {
  const Preset* preset = nullptr;
  std::optional<double> suffix_value;
};

Match find(std::string_view name) {
  for (const auto& p : registry()) {
    if (p.suffix.empty()) {
      if (name == p.name) return {&p, std::nullopt};
      continue;
    }
    if (name.size() <= p.name.size() || name.substr(0, p.name.size()) != p.name) continue;
    const auto digits = name.substr(p.name.size());
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || end != digits.data() + digits.size() || v == 0)
      fail(ErrorKind::Config, "preset '" + std::string(name) + "' needs a positive integer " + p.suffix);
    return {&p, static_cast<double>(v)};
  }
  return {};
}

std::string format_value(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : registry()) {
    std::string params;
    for (const auto& [k, v] : p.defaults) params += (params.empty() ? "" : " ") + k + "=" + format_value(v);
    out.push_back({p.suffix.empty() ? p.name : p.name + p.suffix, p.description, params});
  }
  return out;
}

bool has_preset(std::string_view name) {
  try {
    return find(name).preset != nullptr;
  } catch (const Error&) {
    return false;
  }
}

RunConfig preset_config(std::string_view name, const std::vector<std::string>& analyses,
                        const PresetParams& params) {
  const auto match = find(name);
  if (!match.preset) fail(ErrorKind::Config, "unknown preset '" + std::string(name) + "'; see list-presets");
  const auto& p = *match.preset;

  Values values = p.defaults;
  if (match.suffix_value) values[p.suffix] = *match.suffix_value;
  for (const auto& [k, text] : params) {
    if (!values.count(k))
      fail(ErrorKind::Config, "preset '" + std::string(name) + "' has no parameter '" + k + "'");
    double v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size())
      fail(ErrorKind::Config, "parameter " + k + "=" + text + " is not a number");
    values[k] = v;
  }

  const Json built = p.build(values);
  Json doc = {{"label", std::string(name)}, {"space", built.at("space")}, {"maps", built.at("maps")}};
  Json list = Json::array();
  std::vector<std::string> kinds = analyses;
  if (kinds.empty()) kinds.assign(std::begin(kAnalysisKinds), std::end(kAnalysisKinds));
  for (const auto& kind : kinds) {
    if (!built.at("defaults").contains(kind))
      fail(ErrorKind::Config, "unknown analysis '" + kind + "'");
    Json a = built.at("defaults").at(kind);
    a["kind"] = kind;
    list.push_back(a);
  }
  doc["analyses"] = list;
  return config_from_json(doc);
}

}  // namespace chaindyn
