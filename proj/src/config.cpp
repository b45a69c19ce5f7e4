#include "chaindyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace chaindyn {

OutputFormat parse_output_format(std::string_view s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "both") return OutputFormat::Both;
  fail(ErrorKind::Config, "format must be json, csv or both, got '" + std::string(s) + "'");
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Both: return "both";
  }
  return "?";
}

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorKind::Config, where + ": " + what);
}

void allow_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) config_error(where, "expected a table/object");
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      config_error(where, "unknown key '" + k + "'");
  }
}

double get_number(const Json& obj, const char* key, const std::string& where,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(where, std::string("missing '") + key + "'");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(where + "." + key, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const Json& obj, const char* key, const std::string& where,
                      std::optional<std::size_t> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(where, std::string("missing '") + key + "'");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    config_error(where + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

// ---- map expressions ----

class MapParser {
 public:
  explicit MapParser(std::string_view s) : s_(s) {}

  MapSpec parse() {
    auto m = parse_map();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing text");
    return m;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorKind::Config, "malformed map expression '" + std::string(s_) + "' at column " +
                                std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) error("expected a map name");
    return std::string(s_.substr(start, pos_ - start));
  }
  double number() {
    skip();
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    const std::string tmp(begin, s_.size() - pos_);
    const double v = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str()) error("expected a number");
    pos_ += static_cast<std::size_t>(end - tmp.c_str());
    return v;
  }
  std::size_t count() {
    const double v = number();
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) error("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  std::vector<double> numbers() {
    std::vector<double> out;
    if (!eat('(')) return out;
    if (eat(')')) return out;
    do out.push_back(number());
    while (eat(','));
    if (!eat(')')) error("expected ')'");
    return out;
  }

  MapSpec parse_map() {
    const auto name = ident();
    MapSpec m;
    if (name == "product") {
      if (!eat('(')) error("expected '('");
      ProductMap p;
      p.factors.push_back(parse_map());
      if (!eat(',')) error("expected ','");
      p.factors.push_back(parse_map());
      if (!eat(')')) error("expected ')'");
      m.form = std::move(p);
    } else if (name == "table") {
      if (!eat('(')) error("expected '('");
      TableMap t;
      do t.table.push_back(static_cast<PointId>(count()));
      while (eat(','));
      if (!eat(')')) error("expected ')'");
      m.form = std::move(t);
    } else {
      const auto args = numbers();
      auto want = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi) error(name + " takes " + std::to_string(lo) +
                                                        (lo == hi ? "" : "-" + std::to_string(hi)) +
                                                        " arguments");
      };
      auto as_count = [&](double v) {
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) error("expected a nonnegative integer");
        return static_cast<std::size_t>(v);
      };
      if (name == "identity") {
        want(0, 0);
        m.form = IdentityMap{};
      } else if (name == "affine") {
        want(1, 2);
        m.form = AffineMap{args[0], args.size() > 1 ? args[1] : 0.0};
      } else if (name == "cross") {
        want(1, 3);
        m.form = CrossAffineMap{args[0], args.size() > 1 ? args[1] : 0.0,
                                args.size() > 2 ? as_count(args[2]) : 1};
      } else if (name == "prepend") {
        want(1, 1);
        m.form = PrependMap{as_count(args[0])};
      } else if (name == "odometer") {
        want(0, 0);
        m.form = OdometerMap{};
      } else {
        error("unknown map '" + name + "'");
      }
    }
    m.text = describe(m);
    return m;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// ---- toml to json ----

Json from_toml(const toml::node& n) {
  if (auto t = n.as_table()) {
    Json o = Json::object();
    for (const auto& [k, v] : *t) o[std::string(k.str())] = from_toml(v);
    return o;
  }
  if (auto a = n.as_array()) {
    Json o = Json::array();
    for (const auto& v : *a) o.push_back(from_toml(v));
    return o;
  }
  if (auto v = n.as_integer()) return v->get();
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_boolean()) return v->get();
  if (auto v = n.as_string()) return v->get();
  fail(ErrorKind::Config, "line " + std::to_string(n.source().begin.line) +
                              ": unsupported TOML value (dates and times are not used)");
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// ---- analyses ----

void check_ladder(const Json& params, const char* key, const std::string& where) {
  if (!params.contains(key)) return;
  try {
    ladder_param(params, key, {});
  } catch (const Error& e) {
    config_error(where + "." + key, e.what());
  }
}

AnalysisRequest parse_analysis(const Json& j, std::size_t index) {
  const std::string where = "analyses[" + std::to_string(index) + "]";
  AnalysisRequest a;
  if (j.is_string()) {
    a.kind = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("kind") || !j.at("kind").is_string()) config_error(where, "missing 'kind'");
    a.kind = j.at("kind").get<std::string>();
    a.params = j;
    a.params.erase("kind");
    if (a.params.contains("name")) {
      if (!a.params.at("name").is_string()) config_error(where + ".name", "expected a string");
      a.name = a.params.at("name").get<std::string>();
      a.params.erase("name");
    }
  } else {
    config_error(where, "expected an analysis name or table");
  }
  if (std::none_of(std::begin(kAnalysisKinds), std::end(kAnalysisKinds),
                   [&](const char* k) { return a.kind == k; }))
    config_error(where, "unknown analysis '" + a.kind + "'");
  if (a.name.empty()) a.name = a.kind;

  const auto& p = a.params;
  if (a.kind == "entropy") {
    allow_keys(p, where, {"eps", "delta", "n_range", "word_sample", "method", "include_endpoint", "strict"});
    if (p.contains("method")) {
      const auto m = p.at("method");
      if (!m.is_string() || (m != "all" && m != "pseudo" && m != "bufetov" && m != "spectral"))
        config_error(where + ".method", "expected all, pseudo, bufetov or spectral");
    }
    if (p.contains("n_range")) {
      const auto& r = p.at("n_range");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer() ||
          r[0].get<long long>() < 1 || r[0].get<long long>() > r[1].get<long long>())
        config_error(where + ".n_range", "expected [lo, hi] with 1 <= lo <= hi");
    }
    if (p.contains("word_sample")) get_count(p, "word_sample", where);
    for (const char* k : {"include_endpoint", "strict"})
      if (p.contains(k) && !p.at(k).is_boolean()) config_error(where + "." + k, "expected a boolean");
  } else if (a.kind == "recurrence" || a.kind == "decompose") {
    allow_keys(p, where, {"eps"});
  } else if (a.kind == "mixing") {
    allow_keys(p, where, {"eps", "delta"});
  } else if (a.kind == "ladder") {
    allow_keys(p, where, {"eps", "delta_factor"});
    if (p.contains("delta_factor") && !(get_number(p, "delta_factor", where) > 0))
      config_error(where + ".delta_factor", "must be positive");
  } else if (a.kind == "verify-all") {
    allow_keys(p, where, {"eps", "delta", "skew_delta", "corpus", "k", "lbm_eps"});
    if (p.contains("skew_delta") && !(get_number(p, "skew_delta", where) > 0))
      config_error(where + ".skew_delta", "must be positive");
    if (p.contains("corpus")) get_count(p, "corpus", where);
    if (p.contains("k") && get_count(p, "k", where) == 0) config_error(where + ".k", "must be positive");
  }
  for (const char* k : {"eps", "delta", "lbm_eps"}) check_ladder(p, k, where);
  return a;
}

void validate_space(const Json& s, const std::string& where) {
  if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string())
    config_error(where, "space needs a 'kind'");
  const auto kind = s.at("kind").get<std::string>();
  if (kind == "circle") {
    allow_keys(s, where, {"kind", "n", "circumference"});
    get_count(s, "n", where);
    get_number(s, "circumference", where, 1.0);
  } else if (kind == "union") {
    allow_keys(s, where, {"kind", "parts", "cross_distance"});
    if (!s.contains("parts") || !s.at("parts").is_array() || s.at("parts").empty())
      config_error(where, "union needs a nonempty 'parts' list");
    for (std::size_t i = 0; i < s.at("parts").size(); ++i)
      validate_space(s.at("parts")[i], where + ".parts[" + std::to_string(i) + "]");
    get_number(s, "cross_distance", where);
  } else if (kind == "shift") {
    allow_keys(s, where, {"kind", "m", "depth"});
    get_count(s, "m", where);
    get_count(s, "depth", where);
  } else if (kind == "product") {
    allow_keys(s, where, {"kind", "factors"});
    if (!s.contains("factors") || !s.at("factors").is_array() || s.at("factors").size() != 2)
      config_error(where, "product needs exactly two 'factors'");
    validate_space(s.at("factors")[0], where + ".factors[0]");
    validate_space(s.at("factors")[1], where + ".factors[1]");
  } else if (kind == "odometer") {
    allow_keys(s, where, {"kind", "radices"});
    if (!s.contains("radices") || !s.at("radices").is_array() || s.at("radices").empty())
      config_error(where, "odometer needs a nonempty 'radices' list");
    for (const auto& r : s.at("radices"))
      if (!r.is_number_integer() || r.get<long long>() < 2) config_error(where + ".radices", "entries must be integers >= 2");
  } else if (kind == "explicit") {
    allow_keys(s, where, {"kind", "matrix"});
    if (!s.contains("matrix") || !s.at("matrix").is_array() || s.at("matrix").empty())
      config_error(where, "explicit space needs a square 'matrix'");
    const auto n = s.at("matrix").size();
    for (const auto& row : s.at("matrix")) {
      if (!row.is_array() || row.size() != n) config_error(where + ".matrix", "matrix must be square");
      for (const auto& v : row)
        if (!v.is_number()) config_error(where + ".matrix", "entries must be numbers");
    }
  } else {
    config_error(where, "unknown space kind '" + kind + "'");
  }
}

}  // namespace

MapSpec parse_map_expression(std::string_view text) { return MapParser(text).parse(); }

MapSpec map_from_json(const Json& j) {
  if (j.is_string()) return parse_map_expression(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(ErrorKind::Config, "map must be an expression string or a table with 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  const std::string where = "map '" + kind + "'";
  MapSpec m;
  if (kind == "identity") {
    allow_keys(j, where, {"kind"});
    m.form = IdentityMap{};
  } else if (kind == "affine") {
    allow_keys(j, where, {"kind", "a", "b"});
    m.form = AffineMap{get_number(j, "a", where), get_number(j, "b", where, 0.0)};
  } else if (kind == "cross") {
    allow_keys(j, where, {"kind", "a", "b", "shift"});
    m.form = CrossAffineMap{get_number(j, "a", where), get_number(j, "b", where, 0.0),
                            get_count(j, "shift", where, 1)};
  } else if (kind == "prepend") {
    allow_keys(j, where, {"kind", "symbol"});
    m.form = PrependMap{get_count(j, "symbol", where)};
  } else if (kind == "odometer") {
    allow_keys(j, where, {"kind"});
    m.form = OdometerMap{};
  } else if (kind == "table") {
    allow_keys(j, where, {"kind", "table"});
    if (!j.contains("table") || !j.at("table").is_array()) config_error(where, "missing 'table' list");
    TableMap t;
    for (const auto& v : j.at("table")) {
      if (!v.is_number_integer() || v.get<long long>() < 0) config_error(where, "table entries must be point indices");
      t.table.push_back(v.get<PointId>());
    }
    m.form = std::move(t);
  } else if (kind == "product") {
    allow_keys(j, where, {"kind", "factors"});
    if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").size() != 2)
      config_error(where, "product needs exactly two 'factors'");
    m.form = ProductMap{{map_from_json(j.at("factors")[0]), map_from_json(j.at("factors")[1])}};
  } else {
    config_error(where, "unknown map kind");
  }
  m.text = describe(m);
  return m;
}

namespace {

std::string num(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

// Inverse of the expression parser.
std::string expression(const MapSpec& m) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityMap>) {
          return "identity";
        } else if constexpr (std::is_same_v<T, AffineMap>) {
          return "affine(" + num(f.a) + ", " + num(f.b) + ")";
        } else if constexpr (std::is_same_v<T, CrossAffineMap>) {
          return "cross(" + num(f.a) + ", " + num(f.b) + ", " + std::to_string(f.shift) + ")";
        } else if constexpr (std::is_same_v<T, PrependMap>) {
          return "prepend(" + std::to_string(f.symbol) + ")";
        } else if constexpr (std::is_same_v<T, OdometerMap>) {
          return "odometer";
        } else if constexpr (std::is_same_v<T, TableMap>) {
          std::string s = "table(";
          for (std::size_t i = 0; i < f.table.size(); ++i) s += (i ? ", " : "") + std::to_string(f.table[i]);
          return s + ")";
        } else {
          return "product(" + expression(f.factors.at(0)) + ", " + expression(f.factors.at(1)) + ")";
        }
      },
      m.form);
}

}  // namespace

Json map_to_json(const MapSpec& m) { return expression(m); }

ScaleLadder ladder_param(const Json& params, const char* key, std::vector<double> fallback) {
  if (!params.contains(key)) return ScaleLadder(std::move(fallback));
  const auto& v = params.at(key);
  std::vector<double> values;
  if (v.is_number()) {
    values.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) fail(ErrorKind::Config, "ladder entries must be numbers");
      values.push_back(x.get<double>());
    }
  } else {
    fail(ErrorKind::Config, "ladder must be a number or a list of numbers");
  }
  try {
    return ScaleLadder(std::move(values));
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
}

RunConfig config_from_json(const Json& doc) {
  allow_keys(doc, "config", {"seed", "space", "maps", "analyses", "budget", "output", "label"});
  RunConfig cfg;
  if (doc.contains("seed")) cfg.seed = get_count(doc, "seed", "config");
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) config_error("config.label", "expected a string");
    cfg.label = doc.at("label").get<std::string>();
  }
  if (!doc.contains("space")) config_error("config", "missing 'space'");
  validate_space(doc.at("space"), "space");
  cfg.space = doc.at("space");

  if (!doc.contains("maps") || !doc.at("maps").is_array() || doc.at("maps").empty())
    config_error("config", "'maps' must be a nonempty list");
  for (std::size_t i = 0; i < doc.at("maps").size(); ++i) {
    try {
      cfg.maps.push_back(map_from_json(doc.at("maps")[i]));
    } catch (const Error& e) {
      config_error("maps[" + std::to_string(i) + "]", e.what());
    }
  }

  if (doc.contains("budget")) {
    const auto& b = doc.at("budget");
    allow_keys(b, "budget", {"points", "words", "generators"});
    cfg.budget.max_points = get_count(b, "points", "budget", cfg.budget.max_points);
    cfg.budget.max_words = get_count(b, "words", "budget", cfg.budget.max_words);
    cfg.budget.max_generators = get_count(b, "generators", "budget", cfg.budget.max_generators);
    if (!cfg.budget.max_points || !cfg.budget.max_words || !cfg.budget.max_generators)
      config_error("budget", "budgets must be positive");
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    allow_keys(o, "output", {"dir", "format"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) config_error("output.dir", "expected a string");
      cfg.out_dir = o.at("dir").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) config_error("output.format", "expected a string");
      cfg.format = parse_output_format(o.at("format").get<std::string>());
    }
  }
  if (doc.contains("analyses")) {
    const auto& a = doc.at("analyses");
    if (!a.is_array()) config_error("analyses", "expected a list");
    for (std::size_t i = 0; i < a.size(); ++i) cfg.analyses.push_back(parse_analysis(a[i], i));
  }
  std::vector<std::string> names;
  for (const auto& a : cfg.analyses) names.push_back(a.name);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    config_error("analyses", "analysis names must be unique; set 'name' to tell repeats apart");
  return cfg;
}

Json config_to_json(const RunConfig& cfg) {
  Json j = Json::object();
  j["seed"] = cfg.seed;
  if (!cfg.label.empty()) j["label"] = cfg.label;
  j["space"] = cfg.space;
  j["maps"] = Json::array();
  for (const auto& m : cfg.maps) j["maps"].push_back(map_to_json(m));
  j["budget"] = {{"points", cfg.budget.max_points},
                 {"words", cfg.budget.max_words},
                 {"generators", cfg.budget.max_generators}};
  j["output"] = {{"dir", cfg.out_dir}, {"format", to_string(cfg.format)}};
  j["analyses"] = Json::array();
  for (const auto& a : cfg.analyses) {
    Json e = a.params;
    e["kind"] = a.kind;
    e["name"] = a.name;
    j["analyses"].push_back(e);
  }
  return j;
}

RunConfig parse_config(std::string_view text, ConfigFormat format) {
  if (format == ConfigFormat::Auto) {
    const auto first = text.find_first_not_of(" \t\r\n");
    format = first != std::string_view::npos && text[first] == '{' ? ConfigFormat::Json : ConfigFormat::Toml;
  }
  Json doc;
  if (format == ConfigFormat::Json) {
    try {
      doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
      fail(ErrorKind::Config, "line " + std::to_string(line_of(text, e.byte ? e.byte - 1 : 0)) +
                                  ": JSON syntax error: " + e.what());
    }
  } else {
    try {
      const auto table = toml::parse(text);
      doc = from_toml(table);
    } catch (const toml::parse_error& e) {
      fail(ErrorKind::Config, "line " + std::to_string(e.source().begin.line) +
                                  ": TOML syntax error: " + std::string(e.description()));
    }
  }
  return config_from_json(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto ext = path.extension().string();
  const auto fmt = ext == ".json"   ? ConfigFormat::Json
                   : ext == ".toml" ? ConfigFormat::Toml
                                    : ConfigFormat::Auto;
  auto cfg = parse_config(ss.str(), fmt);
  if (cfg.label.empty()) cfg.label = path.stem().string();
  return cfg;
}

FiniteMetricSpace build_space(const Json& s, const Budget& budget) {
  const auto kind = s.at("kind").get<std::string>();
  if (kind == "circle")
    return build_circle_grid(s.at("n").get<std::size_t>(), s.value("circumference", 1.0));
  if (kind == "union") {
    std::vector<FiniteMetricSpace> parts;
    for (const auto& p : s.at("parts")) parts.push_back(build_space(p, budget));
    return build_disjoint_union(parts, s.at("cross_distance").get<double>());
  }
  if (kind == "shift")
    return build_shift_space(s.at("m").get<std::size_t>(), s.at("depth").get<std::size_t>(), budget);
  if (kind == "product") {
    auto a = build_space(s.at("factors")[0], budget);
    auto b = build_space(s.at("factors")[1], budget);
    if (a.size() > budget.max_points / b.size()) fail(ErrorKind::Resource, "product exceeds point budget");
    return build_product(a, b);
  }
  if (kind == "odometer") return build_odometer_space(s.at("radices").get<std::vector<std::size_t>>(), budget);
  if (kind == "explicit") {
    const auto& m = s.at("matrix");
    const std::size_t n = m.size();
    std::vector<double> d;
    d.reserve(n * n);
    for (const auto& row : m)
      for (const auto& v : row) d.push_back(v.get<double>());
    auto space = FiniteMetricSpace::from_matrix(n, d);
    const auto rep = validate_metric(space);
    if (!rep.ok) fail(ErrorKind::MetricViolation, "explicit matrix violates the " + rep.axiom + " axiom");
    return space;
  }
  fail(ErrorKind::Config, "unknown space kind '" + kind + "'");
}

GeneratorSystem build_system(const RunConfig& cfg) {
  return from_map_specs(build_space(cfg.space, cfg.budget), cfg.maps);
}

}  // namespace chaindyn
