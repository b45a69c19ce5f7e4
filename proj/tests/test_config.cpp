#include <doctest.h>

#include <string>

#include "chaindyn/config.hpp"

using namespace chaindyn;

namespace {

std::string error_of(std::string_view text, ConfigFormat fmt = ConfigFormat::Auto) {
  try {
    parse_config(text, fmt);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const char* kToml = R"j(
seed = 7
label = "two circles"
maps = ["cross(2, 0, 1)", "cross(3, 0, 1)"]

[space]
kind = "union"
cross_distance = 1.0
parts = [{ kind = "circle", n = 32 }, { kind = "circle", n = 32 }]

[budget]
words = 512

[output]
format = "json"

[[analyses]]
kind = "recurrence"
eps = [0.1, 0.05]

[[analyses]]
kind = "entropy"
method = "pseudo"
eps = 0.05
n_range = [1, 4]
)j";

}  // namespace

TEST_CASE("toml and json configs agree") {
  const auto a = parse_config(kToml);
  CHECK(a.seed == 7);
  CHECK(a.label == "two circles");
  CHECK(a.budget.max_words == 512);
  CHECK(a.format == OutputFormat::Json);
  REQUIRE(a.maps.size() == 2);
  REQUIRE(a.analyses.size() == 2);
  CHECK(a.analyses[1].kind == "entropy");
  CHECK(a.analyses[1].name == "entropy");

  const auto j = config_to_json(a);
  const auto b = parse_config(j.dump(2));
  CHECK(config_to_json(b) == j);

  const auto g = build_system(a);
  CHECK(g.space().size() == 64);
  CHECK(g.m() == 2);
  const auto g2 = build_system(b);
  for (std::size_t i = 0; i < 2; ++i) CHECK(g.table(i) == g2.table(i));
}

TEST_CASE("map expressions") {
  auto m = parse_map_expression("affine(2)");
  REQUIRE(std::holds_alternative<AffineMap>(m.form));
  CHECK(std::get<AffineMap>(m.form).a == 2.0);
  CHECK(std::get<AffineMap>(m.form).b == 0.0);

  m = parse_map_expression(" cross( 3 , 0.25 , 2 ) ");
  const auto& c = std::get<CrossAffineMap>(m.form);
  CHECK(c.a == 3.0);
  CHECK(c.b == 0.25);
  CHECK(c.shift == 2);

  m = parse_map_expression("product(affine(2, 0), identity)");
  const auto& p = std::get<ProductMap>(m.form);
  REQUIRE(p.factors.size() == 2);
  CHECK(std::holds_alternative<IdentityMap>(p.factors[1].form));

  m = parse_map_expression("table(1, 2, 0)");
  CHECK(std::get<TableMap>(m.form).table == std::vector<PointId>{1, 2, 0});

  for (const char* s : {"identity", "odometer", "prepend(1)", "affine(0.5, 0.125)", "cross(2, 0, 1)",
                        "table(0, 0)", "product(prepend(0), odometer)"}) {
    const auto once = map_to_json(parse_map_expression(s));
    CHECK(map_to_json(parse_map_expression(once.get<std::string>())) == once);
  }

  for (const char* bad : {"", "affine", "affine(1, 2, 3)", "rotate(2)", "prepend(-1)", "prepend(1.5)",
                          "product(identity)", "table()", "identity(1)", "affine(2) x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_map_expression(bad), Error);
  }
}

TEST_CASE("map objects") {
  auto m = map_from_json(Json::parse(R"j({"kind": "cross", "a": 2, "shift": 1})j"));
  CHECK(std::get<CrossAffineMap>(m.form).a == 2.0);
  m = map_from_json(Json::parse(R"j({"kind": "product", "factors": ["affine(2)", {"kind": "identity"}]})j"));
  CHECK(std::get<ProductMap>(m.form).factors.size() == 2);
  CHECK_THROWS_AS(map_from_json(Json::parse(R"j({"kind": "affine"})j")), Error);
  CHECK_THROWS_AS(map_from_json(Json::parse(R"j({"kind": "affine", "a": 2, "c": 1})j")), Error);
  CHECK_THROWS_AS(map_from_json(Json::parse("3")), Error);
}

TEST_CASE("config diagnostics") {
  const std::string base = R"j({"space": {"kind": "circle", "n": 8}, "maps": ["affine(2)"])j";

  CHECK(contains(error_of(base + R"j(, "analyses": [{"kind": "mixing", "eps": [0.1, 0.2]}]})j"),
                 "analyses[0].eps"));
  CHECK(contains(error_of(base + R"j(, "analyses": [{"kind": "mixing", "eps": [0.1, 0.2]}]})j"),
                 "strictly decreasing"));
  CHECK(contains(error_of(R"j({"space": {"kind": "sphere"}, "maps": ["identity"]})j"), "unknown space kind"));
  CHECK(contains(error_of(R"j({"space": {"kind": "circle", "n": 8}, "maps": ["affine(2"]})j"), "maps[0]"));
  CHECK(contains(error_of(base + R"j(, "colour": 1})j"), "unknown key 'colour'"));
  CHECK(contains(error_of(base + R"j(, "analyses": ["lyapunov"]})j"), "unknown analysis"));
  CHECK(contains(error_of(base + R"j(, "analyses": [{"kind": "entropy", "n_range": [3, 1]}]})j"), "n_range"));
  CHECK(contains(error_of(base + R"j(, "analyses": ["mixing", "mixing"]})j"), "unique"));
  CHECK(contains(error_of(base + R"j(, "output": {"format": "xml"}})j"), "format"));
  CHECK(contains(error_of(R"j({"maps": ["identity"]})j"), "missing 'space'"));
  CHECK(contains(error_of(R"j({"space": {"kind": "circle", "n": 8}, "maps": []})j"), "maps"));

  // syntax errors name the line
  CHECK(contains(error_of("{\n\"seed\": 1,\n\"space\": ,\n}"), "line 3"));
  CHECK(contains(error_of("seed = 1\nmaps = [\"identity\"]\n[space\nkind = 1\n"), "line 3"));
}

TEST_CASE("repeated analyses with names") {
  const auto cfg = parse_config(R"j({"space": {"kind": "circle", "n": 8}, "maps": ["affine(2)"],
    "analyses": [{"kind": "mixing", "name": "coarse", "eps": 0.5},
                 {"kind": "mixing", "name": "fine", "eps": 0.25}]})j");
  REQUIRE(cfg.analyses.size() == 2);
  CHECK(cfg.analyses[0].name == "coarse");
  CHECK_FALSE(cfg.analyses[0].params.contains("name"));
  CHECK(ladder_param(cfg.analyses[1].params, "eps", {1.0}).values() == std::vector<double>{0.25});
  CHECK(ladder_param(Json::object(), "eps", {0.3, 0.2}).size() == 2);
}

TEST_CASE("space kinds") {
  CHECK(build_space(Json::parse(R"j({"kind": "shift", "m": 2, "depth": 4})j")).size() == 16);
  CHECK(build_space(Json::parse(R"j({"kind": "odometer", "radices": [2, 3]})j")).size() == 6);
  CHECK(build_space(Json::parse(
                        R"j({"kind": "product", "factors": [{"kind": "circle", "n": 4}, {"kind": "circle", "n": 3}]})j"))
            .size() == 12);
  const auto e = build_space(Json::parse(R"j({"kind": "explicit", "matrix": [[0, 1], [1, 0]]})j"));
  CHECK(e.dist(0, 1) == 1.0);
  CHECK_THROWS_AS(build_space(Json::parse(R"j({"kind": "explicit", "matrix": [[0, 1], [2, 0]]})j")), Error);
}
