#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chaindyn/system.hpp"

namespace chaindyn {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv, Both };
OutputFormat parse_output_format(std::string_view s);
const char* to_string(OutputFormat f);

inline constexpr const char* kAnalysisKinds[] = {"entropy", "recurrence", "mixing",
                                                "decompose", "ladder", "verify-all"};

struct AnalysisRequest {
  std::string kind;
  std::string name;  // report key, defaults to kind
  Json params = Json::object();  // kind-specific settings, validated on parse
};

struct RunConfig {
  Json space;                    // canonical space description
  std::vector<MapSpec> maps;
  std::vector<AnalysisRequest> analyses;
  std::uint64_t seed = 0;
  Budget budget;
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::Both;
  std::string label;  // preset name or file stem
};

enum class ConfigFormat { Auto, Json, Toml };

// Validated config or an Error of kind Config naming the offending field
// (and line for syntax errors).
RunConfig parse_config(std::string_view text, ConfigFormat format = ConfigFormat::Auto);
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON form of a config (what run reports echo).
Json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const Json& doc);

// Map expressions: identity, affine(a, b), cross(a, b[, shift]), prepend(s),
// odometer, table(y0, y1, ...), product(<map>, <map>).
MapSpec parse_map_expression(std::string_view text);
MapSpec map_from_json(const Json& j);
Json map_to_json(const MapSpec& m);

FiniteMetricSpace build_space(const Json& spec, const Budget& budget = {});
GeneratorSystem build_system(const RunConfig& cfg);

ScaleLadder ladder_param(const Json& params, const char* key, std::vector<double> fallback);

}  // namespace chaindyn
