#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chaindyn/config.hpp"

namespace chaindyn {

struct PresetInfo {
  std::string name;         // as listed, e.g. "odometer-L"
  std::string description;  // one line
  std::string parameters;   // tunable keys with defaults, e.g. "n=32 eps=0.05"
};

std::vector<PresetInfo> list_presets();

// Parameter values given on the command line as key=value.
using PresetParams = std::map<std::string, std::string>;

// Builds the config for a preset. Families take their size from the name
// suffix (odometer-6, identity-4, complete-5). An empty analysis list means
// every analysis kind. Unknown names and parameters raise Config errors.
RunConfig preset_config(std::string_view name, const std::vector<std::string>& analyses = {},
                        const PresetParams& params = {});

bool has_preset(std::string_view name);

}  // namespace chaindyn
