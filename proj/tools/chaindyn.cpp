// chaindyn command line: run a config file, run a built-in preset, or list presets.

#include <CLI11.hpp>

#include <iostream>

#include "chaindyn/presets.hpp"
#include "chaindyn/run.hpp"

using namespace chaindyn;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> points, words;
  std::optional<std::string> format;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--seed", o.seed, "seed for word sampling and the random corpus");
  app->add_option("--out-dir", o.out_dir, "directory for report.json, metadata.json and CSV curves");
  app->add_option("--budget-points", o.points, "largest point count any builder may create")
      ->check(CLI::PositiveNumber);
  app->add_option("--budget-words", o.words, "largest exhaustive word enumeration")->check(CLI::PositiveNumber);
  app->add_option("--format", o.format, "output files")->check(CLI::IsMember({"json", "csv", "both"}));
}

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.points) cfg.budget.max_points = *o.points;
  if (o.words) cfg.budget.max_words = *o.words;
  if (o.format) cfg.format = parse_output_format(*o.format);
}

int execute(const RunConfig& cfg) {
  const auto res = run(cfg);
  for (const auto& [name, out] : res.analyses) {
    std::cout << name << ": " << to_string(out.status);
    const auto& p = res.report["analyses"][name]["result"];
    if (p.contains("failed_suites")) std::cout << " (" << p["failed_suites"].get<std::size_t>() << " failed suites)";
    if (p.contains("message")) std::cout << " (" << p["message"].get<std::string>() << ")";
    std::cout << "\n";
  }
  for (const auto& f : res.written) std::cout << "wrote " << f.string() << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain dynamics of finite semigroup actions"};
  app.require_subcommand(1);

  Overrides run_o, preset_o;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run the analyses of a JSON or TOML config");
  run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  add_overrides(run_cmd, run_o);

  std::string preset_name;
  std::vector<std::string> analyses, params;
  auto* preset_cmd = app.add_subcommand("preset", "run analyses on a built-in system");
  preset_cmd->add_option("name", preset_name, "preset name, see list-presets")->required();
  preset_cmd->add_option("analyses", analyses, "entropy recurrence mixing decompose ladder verify-all (default: all)");
  preset_cmd->add_option("--param", params, "override a preset parameter, key=value");
  add_overrides(preset_cmd, preset_o);

  auto* list_cmd = app.add_subcommand("list-presets", "show the built-in systems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& p : list_presets())
        std::cout << p.name << "  " << p.description << "  [" << p.parameters << "]\n";
      return 0;
    }
    RunConfig cfg;
    if (run_cmd->parsed()) {
      cfg = load_config(config_path);
      apply(run_o, cfg);
    } else {
      PresetParams kv;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) fail(ErrorKind::Config, "--param expects key=value, got '" + p + "'");
        kv[p.substr(0, eq)] = p.substr(eq + 1);
      }
      cfg = preset_config(preset_name, analyses, kv);
      if (!preset_o.out_dir) cfg.out_dir = "out/" + preset_name;
      apply(preset_o, cfg);
    }
    return execute(cfg);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
