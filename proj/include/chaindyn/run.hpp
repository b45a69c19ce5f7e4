#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chaindyn/config.hpp"

namespace chaindyn {

inline constexpr int kSchemaVersion = 1;

enum class AnalysisStatus { Ok, PreconditionFailed, CheckFailed };
const char* to_string(AnalysisStatus s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct AnalysisOutput {
  AnalysisStatus status = AnalysisStatus::Ok;
  Json payload = Json::object();
  std::map<std::string, CsvTable> tables;  // file suffix -> rows
  double seconds = 0.0;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 precondition or check failure
  Json report;        // deterministic: no timings
  Json metadata;      // timings, timestamps, thread count
  std::map<std::string, AnalysisOutput> analyses;  // sorted by name
  std::vector<std::filesystem::path> written;
};

// Runs every analysis of the config. Library errors raised inside an analysis
// become a PreconditionFailed entry; config errors propagate.
RunResult run_analyses(const RunConfig& cfg);

// run_analyses, then writes report.json, metadata.json and the CSV curves
// into cfg.out_dir according to cfg.format.
RunResult run(const RunConfig& cfg);

// FNV-1a over the canonical space description and generator tables.
std::string system_digest(const RunConfig& cfg, const GeneratorSystem& g);

std::string format_number(double v);
std::string to_csv(const CsvTable& t);

}  // namespace chaindyn
