#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chaindyn/entropy.hpp"
#include "chaindyn/graph.hpp"

namespace chaindyn {

using Length = std::optional<std::size_t>;

// (n - 1)^2 + 1: a primitive digraph on n vertices has all exact-length
// walks from this length on.
std::size_t wielandt_cap(std::size_t points);

// Every point lies on a cycle of the union graph.
bool is_chain_recurrent(const ChainGraph& cg);
bool is_chain_transitive(const ChainGraph& cg);
// Strongly connected with period 1.
bool is_chain_mixing(const ChainGraph& cg);

struct RecurrenceReport {
  double epsilon = 0.0;
  bool recurrent = false;
  bool transitive = false;
  bool mixing = false;
  std::size_t period = 0;  // 0 unless transitive
  std::vector<Length> r_per_point;
  Length r_global;  // max over points when all are defined
  std::size_t wielandt_cap = 0;
};

Length recurrence_time_point(const ChainGraph& cg, PointId x);
RecurrenceReport recurrence_time(const ChainGraph& cg, ExecPolicy policy = ExecPolicy::Parallel);

struct MixingReport {
  double epsilon = 0.0;
  double delta = 0.0;  // radius of the closed start ball
  bool mixing = false;
  std::vector<Length> m_per_point;
  Length m_global;
  std::size_t wielandt_cap = 0;
};

// First N >= 1 such that walks of every length >= N from the closed
// delta-ball around x reach every point. None unless the graph is mixing.
Length mixing_time_point(const ChainGraph& cg, PointId x, double delta_ball);
MixingReport mixing_time(const ChainGraph& cg, double delta_ball,
                         ExecPolicy policy = ExecPolicy::Parallel);

enum class CheckStatus { Pass, Fail, Skipped, Info };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string detail;
};

struct PropositionReport {
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t k = 1;
  std::vector<CheckResult> checks;
  bool ok() const;  // no check failed
};

// Product and power laws for recurrence and mixing times. Exact checks are
// pass/fail; the existential epsilon' searches are informational.
PropositionReport proposition_suite(const GeneratorSystem& g, const GeneratorSystem& h,
                                    std::size_t k, double epsilon, double delta,
                                    const Budget& budget = {},
                                    ExecPolicy policy = ExecPolicy::Parallel);

struct UbdEntry {
  double epsilon = 0.0;
  bool recurrent = false;
  bool transitive = false;
  Length r;
  std::optional<double> product;  // r * eps^(b + 1)
};

struct UbdReport {
  double box_upper = 0.0;
  std::vector<UbdEntry> entries;
  std::optional<double> max_product;
  bool growing = false;  // products strictly increase down the ladder
  bool complete = true;  // transitive at every ladder value
  std::string note;
};

UbdReport verify_ubd(const GeneratorSystem& g, const ScaleLadder& eps_ladder, double box_upper,
                     ExecPolicy policy = ExecPolicy::Parallel);

struct LbmOptions {
  double slack = 0.1;
  NRange n_range{1, 6};
  SamplingOptions sampling;
};

struct LbmEntry {
  double delta = 0.0;
  std::vector<Length> m_by_eps;  // along the epsilon ladder
  Length m_hat;                  // at the smallest epsilon
  std::optional<double> ratio;   // log(1/delta) / m_hat
};

struct LbmReport {
  double lower_b = 0.0;
  std::vector<double> eps;
  std::vector<LbmEntry> per_delta;
  double log_m = 0.0;
  double rhs_raw = 0.0;  // b * max ratio - log m
  double rhs = 0.0;      // max(0, rhs_raw)
  double h_hat = 0.0;    // largest orbit-count estimate over the ladder
  double h_spectral = 0.0;
  double slack = 0.0;
  bool evaluated = false;  // some m_hat was defined
  bool holds = false;
  bool complete = true;  // mixing at every ladder epsilon
  std::string note;
};

LbmReport verify_lbm(const GeneratorSystem& g, const ScaleLadder& eps_ladder,
                     const ScaleLadder& delta_ladder, double lower_b, const LbmOptions& opt = {},
                     ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace chaindyn
