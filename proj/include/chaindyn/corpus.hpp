#pragma once

#include <cstdint>
#include <vector>

#include "chaindyn/graph.hpp"
#include "chaindyn/rng.hpp"

namespace chaindyn {

// Seeded random systems for property checks: points on [0, 1] with the line
// metric, random generator tables, and the smallest epsilon from a fixed menu
// that makes the chain graph strongly connected (or primitive).
struct CorpusOptions {
  std::size_t min_points = 3;
  std::size_t max_points = 12;
  std::size_t max_generators = 3;
  bool require_mixing = false;
  std::vector<double> eps_menu{0.05, 0.1, 0.15, 0.2, 0.3};
  std::size_t max_attempts = 10000;
};

struct CorpusSystem {
  GeneratorSystem system;
  double epsilon = 0.0;
};

CorpusSystem random_transitive_system(Rng& rng, const CorpusOptions& opt = {});
std::vector<CorpusSystem> random_corpus(std::uint64_t seed, std::size_t count,
                                        const CorpusOptions& opt = {});

}  // namespace chaindyn
