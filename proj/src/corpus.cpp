#include "chaindyn/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "chaindyn/recurrence.hpp"

namespace chaindyn {

CorpusSystem random_transitive_system(Rng& rng, const CorpusOptions& opt) {
  if (opt.min_points < 1 || opt.min_points > opt.max_points || opt.max_generators < 1)
    fail(ErrorKind::InvalidArgument, "bad corpus options");
  for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const std::size_t n = opt.min_points + rng.below(opt.max_points - opt.min_points + 1);
    const std::size_t m = 1 + rng.below(opt.max_generators);
    // Positions on a 1/1000 lattice keep distances exactly comparable.
    std::vector<double> pos(n);
    for (auto& p : pos) p = static_cast<double>(rng.below(1001)) / 1000.0;
    auto sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(pos[i] - pos[j]);
    std::vector<std::vector<PointId>> tables(m, std::vector<PointId>(n));
    for (auto& t : tables)
      for (auto& y : t) y = static_cast<PointId>(rng.below(n));
    auto g = from_map_tables(FiniteMetricSpace::from_matrix(n, d), std::move(tables));
    for (double eps : opt.eps_menu) {
      const auto cg = build_chain_graph(g, eps, ExecPolicy::Serial);
      if (opt.require_mixing ? is_chain_mixing(cg) : is_chain_transitive(cg))
        return CorpusSystem{std::move(g), eps};
    }
  }
  fail(ErrorKind::Resource, "no suitable random system found");
}

std::vector<CorpusSystem> random_corpus(std::uint64_t seed, std::size_t count,
                                        const CorpusOptions& opt) {
  Rng rng(seed, 0xc0ffee);
  std::vector<CorpusSystem> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_transitive_system(rng, opt));
  return out;
}

}  // namespace chaindyn
