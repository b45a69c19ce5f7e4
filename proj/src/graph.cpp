#include "chaindyn/graph.hpp"

#include <sstream>

namespace chaindyn {

ChainGraph::ChainGraph(GeneratorSystem system, double delta, ExecPolicy policy)
    : system_(std::move(system)), delta_(delta) {
  if (!(delta >= 0.0)) fail(ErrorKind::InvalidArgument, "delta must be nonnegative");
  const std::size_t n = system_.points();
  if (delta < system_.quantization_error()) {
    std::ostringstream os;
    os << "delta " << delta << " is below the quantization error "
       << system_.quantization_error() << "; grid chains represent continuum chains only at "
       << effective_tolerance();
    warnings_.push_back(os.str());
  }
  union_ = BitMatrix(n);
  for (std::size_t i = 0; i < system_.m(); ++i) {
    adjacency_.push_back(kernels::relation_from_table(system_.space(), system_.table(i), delta, policy));
    union_ |= adjacency_.back();
    counts_.push_back(CountMatrix::from(adjacency_.back()));
  }
  union_t_ = union_.transpose();
  sum_ = CountMatrix::sum_of(adjacency_);
}

ChainGraph build_chain_graph(const GeneratorSystem& g, double delta, ExecPolicy policy) {
  return ChainGraph(g, delta, policy);
}

bool is_chain(const ChainGraph& cg, const Chain& c) {
  if (c.points.size() != c.word.size() + 1)
    fail(ErrorKind::InvalidArgument, "chain needs word length + 1 points");
  for (auto p : c.points)
    if (p >= cg.points()) fail(ErrorKind::InvalidArgument, "chain point out of range");
  for (std::size_t j = 0; j < c.word.size(); ++j) {
    if (c.word[j] >= cg.m()) fail(ErrorKind::InvalidArgument, "chain letter out of range");
    if (!cg.relation(c.word[j]).test(c.points[j], c.points[j + 1])) return false;
  }
  return true;
}

BigCount count_chains_for_word(const ChainGraph& cg, const Word& w, ExecPolicy policy) {
  for (auto l : w)
    if (l >= cg.m()) fail(ErrorKind::InvalidArgument, "word letter out of range");
  // v_j(x) = number of chain tails from x using steps j..n-1.
  std::vector<BigCount> v(cg.points(), BigCount(1));
  for (std::size_t j = w.size(); j-- > 0;) v = kernels::count_step(cg.counts(w[j]), v, policy);
  BigCount total = 0;
  for (const auto& c : v) total += c;
  return total;
}

BigCount total_chain_count(const ChainGraph& cg, std::size_t n, ExecPolicy policy) {
  std::vector<BigCount> v(cg.points(), BigCount(1));
  for (std::size_t j = 0; j < n; ++j) v = kernels::count_step(cg.sum_counts(), v, policy);
  BigCount total = 0;
  for (const auto& c : v) total += c;
  return total;
}

std::vector<BitSet> reach_layers(const ChainGraph& cg, const BitSet& start, std::size_t n_max,
                                 ExecPolicy policy) {
  if (start.none()) fail(ErrorKind::InvalidArgument, "reach_layers needs a nonempty start set");
  std::vector<BitSet> layers{start};
  layers.reserve(n_max + 1);
  for (std::size_t t = 0; t < n_max; ++t)
    layers.push_back(
        kernels::step_layer(cg.union_relation(), cg.union_transposed(), layers.back(), policy));
  return layers;
}

}  // namespace chaindyn
