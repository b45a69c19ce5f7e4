#pragma once

#include <string>
#include <vector>

#include "chaindyn/kernels.hpp"
#include "chaindyn/system.hpp"

namespace chaindyn {

// Per-generator delta-chain relations: A_i(x, y) iff dist(f_i(x), y) <= delta.
class ChainGraph {
 public:
  ChainGraph() = default;
  ChainGraph(GeneratorSystem system, double delta, ExecPolicy policy = ExecPolicy::Parallel);

  const GeneratorSystem& system() const { return system_; }
  std::size_t points() const { return system_.points(); }
  std::size_t m() const { return system_.m(); }
  double delta() const { return delta_; }
  // delta plus the snap error of the tables.
  double effective_tolerance() const { return delta_ + system_.quantization_error(); }

  const std::vector<BitMatrix>& adjacency() const { return adjacency_; }
  const BitMatrix& relation(std::size_t i) const { return adjacency_[i]; }
  const BitMatrix& union_relation() const { return union_; }
  const BitMatrix& union_transposed() const { return union_t_; }
  const CountMatrix& counts(std::size_t i) const { return counts_[i]; }
  const CountMatrix& sum_counts() const { return sum_; }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  GeneratorSystem system_;
  double delta_ = 0.0;
  std::vector<BitMatrix> adjacency_;
  BitMatrix union_;
  BitMatrix union_t_;
  std::vector<CountMatrix> counts_;
  CountMatrix sum_;
  std::vector<std::string> warnings_;
};

ChainGraph build_chain_graph(const GeneratorSystem& g, double delta,
                             ExecPolicy policy = ExecPolicy::Parallel);

// Step j of the chain uses letter word[j].
bool is_chain(const ChainGraph& cg, const Chain& c);

// |E(w, delta)|: labeled paths with step j in A_{w[j]}. The empty word gives
// the point count.
BigCount count_chains_for_word(const ChainGraph& cg, const Word& w,
                               ExecPolicy policy = ExecPolicy::Parallel);

// Sum over all m^n words of |E(w, delta)|, i.e. 1^T (sum_i A_i)^n 1.
BigCount total_chain_count(const ChainGraph& cg, std::size_t n,
                           ExecPolicy policy = ExecPolicy::Parallel);

// layers[0] = start, layers[t+1] = union out-neighbours of layers[t].
std::vector<BitSet> reach_layers(const ChainGraph& cg, const BitSet& start, std::size_t n_max,
                                 ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace chaindyn
