#include "chaindyn/solvers.hpp"

#include <algorithm>

namespace chaindyn::solvers {

std::vector<std::size_t> greedy_maximal_independent(const BitMatrix& conflict) {
  const std::size_t n = conflict.size();
  BitSet blocked(n);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (blocked.test(v)) continue;
    out.push_back(v);
    blocked.set(v);
    blocked |= conflict.row(v);
  }
  return out;
}

namespace {

class CliqueSearch {
 public:
  CliqueSearch(const BitMatrix& compatible, std::size_t limit)
      : adj_(compatible), limit_(limit) {}

  void run(std::vector<std::size_t> initial) {
    best_ = std::move(initial);
    expand(BitSet::full(adj_.size()));
  }

  std::vector<std::size_t> best_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;

 private:
  void colour_sort(const BitSet& p, std::vector<std::size_t>& order,
                   std::vector<std::size_t>& colour) const {
    BitSet uncoloured = p;
    std::size_t k = 0;
    while (!uncoloured.none()) {
      ++k;
      BitSet q = uncoloured;
      while (!q.none()) {
        std::size_t v = 0;
        for (std::size_t w = 0; w < q.word_count(); ++w)
          if (q.words()[w]) {
            v = w * 64 + static_cast<std::size_t>(std::countr_zero(q.words()[w]));
            break;
          }
        uncoloured.reset(v);
        q.reset(v);
        const auto row = adj_.row_words(v);
        auto qw = q.words();
        for (std::size_t i = 0; i < qw.size(); ++i) qw[i] &= ~row[i];
        order.push_back(v);
        colour.push_back(k);
      }
    }
  }

  void expand(BitSet p) {
    if (aborted_) return;
    nodes_ += 1 + p.count() / 64;
    if (nodes_ > limit_) {
      aborted_ = true;
      return;
    }
    std::vector<std::size_t> order, colour;
    colour_sort(p, order, colour);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current_.size() + colour[i] <= best_.size()) return;
      const std::size_t v = order[i];
      current_.push_back(v);
      BitSet np = p;
      const auto row = adj_.row_words(v);
      auto nw = np.words();
      for (std::size_t j = 0; j < nw.size(); ++j) nw[j] &= row[j];
      if (np.none()) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(std::move(np));
      }
      current_.pop_back();
      p.reset(v);
      if (aborted_) return;
    }
  }

  const BitMatrix& adj_;
  std::size_t limit_;
  std::vector<std::size_t> current_;
};

class DominationSearch {
 public:
  DominationSearch(const BitMatrix& close, std::size_t limit)
      : close_(close), two_hop_(close.compose(close)), limit_(limit) {}

  void run(std::vector<std::size_t> initial) {
    best_ = std::move(initial);
    const BitSet all = BitSet::full(close_.size());
    search(all, all);
  }

  std::vector<std::size_t> best_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;

 private:
  std::size_t gain(std::size_t c, const BitSet& uncovered) const {
    const auto row = close_.row_words(c);
    std::size_t g = 0;
    for (std::size_t i = 0; i < row.size(); ++i) g += static_cast<std::size_t>(std::popcount(row[i] & uncovered.words()[i]));
    return g;
  }

  // Uncovered vertices whose candidate sets are pairwise disjoint each need
  // their own dominator; also no dominator covers more than the best gain.
  std::size_t lower_bound(const BitSet& uncovered, const BitSet& allowed) const {
    BitSet u = uncovered;
    std::size_t count = 0;
    for (std::size_t w = 0; w < u.word_count(); ++w) {
      while (u.words()[w]) {
        const std::size_t e = w * 64 + static_cast<std::size_t>(std::countr_zero(u.words()[w]));
        ++count;
        const auto row = two_hop_.row_words(e);
        auto uw = u.words();
        for (std::size_t i = 0; i < uw.size(); ++i) uw[i] &= ~row[i];
      }
    }
    std::size_t top = 0;
    allowed.for_each([&](std::size_t c) { top = std::max(top, gain(c, uncovered)); });
    if (top == 0) return static_cast<std::size_t>(-1) / 2;
    return std::max(count, (uncovered.count() + top - 1) / top);
  }

  // `allowed` shrinks as sibling branches are exhausted, so each dominating
  // set is reached along one path only.
  void search(const BitSet& uncovered, BitSet allowed) {
    if (aborted_) return;
    nodes_ += 1 + uncovered.count() / 64;
    if (nodes_ > limit_) {
      aborted_ = true;
      return;
    }
    if (uncovered.none()) {
      if (current_.size() < best_.size()) best_ = current_;
      return;
    }
    if (current_.size() + lower_bound(uncovered, allowed) >= best_.size()) return;

    std::size_t pick = 0, fewest = static_cast<std::size_t>(-1);
    bool stuck = false;
    uncovered.for_each([&](std::size_t e) {
      std::size_t c = 0;
      const auto row = close_.row_words(e);
      for (std::size_t i = 0; i < row.size(); ++i)
        c += static_cast<std::size_t>(std::popcount(row[i] & allowed.words()[i]));
      if (c == 0) stuck = true;
      if (c < fewest) {
        fewest = c;
        pick = e;
      }
    });
    if (stuck) return;

    struct Option {
      std::size_t gain, vertex;
      BitSet covers;
    };
    std::vector<Option> options;
    close_.for_each_in_row(pick, [&](std::size_t c) {
      if (!allowed.test(c)) return;
      BitSet cov = close_.row(c);
      cov &= uncovered;
      options.push_back({cov.count(), c, std::move(cov)});
    });
    std::sort(options.begin(), options.end(),
              [](const Option& a, const Option& b) { return a.gain != b.gain ? a.gain > b.gain : a.vertex < b.vertex; });
    // An option covering a subset of what an earlier one covers can be
    // swapped for it in any solution.
    std::vector<char> dominated(options.size(), 0);
    for (std::size_t i = 0; i < options.size(); ++i)
      for (std::size_t j = 0; j < i && !dominated[i]; ++j)
        if (!dominated[j] && options[i].covers.is_subset_of(options[j].covers)) dominated[i] = 1;
    for (std::size_t i = 0; i < options.size(); ++i) {
      const std::size_t c = options[i].vertex;
      if (dominated[i]) {
        allowed.reset(c);
        continue;
      }
      current_.push_back(c);
      BitSet rest = uncovered;
      auto rw = rest.words();
      const auto cw = options[i].covers.words();
      for (std::size_t k = 0; k < rw.size(); ++k) rw[k] &= ~cw[k];
      search(rest, allowed);
      current_.pop_back();
      allowed.reset(c);
      if (aborted_) return;
    }
  }

  const BitMatrix& close_;
  BitMatrix two_hop_;
  std::size_t limit_;
  std::vector<std::size_t> current_;
};

// Branch and reduce for sparse conflict graphs: degree-0/1 and domination
// reductions, independent components, then branch on a max-degree vertex with
// a greedy clique-cover bound.
class ReduceSearch {
 public:
  ReduceSearch(const BitMatrix& conflict, std::size_t limit) : adj_(conflict), limit_(limit) {}

  std::vector<std::size_t> solve(BitSet alive) {
    std::vector<std::size_t> taken;
    for (bool changed = true; changed;) {
      if (aborted_ || work() > limit_) {
        aborted_ = true;
        auto rest = greedy(alive);
        taken.insert(taken.end(), rest.begin(), rest.end());
        return taken;
      }
      changed = false;
      for (auto v : alive.indices()) {
        if (!alive.test(v)) continue;
        const std::size_t deg = degree(v, alive);
        if (deg <= 1) {
          taken.push_back(v);
          remove_closed(v, alive);
          changed = true;
        }
      }
      if (changed) continue;
      for (auto v : alive.indices()) {
        bool dominated = false;
        const auto row = adj_.row_words(v);
        for (std::size_t w = 0; w < row.size() && !dominated; ++w) {
          std::uint64_t bits = row[w] & alive.words()[w];
          while (bits && !dominated) {
            const std::size_t u = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
            bits &= bits - 1;
            dominated = closed_subset(u, v, alive);
          }
        }
        if (dominated) {
          alive.reset(v);
          changed = true;
        }
      }
    }
    if (alive.none()) return taken;

    const auto comps = components(alive);
    if (comps.size() > 1) {
      for (const auto& c : comps) {
        const auto part = solve(c);
        taken.insert(taken.end(), part.begin(), part.end());
      }
      return taken;
    }

    std::size_t v = 0, best_deg = 0;
    alive.for_each([&](std::size_t x) {
      const std::size_t d = degree(x, alive);
      if (d > best_deg) {
        best_deg = d;
        v = x;
      }
    });
    BitSet with = alive;
    remove_closed(v, with);
    auto best = solve(std::move(with));
    best.push_back(v);
    BitSet without = alive;
    without.reset(v);
    if (!aborted_ && clique_cover(without) > best.size()) {
      auto other = solve(std::move(without));
      if (other.size() > best.size()) best = std::move(other);
    }
    taken.insert(taken.end(), best.begin(), best.end());
    return taken;
  }

  // one unit per 64 row sweeps
  std::size_t work() const { return sweeps_ / 64; }
  bool aborted_ = false;

 private:
  std::size_t degree(std::size_t v, const BitSet& alive) const {
    ++sweeps_;
    const auto row = adj_.row_words(v);
    std::size_t d = 0;
    for (std::size_t i = 0; i < row.size(); ++i) d += static_cast<std::size_t>(std::popcount(row[i] & alive.words()[i]));
    return d;
  }

  void remove_closed(std::size_t v, BitSet& alive) const {
    ++sweeps_;
    const auto row = adj_.row_words(v);
    auto aw = alive.words();
    for (std::size_t i = 0; i < aw.size(); ++i) aw[i] &= ~row[i];
    alive.reset(v);
  }

  // N[u] within alive is contained in N[v]; u and v are adjacent.
  bool closed_subset(std::size_t u, std::size_t v, const BitSet& alive) const {
    ++sweeps_;
    const auto ru = adj_.row_words(u);
    const auto rv = adj_.row_words(v);
    for (std::size_t i = 0; i < ru.size(); ++i) {
      std::uint64_t extra = ru[i] & alive.words()[i] & ~rv[i];
      if (i == (v >> 6)) extra &= ~(std::uint64_t{1} << (v & 63));
      if (extra) return false;
    }
    return true;
  }

  std::vector<BitSet> components(const BitSet& alive) const {
    std::vector<BitSet> out;
    BitSet left = alive;
    while (!left.none()) {
      std::size_t root = 0;
      for (std::size_t w = 0; w < left.word_count(); ++w)
        if (left.words()[w]) {
          root = w * 64 + static_cast<std::size_t>(std::countr_zero(left.words()[w]));
          break;
        }
      BitSet comp(alive.size());
      comp.set(root);
      left.reset(root);
      std::vector<std::size_t> stack{root};
      while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        ++sweeps_;
        const auto row = adj_.row_words(x);
        for (std::size_t w = 0; w < row.size(); ++w) {
          std::uint64_t bits = row[w] & left.words()[w];
          left.words()[w] &= ~bits;
          comp.words()[w] |= bits;
          while (bits) {
            stack.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
          }
        }
      }
      out.push_back(std::move(comp));
    }
    return out;
  }

  // Any clique cover bounds the independence number.
  std::size_t clique_cover(const BitSet& alive) const {
    std::vector<BitSet> common;  // vertices adjacent to every member of clique i
    alive.for_each([&](std::size_t v) {
      for (auto& c : common)
        if (c.test(v)) {
          ++sweeps_;
          c &= adj_.row(v);
          return;
        }
      BitSet c = adj_.row(v);
      c &= alive;
      common.push_back(std::move(c));
    });
    return common.size();
  }

  std::vector<std::size_t> greedy(const BitSet& alive) const {
    std::vector<std::size_t> out;
    BitSet left = alive;
    alive.for_each([&](std::size_t v) {
      if (!left.test(v)) return;
      out.push_back(v);
      remove_closed(v, left);
    });
    return out;
  }

  const BitMatrix& adj_;
  std::size_t limit_;
  mutable std::size_t sweeps_ = 0;
};

SolveResult mis_single(const BitMatrix& conflict, std::size_t node_limit) {
  const std::size_t n = conflict.size();
  SolveResult out;
  BitMatrix clean = conflict;
  for (std::size_t v = 0; v < n; ++v) clean.row_words(v)[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  // Reductions settle most proximity graphs; dense leftovers go to the
  // colouring-bounded clique search on the complement.
  const bool dense = conflict.edge_count() * 4 >= n * n;
  ReduceSearch search(clean, dense ? node_limit / 2 : node_limit);
  out.members = search.solve(BitSet::full(n));
  out.exact = !search.aborted_;
  out.nodes = search.work();
  if (out.exact) return out;
  if (dense) {
    BitMatrix compatible(n);
    const BitSet all = BitSet::full(n);
    for (std::size_t v = 0; v < n; ++v) {
      auto dst = compatible.row_words(v);
      const auto src = clean.row_words(v);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = ~src[i] & all.words()[i];
      dst[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
    CliqueSearch clique(compatible, node_limit - std::min(node_limit, out.nodes));
    clique.run(greedy_maximal_independent(clean));
    out.nodes += clique.nodes_;
    if (!clique.aborted_ || clique.best_.size() > out.members.size()) {
      out.members = std::move(clique.best_);
      out.exact = !clique.aborted_;
    }
    return out;
  }
  auto g = greedy_maximal_independent(clean);
  if (g.size() > out.members.size()) out.members = std::move(g);
  return out;
}

SolveResult mds_single(const BitMatrix& close, std::size_t node_limit) {
  SolveResult out;
  DominationSearch search(close, node_limit);
  search.run(greedy_maximal_independent(close));
  out.members = std::move(search.best_);
  out.exact = !search.aborted_;
  out.nodes = search.nodes_;
  return out;
}

// Both optima add up over connected components, so each one is searched on
// its own with whatever node budget is left.
template <class Solve>
SolveResult by_components(const BitMatrix& rel, std::size_t node_limit, Solve solve) {
  const std::size_t n = rel.size();
  SolveResult out;
  out.exact = true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> local(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::size_t> comp{root};
    seen[root] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      rel.for_each_in_row(comp[i], [&](std::size_t w) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      });
    if (comp.size() == 1) {
      out.members.push_back(root);
      continue;
    }
    std::sort(comp.begin(), comp.end());
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
    BitMatrix sub(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i)
      rel.for_each_in_row(comp[i], [&](std::size_t w) { sub.set(i, local[w]); });
    const std::size_t left = node_limit > out.nodes ? node_limit - out.nodes : 1;
    auto r = solve(sub, left);
    out.nodes += r.nodes;
    out.exact = out.exact && r.exact;
    for (auto v : r.members) out.members.push_back(comp[v]);
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace

SolveResult max_independent_set(const BitMatrix& conflict, std::size_t node_limit) {
  return by_components(conflict, node_limit, mis_single);
}

SolveResult min_dominating_set(const BitMatrix& close, std::size_t node_limit) {
  return by_components(close, node_limit, mds_single);
}

}  // namespace chaindyn::solvers
