#include "chaindyn/digraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace chaindyn::digraph {

Components strongly_connected_components(const BitMatrix& rel) {
  const std::size_t n = rel.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  Components out;
  out.comp.assign(n, kUnset);
  std::size_t next_index = 0;

  struct Frame {
    std::size_t v;
    std::vector<std::size_t> succ;
    std::size_t pos;
  };
  std::vector<Frame> call;
  auto successors = [&](std::size_t v) {
    std::vector<std::size_t> s;
    rel.for_each_in_row(v, [&](std::size_t w) { s.push_back(w); });
    return s;
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, successors(root), 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.pos < f.succ.size()) {
        const std::size_t w = f.succ[f.pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, successors(w), 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.comp[w] = out.count;
        } while (w != v);
        ++out.count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return out;
}

bool strongly_connected(const BitMatrix& rel) {
  const std::size_t n = rel.size();
  if (n == 0) return false;
  // Forward and backward reachability from vertex 0.
  auto reach_all = [n](const BitMatrix& m) {
    BitSet seen(n);
    std::vector<std::size_t> todo{0};
    seen.set(0);
    while (!todo.empty()) {
      const std::size_t v = todo.back();
      todo.pop_back();
      m.for_each_in_row(v, [&](std::size_t w) {
        if (!seen.test(w)) {
          seen.set(w);
          todo.push_back(w);
        }
      });
    }
    return seen.count() == n;
  };
  return reach_all(rel) && reach_all(rel.transpose());
}

std::vector<std::optional<std::size_t>> bfs_levels(const BitMatrix& rel, std::size_t root) {
  std::vector<std::optional<std::size_t>> level(rel.size());
  std::deque<std::size_t> queue{root};
  level[root] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    rel.for_each_in_row(v, [&](std::size_t w) {
      if (!level[w]) {
        level[w] = *level[v] + 1;
        queue.push_back(w);
      }
    });
  }
  return level;
}

std::size_t period_of(const BitMatrix& rel, const std::vector<std::size_t>& vertices,
                      std::size_t root_position) {
  if (vertices.empty()) return 0;
  const std::size_t n = rel.size();
  BitSet member(n);
  for (auto v : vertices) member.set(v);
  std::vector<std::optional<long long>> level(n);
  std::deque<std::size_t> queue{vertices[root_position]};
  level[vertices[root_position]] = 0;
  long long g = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    rel.for_each_in_row(v, [&](std::size_t w) {
      if (!member.test(w)) return;
      if (!level[w]) {
        level[w] = *level[v] + 1;
        queue.push_back(w);
      } else {
        g = std::gcd(g, std::llabs(*level[v] + 1 - *level[w]));
      }
    });
  }
  return static_cast<std::size_t>(g);
}

std::size_t cyclic_period_lcm(const BitMatrix& rel, std::size_t cap) {
  const auto comps = strongly_connected_components(rel);
  std::vector<std::vector<std::size_t>> members(comps.count);
  for (std::size_t v = 0; v < rel.size(); ++v) members[comps.comp[v]].push_back(v);
  std::size_t l = 1;
  for (const auto& m : members) {
    const std::size_t p = period_of(rel, m);
    if (p == 0) continue;
    l = std::lcm(l, p);
    if (l > cap) return cap;
  }
  return l;
}

}  // namespace chaindyn::digraph
