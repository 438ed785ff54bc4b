#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/instance.hpp"

namespace testing_helpers {

using namespace rainbow;

inline Graph pathGraph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.addEdge(i, i + 1);
  return g;
}

inline Graph cycleGraph(int n) {
  Graph g = pathGraph(n);
  g.addEdge(n - 1, 0);
  return g;
}

inline Graph completeGraph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.addEdge(u, v);
  return g;
}

// Center `center`, leaves the other vertices, edges added in leaf order.
inline Graph starGraph(int leaves, int center) {
  Graph g(leaves + 1);
  for (int v = 0; v <= leaves; ++v)
    if (v != center) g.addEdge(center, v);
  return g;
}

inline Graph randomGraph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.addEdge(u, v);
  return g;
}

// Graph on 5 vertices whose edges are the set bits of `mask` over the 10 pairs in order.
inline Graph graphFromMask(int n, unsigned mask) {
  Graph g(n);
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++bit)
      if ((mask >> bit) & 1U) g.addEdge(u, v);
  return g;
}

inline std::vector<VertexPair> randomSubset(const std::vector<VertexPair>& pool, std::mt19937_64& rng, int cap = 1 << 30) {
  std::vector<VertexPair> out;
  std::bernoulli_distribution coin(0.5);
  for (auto p : pool)
    if (static_cast<int>(out.size()) < cap && coin(rng)) out.push_back(p);
  return out;
}

// Exhaustive search over all walks of length <= k: does some u-v walk contain every guide edge
// and use each c0 color and each uncolored edge at most once?
inline bool walkOracle(const Graph& g, const std::vector<Color>& c0, VertexPair p, const std::vector<EdgeId>& guide, int k) {
  std::vector<EdgeId> walk;
  auto ok = [&] {
    std::set<Color> colors;
    std::set<EdgeId> plain;
    for (EdgeId e : walk) {
      if (c0[e]) {
        if (!colors.insert(c0[e]).second) return false;
      } else if (!plain.insert(e).second) {
        return false;
      }
    }
    for (EdgeId e : guide)
      if (std::find(walk.begin(), walk.end(), e) == walk.end()) return false;
    return true;
  };
  auto dfs = [&](auto&& self, Vertex x) -> bool {
    if (x == p.v && ok()) return true;
    if (static_cast<int>(walk.size()) == k) return false;
    for (auto [y, e] : g.neighbors(x)) {
      walk.push_back(e);
      bool found = self(self, y);
      walk.pop_back();
      if (found) return true;
    }
    return false;
  };
  return dfs(dfs, p.u);
}


// Simple u-v paths of at most k edges.
inline std::vector<std::vector<EdgeId>> allShortPaths(const Graph& g, VertexPair p, int k) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<char> on(g.n(), 0);
  std::vector<EdgeId> cur;
  auto dfs = [&](auto&& self, Vertex x) -> void {
    if (x == p.v) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == k) return;
    on[x] = 1;
    for (auto [y, e] : g.neighbors(x))
      if (!on[y]) {
        cur.push_back(e);
        self(self, y);
        cur.pop_back();
      }
    on[x] = 0;
  };
  dfs(dfs, p.u);
  return out;
}

// Largest number of feasible anti-edges one k-coloring satisfies, over all k^m colorings.
inline int bruteForceMaxSatisfied(const Graph& g, int k) {
  std::vector<std::vector<std::vector<EdgeId>>> paths;
  for (auto p : feasiblePairs(g, k)) paths.push_back(allShortPaths(g, p, k));
  std::vector<Color> c(g.m(), 1);
  int best = 0;
  while (true) {
    int sat = 0;
    for (const auto& ps : paths)
      for (const auto& path : ps) {
        std::uint32_t seen = 0;
        bool ok = true;
        for (EdgeId e : path) {
          std::uint32_t bit = 1U << c[e];
          ok &= !(seen & bit);
          seen |= bit;
        }
        if (ok) {
          ++sat;
          break;
        }
      }
    best = std::max(best, sat);
    int i = 0;
    while (i < g.m() && c[i] == k) c[i++] = 1;
    if (i == g.m()) break;
    ++c[i];
  }
  return best;
}

}  // namespace testing_helpers
