#include "rainbow/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "rainbow/errors.hpp"

namespace rainbow {

VertexPair makePair(Vertex a, Vertex b) { return a < b ? VertexPair{a, b} : VertexPair{b, a}; }

std::vector<VertexPair> normalizePairs(std::vector<VertexPair> pairs) {
  for (auto& p : pairs) p = makePair(p.u, p.v);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

Graph::Graph(int n) {
  if (n < 0) throw UsageError("negative vertex count");
  adj_.resize(n);
}

Vertex Graph::addVertex() {
  adj_.emplace_back();
  return n() - 1;
}

std::uint64_t Graph::key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

EdgeId Graph::addEdge(Vertex a, Vertex b) {
  if (a < 0 || b < 0 || a >= n() || b >= n())
    throw UsageError("edge endpoint out of range: " + std::to_string(a) + " " + std::to_string(b));
  if (a == b) throw UsageError("self-loop at vertex " + std::to_string(a));
  auto [it, inserted] = index_.try_emplace(key(a, b), m());
  if (!inserted) return it->second;
  VertexPair p = makePair(a, b);
  edges_.push_back({p.u, p.v});
  adj_[a].push_back({b, it->second});
  adj_[b].push_back({a, it->second});
  return it->second;
}

int Graph::maxDegree() const {
  int d = 0;
  for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

std::optional<EdgeId> Graph::edgeBetween(Vertex a, Vertex b) const {
  if (a == b) return std::nullopt;
  auto it = index_.find(key(a, b));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Graph::operator==(const Graph& other) const {
  if (n() != other.n() || m() != other.m()) return false;
  for (int e = 0; e < m(); ++e)
    if (edges_[e].u != other.edges_[e].u || edges_[e].v != other.edges_[e].v) return false;
  return true;
}

Graph buildGraph(int n, const std::vector<std::pair<Vertex, Vertex>>& edgeList) {
  Graph g(n);
  for (auto [a, b] : edgeList) g.addEdge(a, b);
  return g;
}

std::vector<Distance> bfsDistances(const Graph& g, Vertex source) {
  if (source < 0 || source >= g.n()) throw UsageError("source out of range");
  std::vector<Distance> dist(g.n());
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    for (auto [y, e] : g.neighbors(x)) {
      if (dist[y]) continue;
      dist[y] = *dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

std::vector<int> boundedDistances(const Graph& g, Vertex source, int limit) {
  std::vector<int> dist(g.n(), limit + 1);
  std::vector<Vertex> frontier{source}, next;
  dist[source] = 0;
  for (int d = 1; d <= limit && !frontier.empty(); ++d) {
    next.clear();
    for (Vertex x : frontier)
      for (auto [y, e] : g.neighbors(x))
        if (dist[y] > limit) {
          dist[y] = d;
          next.push_back(y);
        }
    frontier.swap(next);
  }
  return dist;
}

std::vector<VertexPair> feasiblePairs(const Graph& g, int k) {
  if (k < 1) throw UsageError("k must be at least 1");
  std::vector<VertexPair> out;
  for (Vertex u = 0; u < g.n(); ++u) {
    auto dist = boundedDistances(g, u, k);
    for (Vertex v = u + 1; v < g.n(); ++v)
      if (dist[v] >= 2 && dist[v] <= k) out.push_back({u, v});
  }
  return out;
}

std::vector<VertexPair> antiEdges(const Graph& g) {
  std::vector<VertexPair> out;
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = u + 1; v < g.n(); ++v)
      if (!g.adjacent(u, v)) out.push_back({u, v});
  return out;
}

std::vector<int> greedyProperColoring(const Graph& g) {
  std::vector<int> color(g.n(), 0);
  std::vector<int> seenAt(g.maxDegree() + 2, -1);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (auto [y, e] : g.neighbors(v))
      if (color[y] > 0 && color[y] < static_cast<int>(seenAt.size())) seenAt[color[y]] = v;
    int c = 1;
    while (seenAt[c] == v) ++c;
    color[v] = c;
  }
  return color;
}

bool isProperVertexColoring(const Graph& g, const std::vector<int>& color) {
  if (static_cast<int>(color.size()) != g.n()) return false;
  for (const auto& e : g.edges())
    if (color[e.u] == color[e.v]) return false;
  return true;
}

Graph pairGraph(int n, const std::vector<VertexPair>& pairs) {
  Graph g(n);
  for (auto p : pairs) g.addEdge(p.u, p.v);
  return g;
}

DisjointSets::DisjointSets(int size) { reset(size); }

void DisjointSets::reset(int size) {
  parent_.resize(size);
  rank_.assign(size, 0);
  for (int i = 0; i < size; ++i) parent_[i] = i;
  classes_ = size;
}

int DisjointSets::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --classes_;
  return true;
}

}  // namespace rainbow
