#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rainbow {

using Vertex = int;
using EdgeId = int;
using Color = int;

struct VertexPair {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const VertexPair&) const = default;
};

// Canonical pair with u < v.
VertexPair makePair(Vertex a, Vertex b);

// Sorts and deduplicates, canonicalizing each pair.
std::vector<VertexPair> normalizePairs(std::vector<VertexPair> pairs);

struct Edge {
  Vertex u;
  Vertex v;
};

struct Incidence {
  Vertex to;
  EdgeId edge;
};

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  Vertex addVertex();
  // Adds the canonical edge {a,b}; an existing edge keeps its index.
  EdgeId addEdge(Vertex a, Vertex b);

  int n() const { return static_cast<int>(adj_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Incidence>& neighbors(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  int maxDegree() const;

  std::optional<EdgeId> edgeBetween(Vertex a, Vertex b) const;
  bool adjacent(Vertex a, Vertex b) const { return edgeBetween(a, b).has_value(); }

  bool operator==(const Graph& other) const;

 private:
  static std::uint64_t key(Vertex a, Vertex b);

  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adj_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
};

Graph buildGraph(int n, const std::vector<std::pair<Vertex, Vertex>>& edgeList);

// Unreachable vertices have no value.
using Distance = std::optional<int>;

std::vector<Distance> bfsDistances(const Graph& g, Vertex source);

// Distances capped at `limit`; vertices farther away get limit + 1.
std::vector<int> boundedDistances(const Graph& g, Vertex source, int limit);

// Non-adjacent pairs at distance at most k.
std::vector<VertexPair> feasiblePairs(const Graph& g, int k);

std::vector<VertexPair> antiEdges(const Graph& g);

// Colors are 1-based; vertex v takes the smallest color unused by earlier neighbors.
std::vector<int> greedyProperColoring(const Graph& g);

bool isProperVertexColoring(const Graph& g, const std::vector<int>& color);

// Graph on the same vertex set whose edges are the given pairs.
Graph pairGraph(int n, const std::vector<VertexPair>& pairs);

class DisjointSets {
 public:
  explicit DisjointSets(int size = 0);
  void reset(int size);
  int find(int x);
  bool unite(int a, int b);
  int classes() const { return classes_; }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int classes_ = 0;
};

}  // namespace rainbow
