#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

struct Biclique {
  std::vector<Vertex> left;
  std::vector<Vertex> right;
  bool operator==(const Biclique&) const = default;
};

struct BicliqueCover {
  std::vector<Biclique> bicliques;
  int size() const { return static_cast<int>(bicliques.size()); }
  bool operator==(const BicliqueCover&) const = default;
};

// Sides V1, V2 given by vertex names; adj[i] lists the V2 positions adjacent to V1[i].
struct BipartiteGraph {
  std::vector<Vertex> v1;
  std::vector<Vertex> v2;
  std::vector<std::vector<int>> adj;

  int maxDegree() const;
  // Bipartite complement edges, as (V1 position, V2 position).
  std::vector<std::pair<int, int>> complementEdges() const;
};

// Edges of g between two disjoint vertex sets.
BipartiteGraph bipartiteBetween(const Graph& g, const std::vector<Vertex>& v1, const std::vector<Vertex>& v2);

// Splits 0..n-1 by each bit position.
BicliqueCover coverCompleteGraph(int n);

// A with every V2 vertex adjacent in the bipartite complement to all of A. A holds V1 names.
Biclique closedBiclique(const BipartiteGraph& gb, const std::vector<Vertex>& A);

struct JuknaStats {
  int restarts = 0;
  long long samples = 0;
};

inline constexpr int kJuknaRestartCap = 50;
inline constexpr int kGreedyCoverCap = 20;

BicliqueCover juknaCoverRandom(const BipartiteGraph& gb, std::uint64_t seed, JuknaStats* stats = nullptr);
BicliqueCover juknaCoverGreedy(const BipartiteGraph& gb, int cap = kGreedyCoverCap, int workers = 1);

struct ColoredCoverOptions {
  bool deterministic = true;  // greedy covers when the smaller side fits the cap
  std::uint64_t seed = 1;
  int greedyCap = kGreedyCoverCap;
  int workers = 1;
};

// Covers all anti-edges of g; no biclique holds both ends of an edge of g.
BicliqueCover coverComplementColored(const Graph& g, const std::vector<int>& vcolor, const ColoredCoverOptions& opts = {});

// Every pair of every biclique is a bipartite-complement edge, and all of them are covered.
bool coversBipartiteComplement(const BipartiteGraph& gb, const BicliqueCover& cover);
// Every biclique pair is an anti-edge of g and every anti-edge is covered.
bool coversComplement(const Graph& g, const BicliqueCover& cover);
// No edge of g has both endpoints in one biclique.
bool sharesAtMostOneVertex(const Graph& g, const BicliqueCover& cover);

std::string serializeCover(const BicliqueCover& cover);
BicliqueCover parseCover(const std::string& text);

}  // namespace rainbow
