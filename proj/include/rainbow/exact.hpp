#pragma once

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rainbow/graph.hpp"
#include "rainbow/instance.hpp"

namespace rainbow {

using ColoringCount = boost::multiprecision::cpp_int;

enum class PickRule {
  Lexicographic,    // smallest request pair
  MostConstrained,  // fewest uncolored edges on the current guided walk
  FewestWalks,      // fewest (u-v walks of length <= k) x (rainbow completions of the current walk)
};

struct FindColoringOptions {
  PickRule pick = PickRule::Lexicographic;
  // Fail a node as soon as some open request has no guided walk.
  bool forwardCheck = false;
  // In the repair branches skip the color the committed walk already gave the edge.
  bool skipCommittedColor = false;
  long long nodeLimit = 50'000'000;  // 0 = unlimited
};

struct PropagationOptions {
  // Requests with more simple paths than this are only checked by guided walks.
  std::size_t pathCap = 4096;
  long long nodeLimit = 50'000'000;  // 0 = unlimited
};

enum class ExactBackend {
  FindColoring,  // the guided-walk branching search
  Propagation,   // domain propagation over bounded simple paths
};

struct SolverOptions {
  double bruteForceBits = 40;  // cap on free-edge count times log2 k
  int subsetCap = 26;          // cap on |S| for inclusion-exclusion
  int workers = 1;
  FindColoringOptions findColoring{PickRule::MostConstrained, true, true};
  ExactBackend backend = ExactBackend::FindColoring;
  PropagationOptions propagation;
};

struct FindColoringStats {
  long long nodes = 0;
  int maxDepth = 0;
};

std::optional<Coloring> bruteForceSolve(const Instance& inst, const SolverOptions& opts = {});
ColoringCount bruteForceCount(const Instance& inst, const SolverOptions& opts = {});

struct QuotientStructure {
  DisjointSets sets;
  int classCount = 0;
};

// Unions the two edges of every 2-path joining a pair of X.
QuotientStructure quotientClasses(const Graph& g, const std::vector<VertexPair>& X);

// Number of 2-colorings of E satisfying all of S, by the signed sum over subsets of S.
ColoringCount countSatisfying2Colorings(const Graph& g, const std::vector<VertexPair>& S, const SolverOptions& opts = {});
// As above, counting only colorings that extend c0.
ColoringCount countSatisfying2Extensions(const Graph& g, const std::vector<VertexPair>& S, const PartialColoring& c0,
                                         const SolverOptions& opts = {});

std::optional<Coloring> extract2Coloring(const Graph& g, const std::vector<VertexPair>& S, const SolverOptions& opts = {});
std::optional<Coloring> extract2Extension(const Graph& g, const std::vector<VertexPair>& S, const PartialColoring& c0,
                                          const SolverOptions& opts = {});

using GuideFunction = std::map<VertexPair, std::vector<EdgeId>>;

// Branching search for a coloring extending c0 that joins every pair of S0 by a walk
// through its guide edges with no repeated color. Requests absent from f have empty guides.
std::optional<Coloring> findColoring(const Instance& inst, const std::vector<VertexPair>& S0, const PartialColoring& c0,
                                     const GuideFunction& f, const FindColoringOptions& opts = {},
                                     FindColoringStats* stats = nullptr);

struct PropagationStats {
  long long nodes = 0;
  long long paths = 0;
  int lazyRequests = 0;
};

// Branching over per-edge color domains. Each request keeps its simple paths of length <= k,
// a path dies once its edges cannot take distinct colors, and a request down to one path
// prunes that path's domains to the colors some rainbow assignment uses.
std::optional<Coloring> solveByPropagation(const Instance& inst, const PropagationOptions& opts = {},
                                           PropagationStats* stats = nullptr);

// Simple u-v paths with at most k edges, as edge lists; stops once more than cap are found.
std::vector<std::vector<EdgeId>> simplePaths(const Graph& g, VertexPair p, int k,
                                             std::size_t cap = std::numeric_limits<std::size_t>::max());

// Any request farther than k apart.
bool hasInfeasibleRequest(const Graph& g, const std::vector<VertexPair>& S, int k);

std::optional<Coloring> solveSubsetRainbow(const Instance& inst, const SolverOptions& opts = {},
                                           FindColoringStats* stats = nullptr);

}  // namespace rainbow
