#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rainbow/exact.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/instance.hpp"
#include "rainbow/verify.hpp"

namespace rainbow {

// Largest k the exact k!/k^k arithmetic supports.
inline constexpr int kMaxApproxColors = 8;

struct PathPlan {
  std::vector<VertexPair> pairs;
  std::vector<Walk> paths;  // paths[i] joins pairs[i]
};

// Lexicographically smallest shortest path for every pair.
PathPlan choosePaths(const Graph& g, const std::vector<VertexPair>& S, int k);

int countRainbowPaths(const Graph& g, const Coloring& c, const PathPlan& plan);

// Expected number of rainbow plan paths scaled by k^k, before the first and after every edge is fixed.
using ExpectationTrace = std::vector<std::int64_t>;

Coloring derandomizedApprox(const Graph& g, const std::vector<VertexPair>& S, int k, ExpectationTrace* trace = nullptr);

// q <= (k!/k^k)·count, compared exactly.
bool withinApproxGuarantee(long long q, long long count, int k);
// ceil((k!/k^k)·count)
long long approxGuarantee(long long count, int k);

enum class KernelVerdict { YesImmediate, Reduced };

struct KernelResult {
  KernelVerdict verdict = KernelVerdict::Reduced;
  Graph graph;
  int q = 0;
  std::vector<Vertex> original;  // kernel vertex -> input vertex
  int removedComponents = 0;
};

KernelResult kernelize(const Graph& g, int k, int q);

struct MaxRainbowOptions {
  SolverOptions solver;
  long long subsetLimit = 2'000'000;  // subsets handed to the exact solver
};

struct MaxRainbowResult {
  bool yes = false;
  std::optional<Coloring> coloring;
  long long subsetsSolved = 0;
};

// Is there a k-coloring satisfying at least q feasible anti-edges?
MaxRainbowResult solveMaxRainbow(const Graph& g, int k, int q, const MaxRainbowOptions& opts = {});

}  // namespace rainbow
