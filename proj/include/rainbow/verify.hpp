#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/instance.hpp"

namespace rainbow {

struct Walk {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  int length() const { return static_cast<int>(edges.size()); }
};

// Largest k the mask tables support.
inline constexpr int kMaxWalkColors = 16;

// Reusable workspace for the walk DP over (length, vertex, used-color mask).
// Colors are 1..k in `colors`, 0 meaning uncolored.
class GuidedWalkFinder {
 public:
  GuidedWalkFinder(const Graph& g, int k);

  std::optional<Walk> find(const std::vector<Color>& colors, VertexPair pair, const std::vector<EdgeId>& guide);

  int k() const { return k_; }

 private:
  bool allowed(EdgeId e) const;
  void bfs(Vertex s, std::vector<int>& dist, std::vector<Vertex>& seen);
  std::uint64_t* row(int len, int local) { return table_.data() + (static_cast<std::size_t>(len) * region_.size() + local) * words_; }
  bool test(int len, int local, std::uint32_t mask) {
    return (row(len, local)[mask >> 6] >> (mask & 63)) & 1U;
  }
  bool reconstruct(int len, int local, std::uint32_t mask, std::vector<EdgeId>& usedPlain, Walk& out);

  const Graph& g_;
  int k_;
  int words_;
  const std::vector<Color>* colors_ = nullptr;
  std::uint32_t guideMask_ = 0;
  std::vector<EdgeId> guideByColor_;
  Vertex source_ = 0;

  std::vector<int> distU_, distV_, local_;
  std::vector<Vertex> seenU_, seenV_, region_;
  std::vector<int> regionDistU_, regionDistV_;
  std::vector<std::uint64_t> table_;
};

// A u-v walk of length at most k containing every guide edge, with no c0 color twice
// and no uncolored edge twice, so its uncolored edges can be colored to make it rainbow.
std::optional<Walk> findGuidedWalk(const Graph& g, const PartialColoring& c0, VertexPair pair,
                                   const std::vector<EdgeId>& guide, int k);

// Returns the requests that are satisfied.
std::vector<VertexPair> verifyRequests(const Graph& g, const Coloring& c, const std::vector<VertexPair>& requests, int k);

bool isRainbowConnected(const Graph& g, const Coloring& c, int k);

// Distinct colors and consecutive adjacency.
bool isRainbowWalk(const Graph& g, const Coloring& c, const Walk& w);

}  // namespace rainbow
