#include <algorithm>
#include <bit>

#include "rainbow/errors.hpp"
#include "rainbow/verify.hpp"

namespace rainbow {

namespace {

// Positions whose bit b is clear, for b < 6.
constexpr std::uint64_t kClearBit[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

constexpr std::size_t kTableWordLimit = std::size_t{1} << 25;

// dst |= { X | bit(c) : X in src, c not in X }
void addColor(std::uint64_t* dst, const std::uint64_t* src, int words, Color c) {
  int b = c - 1;
  if (b < 6) {
    int s = 1 << b;
    for (int j = 0; j < words; ++j) dst[j] |= (src[j] & kClearBit[b]) << s;
  } else {
    int ws = 1 << (b - 6);
    for (int j = 0; j < words; ++j)
      if (!(j & ws)) dst[j + ws] |= src[j];
  }
}

}  // namespace

GuidedWalkFinder::GuidedWalkFinder(const Graph& g, int k) : g_(g), k_(k) {
  if (k < 1 || k > kMaxWalkColors) throw UsageError("walk search supports 1 <= k <= " + std::to_string(kMaxWalkColors));
  words_ = k <= 6 ? 1 : 1 << (k - 6);
  distU_.assign(g.n(), -1);
  distV_.assign(g.n(), -1);
  local_.assign(g.n(), -1);
  guideByColor_.assign(k + 1, -1);
}

bool GuidedWalkFinder::allowed(EdgeId e) const {
  Color c = (*colors_)[e];
  if (c == 0 || !((guideMask_ >> (c - 1)) & 1U)) return true;
  return guideByColor_[c] == e;
}

void GuidedWalkFinder::bfs(Vertex s, std::vector<int>& dist, std::vector<Vertex>& seen) {
  seen.clear();
  dist[s] = 0;
  seen.push_back(s);
  for (std::size_t head = 0; head < seen.size(); ++head) {
    Vertex x = seen[head];
    if (dist[x] == k_) continue;
    for (auto [y, e] : g_.neighbors(x)) {
      if (dist[y] >= 0 || !allowed(e)) continue;
      dist[y] = dist[x] + 1;
      seen.push_back(y);
    }
  }
}

std::optional<Walk> GuidedWalkFinder::find(const std::vector<Color>& colors, VertexPair pair,
                                           const std::vector<EdgeId>& guide) {
  if (static_cast<int>(colors.size()) != g_.m()) throw UsageError("coloring size differs from edge count");
  if (static_cast<int>(guide.size()) > k_) throw UsageError("guide set larger than k");
  if (pair.u < 0 || pair.v < 0 || pair.u >= g_.n() || pair.v >= g_.n()) throw UsageError("pair out of range");
  colors_ = &colors;
  guideMask_ = 0;
  for (EdgeId e : guide) {
    Color c = colors[e];
    if (c == 0) throw UsageError("guide edge is not precolored");
    if (c > k_) throw UsageError("color out of range");
    if ((guideMask_ >> (c - 1)) & 1U) {
      bool repeated = guideByColor_[c] == e;
      for (EdgeId f : guide) guideByColor_[colors[f]] = -1;
      if (repeated) throw UsageError("guide edge repeated");
      return std::nullopt;
    }
    guideMask_ |= 1U << (c - 1);
    guideByColor_[c] = e;
  }
  struct Cleanup {
    GuidedWalkFinder* self;
    const std::vector<EdgeId>& guide;
    ~Cleanup() {
      for (EdgeId e : guide) self->guideByColor_[(*self->colors_)[e]] = -1;
      for (Vertex x : self->seenU_) self->distU_[x] = -1;
      for (Vertex x : self->seenV_) self->distV_[x] = -1;
      for (Vertex x : self->region_) self->local_[x] = -1;
      self->seenU_.clear();
      self->seenV_.clear();
      self->region_.clear();
    }
  } cleanup{this, guide};

  source_ = pair.u;
  Vertex target = pair.v;
  bfs(pair.u, distU_, seenU_);
  if (distU_[target] < 0) return std::nullopt;
  bfs(target, distV_, seenV_);
  regionDistU_.clear();
  regionDistV_.clear();
  for (Vertex x : seenU_) {
    if (distV_[x] < 0 || distU_[x] + distV_[x] > k_) continue;
    local_[x] = static_cast<int>(region_.size());
    region_.push_back(x);
    regionDistU_.push_back(distU_[x]);
    regionDistV_.push_back(distV_[x]);
  }
  for (EdgeId e : guide) {
    const Edge& ed = g_.edge(e);
    if (local_[ed.u] < 0 || local_[ed.v] < 0) return std::nullopt;
  }

  const std::size_t R = region_.size();
  const std::size_t need = static_cast<std::size_t>(k_ + 1) * R * words_;
  if (need > kTableWordLimit) throw ResourceError("walk table too large");
  if (table_.size() < need) table_.resize(need);
  std::fill(table_.begin(), table_.begin() + static_cast<std::ptrdiff_t>(need), 0);

  row(0, local_[pair.u])[0] = 1;
  const int targetLocal = local_[target];
  std::vector<std::uint32_t> finals;
  std::vector<EdgeId> usedPlain;
  for (int len = 1; len <= k_; ++len) {
    bool any = false;
    for (std::size_t i = 0; i < R; ++i) {
      if (regionDistU_[i] > len || len + regionDistV_[i] > k_) continue;
      std::uint64_t* dst = row(len, static_cast<int>(i));
      for (auto [y, e] : g_.neighbors(region_[i])) {
        int j = local_[y];
        if (j < 0 || regionDistU_[j] > len - 1 || !allowed(e)) continue;
        const std::uint64_t* src = row(len - 1, j);
        Color c = colors[e];
        if (c == 0) {
          for (int w = 0; w < words_; ++w) dst[w] |= src[w];
        } else {
          addColor(dst, src, words_, c);
        }
      }
      any = true;
    }
    if (!any) break;
    finals.clear();
    const std::uint64_t* tr = row(len, targetLocal);
    for (int w = 0; w < words_; ++w) {
      for (std::uint64_t bits = tr[w]; bits; bits &= bits - 1) {
        auto mask = static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits));
        if ((mask & guideMask_) == guideMask_) finals.push_back(mask);
      }
    }
    // fewest uncolored edges first, then smallest mask
    std::stable_sort(finals.begin(), finals.end(), [](std::uint32_t a, std::uint32_t b) {
      return std::popcount(a) > std::popcount(b);
    });
    for (std::uint32_t mask : finals) {
      Walk w;
      usedPlain.clear();
      if (reconstruct(len, targetLocal, mask, usedPlain, w)) {
        std::reverse(w.edges.begin(), w.edges.end());
        w.vertices.assign(1, pair.u);
        for (EdgeId e : w.edges) {
          const Edge& ed = g_.edge(e);
          w.vertices.push_back(ed.u == w.vertices.back() ? ed.v : ed.u);
        }
        return w;
      }
    }
  }
  return std::nullopt;
}

bool GuidedWalkFinder::reconstruct(int len, int local, std::uint32_t mask, std::vector<EdgeId>& usedPlain, Walk& out) {
  if (len == 0) return region_[local] == source_ && mask == 0;
  struct Step {
    Vertex y;
    EdgeId e;
  };
  std::vector<Step> steps;
  for (auto [y, e] : g_.neighbors(region_[local])) {
    int j = local_[y];
    if (j < 0 || !allowed(e)) continue;
    Color c = (*colors_)[e];
    std::uint32_t prev = mask;
    if (c != 0) {
      if (!((mask >> (c - 1)) & 1U)) continue;
      prev = mask & ~(1U << (c - 1));
    } else if (std::find(usedPlain.begin(), usedPlain.end(), e) != usedPlain.end()) {
      continue;
    }
    if (!test(len - 1, j, prev)) continue;
    steps.push_back({y, e});
  }
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.y != b.y ? a.y < b.y : a.e < b.e; });
  for (auto [y, e] : steps) {
    Color c = (*colors_)[e];
    std::uint32_t prev = c ? mask & ~(1U << (c - 1)) : mask;
    if (c == 0) usedPlain.push_back(e);
    out.edges.push_back(e);
    if (reconstruct(len - 1, local_[y], prev, usedPlain, out)) return true;
    out.edges.pop_back();
    if (c == 0) usedPlain.pop_back();
  }
  return false;
}

std::optional<Walk> findGuidedWalk(const Graph& g, const PartialColoring& c0, VertexPair pair,
                                   const std::vector<EdgeId>& guide, int k) {
  for (EdgeId e : guide) {
    if (e < 0 || e >= g.m()) throw UsageError("guide edge out of range");
    if (!c0.isSet(e)) throw UsageError("guide edge outside the precolored domain");
  }
  GuidedWalkFinder finder(g, k);
  return finder.find(c0.values(), pair, guide);
}

namespace {

void checkTotal(const Graph& g, const Coloring& c, int k) {
  if (static_cast<int>(c.size()) != g.m()) throw UsageError("coloring size differs from edge count");
  for (Color x : c)
    if (x < 1 || x > k) throw UsageError("coloring uses color " + std::to_string(x) + " outside 1.." + std::to_string(k));
}

}  // namespace

std::vector<VertexPair> verifyRequests(const Graph& g, const Coloring& c, const std::vector<VertexPair>& requests, int k) {
  checkTotal(g, c, k);
  std::vector<VertexPair> out;
  if (requests.empty()) return out;
  GuidedWalkFinder finder(g, k);
  for (auto p : requests) {
    if (p.u == p.v) continue;
    if (g.adjacent(p.u, p.v) || finder.find(c, p, {})) out.push_back(p);
  }
  return out;
}

bool isRainbowConnected(const Graph& g, const Coloring& c, int k) {
  checkTotal(g, c, k);
  const int n = g.n();
  if (n <= 1) return true;
  const std::size_t budgetWords = std::size_t{1} << 23;
  if (k > kMaxWalkColors || (std::size_t{1} << k) * n > budgetWords) {
    auto pairs = antiEdges(g);
    return verifyRequests(g, c, pairs, k).size() == pairs.size();
  }
  const std::size_t masks = std::size_t{1} << k;
  // reach[X][x]: sources joined to x by a walk using each color of X exactly once
  int blockWords = static_cast<int>(std::max<std::size_t>(1, budgetWords / (masks * n)));
  blockWords = std::min(blockWords, (n + 63) / 64);
  std::vector<std::uint64_t> reach(masks * n * blockWords);
  std::vector<std::uint64_t> total(static_cast<std::size_t>(n) * blockWords);
  std::vector<std::uint32_t> order(masks);
  for (std::uint32_t i = 0; i < masks; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });

  for (int base = 0; base < n; base += blockWords * 64) {
    const int hi = std::min(n, base + blockWords * 64);
    std::fill(reach.begin(), reach.end(), 0);
    auto cell = [&](std::uint32_t X, Vertex x) { return reach.data() + (X * n + x) * static_cast<std::size_t>(blockWords); };
    for (Vertex s = base; s < hi; ++s) cell(0, s)[(s - base) >> 6] |= std::uint64_t{1} << ((s - base) & 63);
    for (std::uint32_t X : order) {
      if (X == 0) continue;
      for (Vertex x = 0; x < n; ++x) {
        std::uint64_t* dst = cell(X, x);
        for (auto [y, e] : g.neighbors(x)) {
          std::uint32_t bit = 1U << (c[e] - 1);
          if (!(X & bit)) continue;
          const std::uint64_t* src = cell(X ^ bit, y);
          for (int w = 0; w < blockWords; ++w) dst[w] |= src[w];
        }
      }
    }
    const int width = hi - base;
    for (Vertex x = 0; x < n; ++x) {
      std::uint64_t* acc = total.data() + static_cast<std::size_t>(x) * blockWords;
      std::fill(acc, acc + blockWords, 0);
      for (std::uint32_t X = 0; X < masks; ++X) {
        const std::uint64_t* src = cell(X, x);
        for (int w = 0; w < blockWords; ++w) acc[w] |= src[w];
      }
      for (int w = 0; w * 64 < width; ++w) {
        int bits = std::min(64, width - w * 64);
        std::uint64_t full = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
        if ((acc[w] & full) != full) return false;
      }
    }
  }
  return true;
}

bool isRainbowWalk(const Graph& g, const Coloring& c, const Walk& w) {
  if (w.vertices.size() != w.edges.size() + 1) return false;
  std::vector<Color> seen;
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    auto e = g.edgeBetween(w.vertices[i], w.vertices[i + 1]);
    if (!e || *e != w.edges[i]) return false;
    if (std::find(seen.begin(), seen.end(), c[*e]) != seen.end()) return false;
    seen.push_back(c[*e]);
  }
  return true;
}

}  // namespace rainbow
