#include <algorithm>
#include <bit>
#include <stdexcept>
#include <tuple>

#include "rainbow/errors.hpp"
#include "rainbow/exact.hpp"
#include "rainbow/verify.hpp"

namespace rainbow {

namespace {

class Search {
 public:
  Search(const Instance& inst, std::vector<VertexPair> reqs, const PartialColoring& c0, const GuideFunction& f,
         const FindColoringOptions& opts)
      : g_(inst.graph), k_(inst.k), opts_(opts), reqs_(std::move(reqs)), finder_(inst.graph, inst.k) {
    colors_ = c0.values();
    const int s = static_cast<int>(reqs_.size());
    guide_.resize(s);
    for (int r = 0; r < s; ++r) {
      auto it = f.find(reqs_[r]);
      if (it == f.end()) continue;
      for (EdgeId e : it->second) {
        if (e < 0 || e >= g_.m() || !c0.isSet(e)) throw UsageError("guide edge outside the precolored domain");
        guide_[r].push_back(e);
      }
    }
    active_.assign(s, 1);
    activeCount_ = s;
    depthCap_ = (k_ + 1) * s + 1;
    walks_.resize(s);
    version_.assign(s, 0);
    byEdge_.resize(g_.m());
    if (opts_.pick == PickRule::FewestWalks) countWalks();
  }

  std::optional<Coloring> run(FindColoringStats* stats) {
    for (int r = 0; r < static_cast<int>(reqs_.size()); ++r)
      if (conflicted(r)) return finish(stats, false);
    if (opts_.forwardCheck)
      for (int r = 0; r < static_cast<int>(reqs_.size()); ++r) dirty_.push_back(r);
    bool ok = false;
    try {
      ok = recurse(0, {});
    } catch (const ResourceError&) {
      finish(stats, false);
      throw;
    }
    return finish(stats, ok);
  }

 private:
  std::optional<Coloring> finish(FindColoringStats* stats, bool ok) {
    if (stats) {
      stats->nodes = nodes_;
      stats->maxDepth = maxDepth_;
    }
    if (!ok) return std::nullopt;
    return result_;
  }

  // Two guide edges of r sharing a color.
  bool conflicted(int r) const {
    const auto& gd = guide_[r];
    for (std::size_t i = 0; i < gd.size(); ++i)
      for (std::size_t j = i + 1; j < gd.size(); ++j)
        if (colors_[gd[i]] == colors_[gd[j]]) return true;
    return false;
  }

  bool guided(int r, const Walk& w) const {
    std::uint32_t used = 0;
    for (EdgeId e : w.edges) {
      Color c = colors_[e];
      if (!c) continue;
      if ((used >> (c - 1)) & 1U) return false;
      used |= 1U << (c - 1);
    }
    for (EdgeId e : guide_[r])
      if (std::find(w.edges.begin(), w.edges.end(), e) == w.edges.end()) return false;
    return true;
  }

  std::optional<Walk> fresh(int r) { return finder_.find(colors_, reqs_[r], guide_[r]); }

  // Revalidates or recomputes r's cached walk; false when r has none.
  bool refresh(int r) {
    if (walks_[r] && guided(r, *walks_[r])) return true;
    walks_[r] = fresh(r);
    ++version_[r];
    if (!walks_[r]) return false;
    for (EdgeId e : walks_[r]->edges) byEdge_[e].push_back({r, version_[r]});
    return true;
  }

  // Open requests whose cached walk may have been broken by coloring `edges` or by growing `touched`'s guide.
  bool forwardCheck(const std::vector<EdgeId>& edges, int touched) {
    if (touched >= 0 && active_[touched] && !refresh(touched)) return false;
    for (EdgeId e : edges) {
      auto& list = byEdge_[e];
      for (std::size_t i = 0; i < list.size();) {
        auto [r, ver] = list[i];
        if (ver != version_[r]) {
          list[i] = list.back();
          list.pop_back();
          continue;
        }
        ++i;
        if (!active_[r]) continue;
        if (!refresh(r)) return false;
      }
    }
    while (!dirty_.empty()) {
      int r = dirty_.back();
      if (active_[r] && !refresh(r)) return false;
      dirty_.pop_back();
    }
    return true;
  }

  // Walks of length at most k between each request's ends, saturating.
  void countWalks() {
    const std::uint64_t cap = std::uint64_t{1} << 40;
    std::vector<std::uint64_t> cur(g_.n()), next(g_.n());
    std::vector<Vertex> ball, nextBall;
    std::vector<char> inBall(g_.n());
    walkCount_.assign(reqs_.size(), 0);
    for (std::size_t r = 0; r < reqs_.size(); ++r) {
      auto [u, v] = reqs_[r];
      ball.assign(1, u);
      cur[u] = 1;
      std::uint64_t total = 0;
      for (int len = 1; len <= k_; ++len) {
        nextBall.clear();
        for (Vertex x : ball)
          for (auto [y, e] : g_.neighbors(x)) {
            if (!inBall[y]) {
              inBall[y] = 1;
              nextBall.push_back(y);
            }
            next[y] = std::min(cap, next[y] + cur[x]);
          }
        for (Vertex x : ball) cur[x] = 0;
        for (Vertex y : nextBall) {
          inBall[y] = 0;
          cur[y] = next[y];
          next[y] = 0;
        }
        total = std::min(cap, total + cur[v]);
        std::swap(ball, nextBall);
      }
      for (Vertex x : ball) cur[x] = 0;
      walkCount_[r] = total;
    }
  }

  int uncoloredOn(const Walk& w) const {
    int n = 0;
    for (EdgeId e : w.edges) n += colors_[e] == 0;
    return n;
  }

  // Colorings of w's uncolored edges that keep w rainbow.
  std::uint64_t completions(const Walk& w) const {
    std::uint32_t used = 0;
    int open = 0;
    for (EdgeId e : w.edges) {
      if (colors_[e])
        used |= 1U << (colors_[e] - 1);
      else
        ++open;
    }
    std::uint64_t ways = 1;
    for (int free = k_ - std::popcount(used), i = 0; i < open; ++i) ways *= static_cast<std::uint64_t>(std::max(free - i, 0));
    return ways;
  }

  int pick() const {
    int best = -1;
    std::tuple<std::uint64_t, int, int> bestScore{};
    for (int r = 0; r < static_cast<int>(reqs_.size()); ++r) {
      if (!active_[r]) continue;
      if (opts_.pick == PickRule::Lexicographic) return r;
      const Walk& w = *walks_[r];
      int open = uncoloredOn(w);
      if (open == 0) return r;
      std::tuple<std::uint64_t, int, int> score{0, open, 0};
      if (opts_.pick == PickRule::FewestWalks) {
        const std::uint64_t cap = std::uint64_t{1} << 40;
        std::uint64_t ways = completions(w);
        score = {walkCount_[r] > cap / std::max<std::uint64_t>(ways, 1) ? cap : walkCount_[r] * ways,
                 -static_cast<int>(w.edges.size()), 0};
      }
      if (best < 0 || score < bestScore) {
        best = r;
        bestScore = score;
      }
    }
    return best;
  }

  bool recurse(int depth, const std::vector<EdgeId>& justColored, int touched = -1) {
    ++nodes_;
    if (opts_.nodeLimit > 0 && nodes_ > opts_.nodeLimit) throw ResourceError("branching search exceeded its node budget");
    if (depth > depthCap_) throw std::logic_error("branching search exceeded its depth bound");
    maxDepth_ = std::max(maxDepth_, depth);
    if (activeCount_ == 0) {
      result_ = colors_;
      for (Color& c : result_)
        if (!c) c = 1;
      return true;
    }
    if (touched >= 0 && conflicted(touched)) return false;
    if (opts_.forwardCheck) {
      if (!forwardCheck(justColored, touched)) {
        for (int r = 0; r < static_cast<int>(reqs_.size()); ++r)
          if (active_[r] && !walks_[r]) dirty_.push_back(r);
        return false;
      }
    } else if (opts_.pick != PickRule::Lexicographic) {
      for (int r = 0; r < static_cast<int>(reqs_.size()); ++r)
        if (active_[r] && !refresh(r)) return false;
    }

    const int r0 = pick();
    std::optional<Walk> walk = opts_.forwardCheck || opts_.pick != PickRule::Lexicographic ? walks_[r0] : fresh(r0);
    if (!walk) return false;

    // color the walk's uncolored edges with the smallest absent colors, in walk order
    std::uint32_t used = 0;
    for (EdgeId e : walk->edges)
      if (colors_[e]) used |= 1U << (colors_[e] - 1);
    std::vector<EdgeId> open;
    std::vector<Color> committed;
    for (EdgeId e : walk->edges) {
      if (colors_[e]) continue;
      Color c = static_cast<Color>(std::countr_one(used)) + 1;
      used |= 1U << (c - 1);
      colors_[e] = c;
      open.push_back(e);
      committed.push_back(c);
    }
    active_[r0] = 0;
    --activeCount_;
    if (recurse(depth + 1, open)) return true;
    active_[r0] = 1;
    ++activeCount_;
    for (EdgeId e : open) colors_[e] = 0;

    std::vector<EdgeId> one(1);
    for (std::size_t i = 0; i < open.size(); ++i) {
      const EdgeId e = open[i];
      one[0] = e;
      for (Color a = 1; a <= k_; ++a) {
        if (opts_.skipCommittedColor && a == committed[i]) continue;
        colors_[e] = a;
        for (int r = 0; r < static_cast<int>(reqs_.size()); ++r) {
          if (!active_[r] || r == r0) continue;
          guide_[r].push_back(e);
          bool found = recurse(depth + 1, one, r);
          guide_[r].pop_back();
          if (found) return true;
        }
      }
      colors_[e] = 0;
    }
    return false;
  }

  const Graph& g_;
  int k_;
  FindColoringOptions opts_;
  std::vector<VertexPair> reqs_;
  GuidedWalkFinder finder_;
  std::vector<Color> colors_;
  std::vector<std::vector<EdgeId>> guide_;
  std::vector<char> active_;
  int activeCount_ = 0;
  int depthCap_ = 0;
  std::vector<std::optional<Walk>> walks_;
  std::vector<unsigned> version_;
  std::vector<std::vector<std::pair<int, unsigned>>> byEdge_;
  std::vector<int> dirty_;
  std::vector<std::uint64_t> walkCount_;
  long long nodes_ = 0;
  int maxDepth_ = 0;
  Coloring result_;
};

}  // namespace

std::optional<Coloring> findColoring(const Instance& inst, const std::vector<VertexPair>& S0, const PartialColoring& c0,
                                     const GuideFunction& f, const FindColoringOptions& opts, FindColoringStats* stats) {
  if (c0.m() != inst.graph.m()) throw UsageError("precoloring size differs from edge count");
  Search search(inst, normalizePairs(S0), c0, f, opts);
  return search.run(stats);
}

}  // namespace rainbow
