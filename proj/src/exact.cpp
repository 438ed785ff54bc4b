#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rainbow/errors.hpp"
#include "rainbow/exact.hpp"
#include "rainbow/verify.hpp"

namespace rainbow {

namespace {

class BruteForce {
 public:
  BruteForce(const Instance& inst, const SolverOptions& opts) : g_(inst.graph), k_(inst.k) {
    if (k_ > 64) throw UsageError("brute force supports k <= 64");
    colors_ = inst.precoloring.values();
    std::vector<int> pos(g_.m(), -1);
    for (EdgeId e = 0; e < g_.m(); ++e)
      if (colors_[e] == 0) {
        pos[e] = static_cast<int>(free_.size());
        free_.push_back(e);
      }
    if (static_cast<double>(free_.size()) * std::log2(static_cast<double>(k_)) > opts.bruteForceBits)
      throw ResourceError("brute force over " + std::to_string(free_.size()) + " free edges exceeds the budget");
    checksAt_.resize(free_.size() + 1);
    for (auto p : inst.effectiveRequests()) {
      auto paths = simplePaths(g_, p, k_);
      if (paths.empty()) {
        impossible_ = true;
        return;
      }
      int done = 0;
      for (const auto& path : paths)
        for (EdgeId e : path) done = std::max(done, pos[e] + 1);
      checksAt_[done].push_back(static_cast<int>(paths_.size()));
      paths_.push_back(std::move(paths));
      last_ = std::max(last_, done);
    }
  }

  int freeCount() const { return static_cast<int>(free_.size()); }

  // Tallies leaves by the number of unconstrained free edges left below them.
  void count(int firstColor, int step, std::vector<std::uint64_t>& tally) {
    if (impossible_ || !checks(0)) return;
    if (free_.empty() || last_ == 0) {
      if (firstColor == 1) tally[free_.size()] += 1;
      return;
    }
    for (Color c = firstColor; c <= k_; c += step) {
      colors_[free_[0]] = c;
      if (checks(1)) countFrom(1, tally);
    }
  }

  std::optional<Coloring> solve(int firstColor, int step) {
    if (impossible_ || !checks(0)) return std::nullopt;
    if (free_.empty() || last_ == 0) {
      if (firstColor != 1) return std::nullopt;
      return finish(0);
    }
    for (Color c = firstColor; c <= k_; c += step) {
      colors_[free_[0]] = c;
      if (checks(1))
        if (auto r = solveFrom(1)) return r;
    }
    return std::nullopt;
  }

 private:
  bool rainbow(const std::vector<EdgeId>& path) const {
    std::uint64_t seen = 0;
    for (EdgeId e : path) {
      std::uint64_t bit = std::uint64_t{1} << (colors_[e] - 1);
      if (seen & bit) return false;
      seen |= bit;
    }
    return true;
  }

  bool checks(int depth) const {
    for (int r : checksAt_[depth]) {
      bool ok = false;
      for (const auto& path : paths_[r])
        if (rainbow(path)) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  }

  void countFrom(int depth, std::vector<std::uint64_t>& tally) {
    if (depth >= last_) {
      tally[free_.size() - depth] += 1;
      return;
    }
    for (Color c = 1; c <= k_; ++c) {
      colors_[free_[depth]] = c;
      if (checks(depth + 1)) countFrom(depth + 1, tally);
    }
  }

  std::optional<Coloring> solveFrom(int depth) {
    if (depth >= last_) return finish(depth);
    for (Color c = 1; c <= k_; ++c) {
      colors_[free_[depth]] = c;
      if (checks(depth + 1))
        if (auto r = solveFrom(depth + 1)) return r;
    }
    return std::nullopt;
  }

  Coloring finish(int depth) {
    Coloring out = colors_;
    for (std::size_t i = depth; i < free_.size(); ++i) out[free_[i]] = 1;
    return out;
  }

  const Graph& g_;
  int k_;
  Coloring colors_;
  std::vector<EdgeId> free_;
  std::vector<std::vector<std::vector<EdgeId>>> paths_;
  std::vector<std::vector<int>> checksAt_;
  int last_ = 0;
  bool impossible_ = false;
};

int workerCount(const SolverOptions& opts, int k) { return std::max(1, std::min(opts.workers, k)); }

}  // namespace

std::vector<std::vector<EdgeId>> simplePaths(const Graph& g, VertexPair p, int k, std::size_t cap) {
  std::vector<std::vector<EdgeId>> out;
  auto toV = boundedDistances(g, p.v, k);
  std::vector<char> onPath(g.n(), 0);
  std::vector<EdgeId> cur;
  auto dfs = [&](auto&& self, Vertex x) -> void {
    if (out.size() > cap) return;
    if (x == p.v) {
      out.push_back(cur);
      return;
    }
    onPath[x] = 1;
    for (auto [y, e] : g.neighbors(x)) {
      if (onPath[y] || static_cast<int>(cur.size()) + 1 + toV[y] > k) continue;
      cur.push_back(e);
      self(self, y);
      cur.pop_back();
    }
    onPath[x] = 0;
  };
  dfs(dfs, p.u);
  return out;
}

std::optional<Coloring> bruteForceSolve(const Instance& inst, const SolverOptions& opts) {
  validateInstance(inst);
  const int w = workerCount(opts, inst.k);
  if (w == 1) return BruteForce(inst, opts).solve(1, 1);
  // worker t owns first-edge colors t+1, t+1+w, ...; the smallest color with a solution wins
  std::vector<std::optional<Coloring>> found(inst.k + 1);
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (Color c = t + 1; c <= inst.k; c += w) {
        BruteForce bf(inst, opts);
        found[c] = bf.solve(c, inst.k);
        if (found[c]) return;
      }
    });
  for (auto& th : pool) th.join();
  for (Color c = 1; c <= inst.k; ++c)
    if (found[c]) return found[c];
  return std::nullopt;
}

ColoringCount bruteForceCount(const Instance& inst, const SolverOptions& opts) {
  validateInstance(inst);
  BruteForce probe(inst, opts);
  const int w = workerCount(opts, inst.k);
  std::vector<std::vector<std::uint64_t>> tallies(w, std::vector<std::uint64_t>(probe.freeCount() + 1, 0));
  if (w == 1) {
    probe.count(1, 1, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t)
      pool.emplace_back([&, t] { BruteForce(inst, opts).count(t + 1, w, tallies[t]); });
    for (auto& th : pool) th.join();
  }
  ColoringCount total = 0;
  for (const auto& tally : tallies)
    for (std::size_t r = 0; r < tally.size(); ++r)
      if (tally[r]) total += ColoringCount(tally[r]) * boost::multiprecision::pow(ColoringCount(inst.k), static_cast<unsigned>(r));
  return total;
}

namespace {

using TwoPath = std::pair<EdgeId, EdgeId>;

// Two-edge paths between u and v.
std::vector<TwoPath> twoPaths(const Graph& g, VertexPair p) {
  std::vector<TwoPath> out;
  const Vertex a = g.degree(p.u) <= g.degree(p.v) ? p.u : p.v;
  const Vertex b = a == p.u ? p.v : p.u;
  for (auto [x, e1] : g.neighbors(a))
    if (auto e2 = g.edgeBetween(x, b)) out.emplace_back(e1, *e2);
  return out;
}

std::vector<VertexPair> nonEdgeRequests(const Graph& g, const std::vector<VertexPair>& S) {
  std::vector<VertexPair> out;
  for (auto p : normalizePairs(S))
    if (!g.adjacent(p.u, p.v)) out.push_back(p);
  return out;
}

}  // namespace

QuotientStructure quotientClasses(const Graph& g, const std::vector<VertexPair>& X) {
  QuotientStructure q{DisjointSets(g.m()), 0};
  for (auto p : normalizePairs(X))
    for (auto [a, b] : twoPaths(g, p)) q.sets.unite(a, b);
  q.classCount = q.sets.classes();
  return q;
}

ColoringCount countSatisfying2Extensions(const Graph& g, const std::vector<VertexPair>& S, const PartialColoring& c0,
                                         const SolverOptions& opts) {
  if (c0.m() != g.m()) throw UsageError("precoloring size differs from edge count");
  for (Color c : c0.values())
    if (c > 2) throw UsageError("precoloring uses a color above 2");
  auto reqs = nonEdgeRequests(g, S);
  const int s = static_cast<int>(reqs.size());
  if (s > opts.subsetCap)
    throw ResourceError("inclusion-exclusion over " + std::to_string(s) + " requests exceeds the budget");

  std::vector<std::vector<TwoPath>> paths(s);
  std::vector<int> local(g.m(), -1);
  std::vector<EdgeId> relevant;
  for (int i = 0; i < s; ++i) {
    paths[i] = twoPaths(g, reqs[i]);
    if (paths[i].empty()) return 0;
    for (auto& [a, b] : paths[i])
      for (EdgeId* e : {&a, &b}) {
        if (local[*e] < 0) {
          local[*e] = static_cast<int>(relevant.size());
          relevant.push_back(*e);
        }
        *e = local[*e];
      }
  }
  const int L = static_cast<int>(relevant.size());
  int outsideFree = 0;
  for (EdgeId e = 0; e < g.m(); ++e) outsideFree += local[e] < 0 && !c0.isSet(e);
  std::vector<Color> pre(L);
  for (int i = 0; i < L; ++i) pre[i] = c0[relevant[i]];

  // coef[x]: signed number of subsets whose quotient has x free classes
  std::vector<std::int64_t> coef(L + 1, 0);
  DisjointSets dsu(L);
  std::vector<Color> rootColor(L);
  std::uint64_t X = 0;
  const std::uint64_t total = std::uint64_t{1} << s;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (i) X ^= std::uint64_t{1} << std::countr_zero(i);
    dsu.reset(L);
    for (std::uint64_t bits = X; bits; bits &= bits - 1)
      for (auto [a, b] : paths[std::countr_zero(bits)]) dsu.unite(a, b);
    std::fill(rootColor.begin(), rootColor.end(), 0);
    bool clash = false;
    for (int e = 0; e < L && !clash; ++e) {
      if (!pre[e]) continue;
      Color& rc = rootColor[dsu.find(e)];
      if (rc && rc != pre[e]) clash = true;
      rc = pre[e];
    }
    if (clash) continue;
    int freeClasses = 0;
    for (int e = 0; e < L; ++e) freeClasses += dsu.find(e) == e && !rootColor[e];
    coef[freeClasses] += (std::popcount(X) & 1) ? -1 : 1;
  }
  ColoringCount sum = 0;
  for (int x = 0; x <= L; ++x)
    if (coef[x]) sum += ColoringCount(coef[x]) << (x + outsideFree);
  if (sum < 0) throw std::logic_error("negative inclusion-exclusion sum");
  return sum;
}

ColoringCount countSatisfying2Colorings(const Graph& g, const std::vector<VertexPair>& S, const SolverOptions& opts) {
  return countSatisfying2Extensions(g, S, PartialColoring(g.m(), 2), opts);
}

std::optional<Coloring> extract2Extension(const Graph& g, const std::vector<VertexPair>& S, const PartialColoring& c0,
                                          const SolverOptions& opts) {
  if (countSatisfying2Extensions(g, S, c0, opts) == 0) return std::nullopt;
  auto reqs = nonEdgeRequests(g, S);
  std::vector<char> relevant(g.m(), 0);
  for (auto p : reqs)
    for (auto [a, b] : twoPaths(g, p)) relevant[a] = relevant[b] = 1;
  PartialColoring c = c0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (c.isSet(e)) continue;
    c.set(e, 1);
    if (relevant[e] && countSatisfying2Extensions(g, reqs, c, opts) == 0) c.set(e, 2);
  }
  return c.completed();
}

std::optional<Coloring> extract2Coloring(const Graph& g, const std::vector<VertexPair>& S, const SolverOptions& opts) {
  return extract2Extension(g, S, PartialColoring(g.m(), 2), opts);
}

bool hasInfeasibleRequest(const Graph& g, const std::vector<VertexPair>& S, int k) {
  auto sorted = normalizePairs(S);
  std::vector<int> dist;
  Vertex source = -1;
  for (auto p : sorted) {
    if (p.u != source) {
      source = p.u;
      dist = boundedDistances(g, source, k);
    }
    if (dist[p.v] > k) return true;
  }
  return false;
}

std::optional<Coloring> solveSubsetRainbow(const Instance& inst, const SolverOptions& opts, FindColoringStats* stats) {
  validateInstance(inst);
  auto reqs = inst.effectiveRequests();
  if (hasInfeasibleRequest(inst.graph, reqs, inst.k)) return std::nullopt;
  std::optional<Coloring> c;
  if (inst.k == 2 && !inst.hasPrecoloring() && static_cast<int>(reqs.size()) <= opts.subsetCap) {
    c = extract2Coloring(inst.graph, reqs, opts);
  } else if (opts.backend == ExactBackend::Propagation) {
    PropagationStats ps;
    c = solveByPropagation(inst, opts.propagation, &ps);
    if (stats) stats->nodes = ps.nodes;
  } else {
    c = findColoring(inst, reqs, inst.precoloring, {}, opts.findColoring, stats);
  }
  if (c) {
    if (!inst.precoloring.extendedBy(*c) || verifyRequests(inst.graph, *c, reqs, inst.k).size() != reqs.size())
      throw std::logic_error("solver produced a coloring that fails verification");
  }
  return c;
}

}  // namespace rainbow
