#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "rainbow/errors.hpp"
#include "rainbow/max_rainbow.hpp"

namespace rainbow {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::int64_t factorial(int k) { return k <= 1 ? 1 : k * factorial(k - 1); }

void checkApproxK(int k) {
  if (k < 1 || k > kMaxApproxColors) throw UsageError("k must be in 1.." + std::to_string(kMaxApproxColors));
}

}  // namespace

bool withinApproxGuarantee(long long q, long long count, int k) {
  checkApproxK(k);
  return static_cast<__int128>(q) * ipow(k, k) <= static_cast<__int128>(count) * factorial(k);
}

long long approxGuarantee(long long count, int k) {
  checkApproxK(k);
  const std::int64_t den = ipow(k, k);
  return static_cast<long long>((static_cast<__int128>(count) * factorial(k) + den - 1) / den);
}

PathPlan choosePaths(const Graph& g, const std::vector<VertexPair>& S, int k) {
  PathPlan plan;
  for (auto p : normalizePairs(S)) {
    auto toV = boundedDistances(g, p.v, k);
    if (toV[p.u] > k) throw UsageError("pair is not feasible for k=" + std::to_string(k));
    Walk w;
    w.vertices.push_back(p.u);
    for (Vertex x = p.u; x != p.v;) {
      Vertex best = -1;
      EdgeId via = -1;
      for (auto [y, e] : g.neighbors(x))
        if (toV[y] == toV[x] - 1 && (best < 0 || y < best)) {
          best = y;
          via = e;
        }
      w.vertices.push_back(best);
      w.edges.push_back(via);
      x = best;
    }
    plan.pairs.push_back(p);
    plan.paths.push_back(std::move(w));
  }
  return plan;
}

int countRainbowPaths(const Graph& g, const Coloring& c, const PathPlan& plan) {
  int n = 0;
  for (const auto& w : plan.paths) n += isRainbowWalk(g, c, w);
  return n;
}

Coloring derandomizedApprox(const Graph& g, const std::vector<VertexPair>& S, int k, ExpectationTrace* trace) {
  checkApproxK(k);
  PathPlan plan = choosePaths(g, S, k);
  const int P = static_cast<int>(plan.paths.size());
  std::vector<std::vector<int>> onEdge(g.m());
  for (int i = 0; i < P; ++i)
    for (EdgeId e : plan.paths[i].edges) onEdge[e].push_back(i);

  std::vector<std::uint32_t> used(P, 0);
  std::vector<int> fixedCount(P, 0);
  std::vector<char> dead(P, 0);
  // k^k times the probability that path i ends up rainbow
  auto term = [&](int i, int fixed, bool broken) -> std::int64_t {
    if (broken) return 0;
    const int free = plan.paths[i].length() - fixed;
    std::int64_t t = ipow(k, k - free);
    for (int j = 0; j < free; ++j) t *= k - fixed - j;
    return t;
  };
  std::int64_t total = 0;
  for (int i = 0; i < P; ++i) total += term(i, 0, false);
  if (trace) trace->assign(1, total);

  Coloring c(g.m(), 1);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!onEdge[e].empty()) {
      std::int64_t before = 0;
      for (int i : onEdge[e]) before += term(i, fixedCount[i], dead[i]);
      std::int64_t bestGain = 0;
      Color best = 0;
      for (Color col = 1; col <= k; ++col) {
        std::int64_t after = 0;
        const std::uint32_t bit = 1U << (col - 1);
        for (int i : onEdge[e]) after += term(i, fixedCount[i] + 1, dead[i] || (used[i] & bit));
        if (best == 0 || after - before > bestGain) {
          best = col;
          bestGain = after - before;
        }
      }
      c[e] = best;
      const std::uint32_t bit = 1U << (best - 1);
      for (int i : onEdge[e]) {
        if (used[i] & bit) dead[i] = 1;
        used[i] |= bit;
        ++fixedCount[i];
      }
      total += bestGain;
    }
    if (trace) trace->push_back(total);
  }
  return c;
}

KernelResult kernelize(const Graph& g, int k, int q) {
  checkApproxK(k);
  if (q < 1) throw UsageError("kernelize needs q >= 1");
  KernelResult out;
  std::vector<char> alive(g.n(), 1);
  auto induced = [&](const std::vector<char>& keep) {
    // subgraph induced by `keep`; removing whole components leaves the others untouched
    std::vector<Vertex> ids;
    std::vector<int> local(g.n(), -1);
    for (Vertex v = 0; v < g.n(); ++v)
      if (keep[v]) {
        local[v] = static_cast<int>(ids.size());
        ids.push_back(v);
      }
    Graph h(static_cast<int>(ids.size()));
    for (const auto& e : g.edges())
      if (keep[e.u] && keep[e.v]) h.addEdge(local[e.u], local[e.v]);
    return std::make_tuple(std::move(h), std::move(ids));
  };

  while (true) {
    auto [h, ids] = induced(alive);
    auto pairs = feasiblePairs(h, k);
    if (q <= 0 || withinApproxGuarantee(q, static_cast<long long>(pairs.size()), k)) {
      out.verdict = KernelVerdict::YesImmediate;
      out.graph = std::move(h);
      out.q = std::max(q, 0);
      out.original = std::move(ids);
      return out;
    }
    std::vector<char> inV1(h.n(), 0);
    for (auto p : pairs) inV1[p.u] = inV1[p.v] = 1;
    DisjointSets comp(h.n());
    for (const auto& e : h.edges()) comp.unite(e.u, e.v);
    std::vector<int> h2(h.n(), 0), inside(h.n(), 0);
    for (Vertex v = 0; v < h.n(); ++v) h2[comp.find(v)] += !inV1[v];
    for (auto p : pairs) ++inside[comp.find(p.u)];
    // components in order of their smallest vertex
    Vertex removeRoot = -1;
    std::vector<char> seen(h.n(), 0);
    for (Vertex v = 0; v < h.n() && removeRoot < 0; ++v) {
      Vertex r = comp.find(v);
      if (seen[r]) continue;
      seen[r] = 1;
      if (h2[r] >= inside[r]) removeRoot = r;
    }
    if (removeRoot < 0) {
      out.verdict = KernelVerdict::Reduced;
      out.graph = std::move(h);
      out.q = q;
      out.original = std::move(ids);
      const long long bound = 3LL * q * ipow(k, k);
      if (static_cast<long long>(out.graph.n()) * factorial(k) > bound)
        throw std::logic_error("kernel exceeds its vertex bound");
      return out;
    }
    for (Vertex v = 0; v < h.n(); ++v)
      if (comp.find(v) == removeRoot) alive[ids[v]] = 0;
    q -= std::min(q, inside[removeRoot]);
    ++out.removedComponents;
  }
}

namespace {

class SubsetSearch {
 public:
  SubsetSearch(const Graph& g, int k, int q, std::vector<VertexPair> pool, const MaxRainbowOptions& opts)
      : g_(g), k_(k), q_(q), pool_(std::move(pool)), opts_(opts) {}

  std::optional<Coloring> run() {
    const int workers = std::max(1, opts_.solver.workers);
    const int firstChoices = static_cast<int>(pool_.size()) - q_ + 1;
    std::vector<std::optional<Coloring>> found(std::max(firstChoices, 0));
    std::exception_ptr error;
    std::mutex mu;
    auto work = [&](int t) {
      try {
        std::vector<VertexPair> chosen;
        for (int i = t; i < firstChoices && !done_; i += workers) {
          chosen.assign(1, pool_[i]);
          if (auto c = extend(chosen, i + 1)) {
            found[i] = c;
            done_ = true;
          }
        }
      } catch (...) {
        std::lock_guard lock(mu);
        error = std::current_exception();
        done_ = true;
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    for (auto& c : found)
      if (c) return c;
    return std::nullopt;
  }

  long long solved() const { return solved_; }

 private:
  std::optional<Coloring> solve(const std::vector<VertexPair>& S) {
    if (++solved_ > opts_.subsetLimit) throw ResourceError("subset enumeration exceeded its budget");
    if (k_ == 2) return extract2Coloring(g_, S, opts_.solver);
    SolverOptions single = opts_.solver;
    single.workers = 1;
    return solveSubsetRainbow(Instance(g_, k_, S), single);
  }

  // Extends `chosen` with pairs from pool_[next..]; an unsatisfiable partial set prunes all of its supersets.
  std::optional<Coloring> extend(std::vector<VertexPair>& chosen, int next) {
    auto c = solve(chosen);
    if (!c) return std::nullopt;
    if (static_cast<int>(verifyRequests(g_, *c, pool_, k_).size()) >= q_) return c;
    const int need = q_ - static_cast<int>(chosen.size());
    for (int i = next; i + need <= static_cast<int>(pool_.size()) && !done_; ++i) {
      chosen.push_back(pool_[i]);
      auto r = extend(chosen, i + 1);
      chosen.pop_back();
      if (r) return r;
    }
    return std::nullopt;
  }

  const Graph& g_;
  int k_;
  int q_;
  std::vector<VertexPair> pool_;
  const MaxRainbowOptions& opts_;
  std::atomic<bool> done_{false};
  std::atomic<long long> solved_{0};
};

}  // namespace

MaxRainbowResult solveMaxRainbow(const Graph& g, int k, int q, const MaxRainbowOptions& opts) {
  checkApproxK(k);
  if (q < 0) throw UsageError("q must be nonnegative");
  MaxRainbowResult out;
  if (q == 0) {
    out.yes = true;
    out.coloring = Coloring(g.m(), 1);
    return out;
  }
  auto pool = feasiblePairs(g, k);
  if (static_cast<int>(pool.size()) < q) return out;
  Coloring approx = derandomizedApprox(g, pool, k);
  if (withinApproxGuarantee(q, static_cast<long long>(pool.size()), k) ||
      static_cast<int>(verifyRequests(g, approx, pool, k).size()) >= q) {
    out.yes = true;
    out.coloring = std::move(approx);
    return out;
  }
  SubsetSearch search(g, k, q, pool, opts);
  out.coloring = search.run();
  out.yes = out.coloring.has_value();
  out.subsetsSolved = search.solved();
  if (out.yes && static_cast<int>(verifyRequests(g, *out.coloring, pool, k).size()) < q)
    throw std::logic_error("max solver witness satisfies fewer than q pairs");
  return out;
}

}  // namespace rainbow
