#include <bit>
#include <limits>
#include <stdexcept>

#include "rainbow/errors.hpp"
#include "rainbow/exact.hpp"
#include "rainbow/verify.hpp"

namespace rainbow {

namespace {

using Mask = std::uint32_t;

class Propagator {
 public:
  Propagator(const Instance& inst, const PropagationOptions& opts)
      : g_(inst.graph), k_(inst.k), opts_(opts), finder_(inst.graph, inst.k) {
    const Mask full = k_ >= 32 ? ~Mask{0} : (Mask{1} << k_) - 1;
    dom_.assign(g_.m(), full);
    for (EdgeId e = 0; e < g_.m(); ++e)
      if (Color c = inst.precoloring.m() ? inst.precoloring[e] : 0) {
        dom_[e] = Mask{1} << (c - 1);
        fixedColors_ |= dom_[e];
      }
    watch_.resize(g_.m());
    queued_.assign(g_.m(), 0);
    for (VertexPair p : inst.effectiveRequests()) {
      auto paths = simplePaths(g_, p, k_, opts_.pathCap);
      if (paths.size() > opts_.pathCap) {
        lazy_.push_back(p);
        continue;
      }
      const int r = static_cast<int>(reqPaths_.size());
      reqPaths_.emplace_back();
      for (auto& path : paths) {
        const int id = static_cast<int>(paths_.size());
        for (EdgeId e : path) watch_[e].push_back(id);
        paths_.push_back(std::move(path));
        pathReq_.push_back(r);
        reqPaths_[r].push_back(id);
      }
      aliveCount_.push_back(static_cast<int>(paths.size()));
    }
    alive_.assign(paths_.size(), 1);
    revisitFlag_.assign(reqPaths_.size(), 0);
  }

  std::optional<Coloring> run(PropagationStats* stats) {
    bool ok = false;
    try {
      ok = start() && search(fixedColors_);
    } catch (const ResourceError&) {
      report(stats);
      throw;
    }
    report(stats);
    if (!ok) return std::nullopt;
    return result_;
  }

 private:
  void report(PropagationStats* stats) const {
    if (!stats) return;
    stats->nodes = nodes_;
    stats->paths = static_cast<long long>(paths_.size());
    stats->lazyRequests = static_cast<int>(lazy_.size());
  }

  bool start() {
    for (std::size_t r = 0; r < reqPaths_.size(); ++r)
      if (aliveCount_[r] == 0) return false;
    for (std::size_t p = 0; p < paths_.size(); ++p)
      if (!viable(paths_[p])) kill(static_cast<int>(p));
    for (std::size_t r = 0; r < reqPaths_.size(); ++r) {
      if (aliveCount_[r] == 0) return false;
      if (aliveCount_[r] == 1) revisit(static_cast<int>(r));
    }
    return propagate();
  }

  // The path's edges can take pairwise distinct colors from their domains.
  bool viable(const std::vector<EdgeId>& path) {
    const int len = static_cast<int>(path.size());
    Mask all = 0;
    for (EdgeId e : path) all |= dom_[e];
    if (std::popcount(all) < len) return false;
    return matchingSize(path, -1, 0) == len;
  }

  // Kuhn matching of path edges to colors; edge `fixed` (if >= 0) is restricted to mask `only`.
  int matchingSize(const std::vector<EdgeId>& path, int fixed, Mask only) {
    owner_.assign(k_, -1);
    int size = 0;
    for (int i = 0; i < static_cast<int>(path.size()); ++i) {
      Mask seen = 0;
      if (!augment(path, fixed, only, i, seen)) return size;
      ++size;
    }
    return size;
  }

  bool augment(const std::vector<EdgeId>& path, int fixed, Mask only, int i, Mask& seen) {
    Mask d = i == fixed ? only : dom_[path[i]];
    for (Mask rest = d & ~seen; rest; rest &= rest - 1) {
      int c = std::countr_zero(rest);
      seen |= Mask{1} << c;
      if (owner_[c] < 0 || augment(path, fixed, only, owner_[c], seen)) {
        owner_[c] = i;
        return true;
      }
    }
    return false;
  }

  bool restrict(EdgeId e, Mask m) {
    if (m == dom_[e]) return true;
    if (m == 0) return false;
    domTrail_.push_back({e, dom_[e]});
    dom_[e] = m;
    if (!queued_[e]) {
      queued_[e] = 1;
      queue_.push_back(e);
    }
    return true;
  }

  void kill(int p) {
    alive_[p] = 0;
    killTrail_.push_back(p);
    --aliveCount_[pathReq_[p]];
  }

  void revisit(int r) {
    if (revisitFlag_[r]) return;
    revisitFlag_[r] = 1;
    revisits_.push_back(r);
  }

  // Prunes every color that no rainbow coloring of the request's last path supports.
  bool forceSolePath(int r) {
    int sole = -1;
    for (int p : reqPaths_[r])
      if (alive_[p]) sole = p;
    const auto& path = paths_[sole];
    const int len = static_cast<int>(path.size());
    for (int i = 0; i < len; ++i) {
      Mask keep = 0;
      for (Mask rest = dom_[path[i]]; rest; rest &= rest - 1) {
        Mask bit = rest & (~rest + 1);
        if (matchingSize(path, i, bit) == len) keep |= bit;
      }
      if (!restrict(path[i], keep)) return false;
    }
    return true;
  }

  bool propagate() {
    bool ok = true;
    while (ok && (!queue_.empty() || !revisits_.empty())) {
      if (!queue_.empty()) {
        EdgeId e = queue_.back();
        queue_.pop_back();
        queued_[e] = 0;
        for (int p : watch_[e]) {
          if (!alive_[p]) continue;
          const int r = pathReq_[p];
          if (!viable(paths_[p])) {
            kill(p);
            if (aliveCount_[r] == 0) {
              ok = false;
              break;
            }
          }
          if (aliveCount_[r] == 1) revisit(r);
        }
        continue;
      }
      int r = revisits_.back();
      revisits_.pop_back();
      revisitFlag_[r] = 0;
      ok = forceSolePath(r);
    }
    for (EdgeId e : queue_) queued_[e] = 0;
    queue_.clear();
    for (int r : revisits_) revisitFlag_[r] = 0;
    revisits_.clear();
    return ok;
  }

  void undo(std::size_t domMark, std::size_t killMark) {
    while (domTrail_.size() > domMark) {
      dom_[domTrail_.back().first] = domTrail_.back().second;
      domTrail_.pop_back();
    }
    while (killTrail_.size() > killMark) {
      int p = killTrail_.back();
      killTrail_.pop_back();
      alive_[p] = 1;
      ++aliveCount_[pathReq_[p]];
    }
  }

  bool singleton(EdgeId e) const { return std::has_single_bit(dom_[e]); }

  bool satisfied(int r) const {
    for (int p : reqPaths_[r]) {
      if (!alive_[p]) continue;
      bool all = true;
      for (EdgeId e : paths_[p]) all = all && singleton(e);
      if (all) return true;
    }
    return false;
  }

  // Decided colors, with 0 for open edges.
  std::vector<Color> decided() const {
    std::vector<Color> c(g_.m(), 0);
    for (EdgeId e = 0; e < g_.m(); ++e)
      if (singleton(e)) c[e] = static_cast<Color>(std::countr_zero(dom_[e]) + 1);
    return c;
  }

  bool lazyPossible() {
    if (lazy_.empty()) return true;
    auto c = decided();
    for (VertexPair p : lazy_)
      if (!finder_.find(c, p, {})) return false;
    return true;
  }

  // The open edge to branch on, or -1 when every path request is satisfied.
  EdgeId choose() const {
    // A request down to one path is already pruned to its supports, so those go last.
    auto rank = [&](int r) { return aliveCount_[r] == 1 ? std::numeric_limits<int>::max() : aliveCount_[r]; };
    int best = -1;
    for (int r = 0; r < static_cast<int>(reqPaths_.size()); ++r)
      if (!satisfied(r) && (best < 0 || rank(r) < rank(best))) best = r;
    if (best < 0) return -1;
    EdgeId pick = -1;
    for (int p : reqPaths_[best]) {
      if (!alive_[p]) continue;
      for (EdgeId e : paths_[p])
        if (!singleton(e) && (pick < 0 || std::popcount(dom_[e]) < std::popcount(dom_[pick]))) pick = e;
    }
    return pick;
  }

  bool leaf() {
    Coloring c(g_.m());
    for (EdgeId e = 0; e < g_.m(); ++e) c[e] = static_cast<Color>(std::countr_zero(dom_[e]) + 1);
    if (verifyRequests(g_, c, lazy_, k_).size() != lazy_.size()) return false;
    result_ = std::move(c);
    return true;
  }

  // Colors outside `used` have appeared in no precoloring and no decision on this branch,
  // so the state is symmetric in them and one representative suffices.
  bool search(Mask used) {
    ++nodes_;
    if (opts_.nodeLimit > 0 && nodes_ > opts_.nodeLimit) throw ResourceError("propagation search exceeded its node budget");
    if (!lazyPossible()) return false;
    EdgeId e = choose();
    if (e < 0) {
      if (leaf()) return true;
      for (EdgeId x = 0; x < g_.m() && e < 0; ++x)
        if (!singleton(x)) e = x;
      if (e < 0) return false;
    }
    bool freshTried = false;
    for (Mask rest = dom_[e]; rest; rest &= rest - 1) {
      Mask bit = rest & (~rest + 1);
      if (!(used & bit)) {
        if (freshTried) continue;
        freshTried = true;
      }
      const std::size_t domMark = domTrail_.size(), killMark = killTrail_.size();
      if (restrict(e, bit) && propagate() && search(used | bit)) return true;
      undo(domMark, killMark);
    }
    return false;
  }

  const Graph& g_;
  int k_;
  PropagationOptions opts_;
  GuidedWalkFinder finder_;
  std::vector<Mask> dom_;
  Mask fixedColors_ = 0;
  std::vector<std::vector<EdgeId>> paths_;
  std::vector<int> pathReq_;
  std::vector<char> alive_;
  std::vector<std::vector<int>> reqPaths_;
  std::vector<int> aliveCount_;
  std::vector<std::vector<int>> watch_;
  std::vector<VertexPair> lazy_;
  std::vector<EdgeId> queue_;
  std::vector<char> queued_;
  std::vector<int> revisits_;
  std::vector<char> revisitFlag_;
  std::vector<std::pair<EdgeId, Mask>> domTrail_;
  std::vector<int> killTrail_;
  std::vector<int> owner_;
  long long nodes_ = 0;
  Coloring result_;
};

}  // namespace

std::optional<Coloring> solveByPropagation(const Instance& inst, const PropagationOptions& opts,
                                           PropagationStats* stats) {
  validateInstance(inst);
  if (inst.k > kMaxWalkColors) throw UsageError("propagation search supports k <= " + std::to_string(kMaxWalkColors));
  auto reqs = inst.effectiveRequests();
  if (hasInfeasibleRequest(inst.graph, reqs, inst.k)) return std::nullopt;
  Propagator search(inst, opts);
  auto c = search.run(stats);
  if (c && ((inst.hasPrecoloring() && !inst.precoloring.extendedBy(*c)) ||
            verifyRequests(inst.graph, *c, reqs, inst.k).size() != reqs.size()))
    throw std::logic_error("propagation search produced a coloring that fails verification");
  return c;
}

}  // namespace rainbow
