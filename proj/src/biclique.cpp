#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "rainbow/biclique.hpp"
#include "rainbow/errors.hpp"

namespace rainbow {

namespace {

using Bits = std::vector<std::uint64_t>;

int wordsFor(int n) { return (n + 63) / 64; }

int popcount(const Bits& a, const Bits& b) {
  int c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

bool anyBit(const Bits& a) {
  return std::any_of(a.begin(), a.end(), [](std::uint64_t w) { return w != 0; });
}

// Rows of the bipartite complement: bit j of row i is set when V1[i] and V2[j] are non-adjacent.
std::vector<Bits> complementRows(const BipartiteGraph& gb) {
  const int n2 = static_cast<int>(gb.v2.size());
  const int W = wordsFor(n2);
  std::vector<Bits> rows(gb.v1.size(), Bits(W, ~std::uint64_t{0}));
  for (auto& r : rows) {
    if (n2 % 64) r[W - 1] = (std::uint64_t{1} << (n2 % 64)) - 1;
    if (n2 == 0) r.clear();
  }
  for (std::size_t i = 0; i < gb.v1.size(); ++i)
    for (int j : gb.adj[i]) rows[i][j >> 6] &= ~(std::uint64_t{1} << (j & 63));
  return rows;
}

Biclique makeBiclique(const BipartiteGraph& gb, const std::vector<int>& A, const Bits& B) {
  Biclique out;
  for (int a : A) out.left.push_back(gb.v1[a]);
  for (std::size_t w = 0; w < B.size(); ++w)
    for (std::uint64_t bits = B[w]; bits; bits &= bits - 1) out.right.push_back(gb.v2[w * 64 + std::countr_zero(bits)]);
  std::sort(out.left.begin(), out.left.end());
  std::sort(out.right.begin(), out.right.end());
  return out;
}

// Removes the pairs of A x B from the uncovered rows; returns how many were removed.
long long markCovered(std::vector<Bits>& unc, const std::vector<int>& A, const Bits& B) {
  long long removed = 0;
  for (int a : A) {
    removed += popcount(unc[a], B);
    for (std::size_t w = 0; w < B.size(); ++w) unc[a][w] &= ~B[w];
  }
  return removed;
}

}  // namespace

int BipartiteGraph::maxDegree() const {
  int d = 0;
  std::vector<int> right(v2.size(), 0);
  for (const auto& row : adj) {
    d = std::max(d, static_cast<int>(row.size()));
    for (int j : row) d = std::max(d, ++right[j]);
  }
  return d;
}

std::vector<std::pair<int, int>> BipartiteGraph::complementEdges() const {
  std::vector<std::pair<int, int>> out;
  auto rows = complementRows(*this);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t w = 0; w < rows[i].size(); ++w)
      for (std::uint64_t bits = rows[i][w]; bits; bits &= bits - 1)
        out.emplace_back(static_cast<int>(i), static_cast<int>(w * 64 + std::countr_zero(bits)));
  return out;
}

BipartiteGraph bipartiteBetween(const Graph& g, const std::vector<Vertex>& v1, const std::vector<Vertex>& v2) {
  BipartiteGraph gb{v1, v2, std::vector<std::vector<int>>(v1.size())};
  std::unordered_map<Vertex, int> pos;
  for (std::size_t j = 0; j < v2.size(); ++j) pos[v2[j]] = static_cast<int>(j);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    for (auto [y, e] : g.neighbors(v1[i])) {
      auto it = pos.find(y);
      if (it != pos.end()) gb.adj[i].push_back(it->second);
    }
    std::sort(gb.adj[i].begin(), gb.adj[i].end());
  }
  return gb;
}

BicliqueCover coverCompleteGraph(int n) {
  if (n < 1) throw UsageError("coverCompleteGraph needs n >= 1");
  BicliqueCover cover;
  for (int bit = 0; (1 << bit) < n; ++bit) {
    Biclique b;
    for (Vertex v = 0; v < n; ++v) ((v >> bit) & 1 ? b.right : b.left).push_back(v);
    cover.bicliques.push_back(std::move(b));
  }
  return cover;
}

Biclique closedBiclique(const BipartiteGraph& gb, const std::vector<Vertex>& A) {
  auto rows = complementRows(gb);
  std::unordered_map<Vertex, int> pos;
  for (std::size_t i = 0; i < gb.v1.size(); ++i) pos[gb.v1[i]] = static_cast<int>(i);
  const int n2 = static_cast<int>(gb.v2.size());
  Bits B(wordsFor(n2), ~std::uint64_t{0});
  if (n2 % 64) B.back() = (std::uint64_t{1} << (n2 % 64)) - 1;
  std::vector<int> idx;
  for (Vertex a : A) {
    auto it = pos.find(a);
    if (it == pos.end()) throw UsageError("closedBiclique: vertex outside V1");
    idx.push_back(it->second);
    for (std::size_t w = 0; w < B.size(); ++w) B[w] &= rows[it->second][w];
  }
  return makeBiclique(gb, idx, B);
}

BicliqueCover juknaCoverRandom(const BipartiteGraph& gb, std::uint64_t seed, JuknaStats* stats) {
  auto rows = complementRows(gb);
  long long target = 0;
  for (const auto& r : rows)
    for (auto w : r) target += std::popcount(w);
  BicliqueCover cover;
  if (target == 0) return cover;
  const int delta = gb.maxDegree();
  if (delta == 0) {
    cover.bicliques.push_back(Biclique{gb.v1, gb.v2});
    std::sort(cover.bicliques[0].left.begin(), cover.bicliques[0].left.end());
    std::sort(cover.bicliques[0].right.begin(), cover.bicliques[0].right.end());
    return cover;
  }
  const double n = static_cast<double>(gb.v1.size() + gb.v2.size());
  const auto budget = static_cast<long long>(std::ceil((delta + 1) * std::numbers::e * (2 * std::log(n) + 1)));
  const std::uint64_t threshold = ~std::uint64_t{0} / static_cast<std::uint64_t>(delta + 1);
  std::mt19937_64 rng(seed);
  const int n1 = static_cast<int>(gb.v1.size());
  std::vector<int> A;
  Bits B;
  for (int round = 0; round < kJuknaRestartCap; ++round) {
    cover.bicliques.clear();
    auto unc = rows;
    long long left = target;
    for (long long s = 0; s < budget && left > 0; ++s) {
      if (stats) ++stats->samples;
      A.clear();
      for (int a = 0; a < n1; ++a)
        if (rng() < threshold) A.push_back(a);
      if (A.empty()) continue;
      B = rows[A[0]];
      for (int a : A)
        for (std::size_t w = 0; w < B.size(); ++w) B[w] &= rows[a][w];
      long long gain = markCovered(unc, A, B);
      if (gain == 0) continue;
      left -= gain;
      cover.bicliques.push_back(makeBiclique(gb, A, B));
    }
    if (left == 0) return cover;
    if (stats) ++stats->restarts;
  }
  throw ResourceError("randomized biclique cover failed after " + std::to_string(kJuknaRestartCap) + " restarts");
}

namespace {

struct GreedyBest {
  long long gain = 0;
  std::uint32_t mask = 0;
  bool better(long long g, std::uint32_t m) const { return g > gain || (g == gain && g > 0 && m < mask); }
};

class GreedyScan {
 public:
  GreedyScan(const std::vector<Bits>& rows, const std::vector<Bits>& unc) : rows_(rows), unc_(unc) {
    n1_ = static_cast<int>(rows.size());
    stack_.assign(n1_ + 1, Bits(rows.empty() ? 0 : rows[0].size()));
  }

  GreedyBest run(int first, int step) {
    best_ = {};
    for (int a = first; a < n1_; a += step) {
      stack_[1] = rows_[a];
      if (anyBit(stack_[1])) visit(1, std::uint32_t{1} << a, a);
    }
    return best_;
  }

 private:
  void visit(int depth, std::uint32_t mask, int last) {
    const Bits& B = stack_[depth];
    long long gain = 0;
    for (std::uint32_t m = mask; m; m &= m - 1) gain += popcount(B, unc_[std::countr_zero(m)]);
    if (best_.better(gain, mask)) best_ = {gain, mask};
    long long bound = gain;
    for (int a = last + 1; a < n1_; ++a) bound += popcount(B, unc_[a]);
    // supersets only add bits above `last`, so their masks exceed `mask`
    if (bound < best_.gain || (bound == best_.gain && mask > best_.mask)) return;
    for (int a = last + 1; a < n1_; ++a) {
      Bits& next = stack_[depth + 1];
      for (std::size_t w = 0; w < B.size(); ++w) next[w] = B[w] & rows_[a][w];
      if (anyBit(next)) visit(depth + 1, mask | (std::uint32_t{1} << a), a);
    }
  }

  const std::vector<Bits>& rows_;
  const std::vector<Bits>& unc_;
  int n1_;
  std::vector<Bits> stack_;
  GreedyBest best_;
};

}  // namespace

BicliqueCover juknaCoverGreedy(const BipartiteGraph& gb, int cap, int workers) {
  const int n1 = static_cast<int>(gb.v1.size());
  if (n1 > cap || n1 > 31) throw ResourceError("greedy cover scan over " + std::to_string(n1) + " vertices exceeds the cap");
  auto rows = complementRows(gb);
  auto unc = rows;
  long long left = 0;
  for (const auto& r : rows)
    for (auto w : r) left += std::popcount(w);
  BicliqueCover cover;
  workers = std::max(1, std::min(workers, n1));
  while (left > 0) {
    GreedyBest best;
    if (workers == 1) {
      best = GreedyScan(rows, unc).run(0, 1);
    } else {
      std::vector<GreedyBest> part(workers);
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back([&, t] { part[t] = GreedyScan(rows, unc).run(t, workers); });
      for (auto& th : pool) th.join();
      for (const auto& p : part)
        if (best.better(p.gain, p.mask)) best = p;
    }
    if (best.gain == 0) throw std::logic_error("greedy cover made no progress");
    std::vector<int> A;
    Bits B(rows[0].size(), ~std::uint64_t{0});
    for (std::uint32_t m = best.mask; m; m &= m - 1) {
      int a = std::countr_zero(m);
      A.push_back(a);
      for (std::size_t w = 0; w < B.size(); ++w) B[w] &= rows[a][w];
    }
    left -= markCovered(unc, A, B);
    cover.bicliques.push_back(makeBiclique(gb, A, B));
  }
  return cover;
}

BicliqueCover coverComplementColored(const Graph& g, const std::vector<int>& vcolor, const ColoredCoverOptions& opts) {
  if (static_cast<int>(vcolor.size()) != g.n() || !isProperVertexColoring(g, vcolor))
    throw UsageError("vertex coloring is not proper");
  int p = 0;
  for (int c : vcolor) {
    if (c < 1) throw UsageError("vertex colors must be positive");
    p = std::max(p, c);
  }
  std::vector<std::vector<Vertex>> cls(p + 1);
  for (Vertex v = 0; v < g.n(); ++v) cls[vcolor[v]].push_back(v);

  BicliqueCover out;
  for (int i = 1; i <= p; ++i) {
    if (cls[i].size() < 2) continue;
    for (const auto& b : coverCompleteGraph(static_cast<int>(cls[i].size())).bicliques) {
      Biclique mapped;
      for (Vertex x : b.left) mapped.left.push_back(cls[i][x]);
      for (Vertex x : b.right) mapped.right.push_back(cls[i][x]);
      out.bicliques.push_back(std::move(mapped));
    }
  }
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) {
      if (cls[i].empty() || cls[j].empty()) continue;
      const bool swap = cls[j].size() < cls[i].size();
      auto gb = bipartiteBetween(g, swap ? cls[j] : cls[i], swap ? cls[i] : cls[j]);
      BicliqueCover part;
      if (opts.deterministic && static_cast<int>(gb.v1.size()) <= opts.greedyCap) {
        part = juknaCoverGreedy(gb, opts.greedyCap, opts.workers);
      } else {
        std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)};
        std::uint64_t s;
        seq.generate(reinterpret_cast<std::uint32_t*>(&s), reinterpret_cast<std::uint32_t*>(&s) + 2);
        part = juknaCoverRandom(gb, s);
      }
      for (auto& b : part.bicliques) out.bicliques.push_back(std::move(b));
    }
  if (!sharesAtMostOneVertex(g, out)) throw std::logic_error("combined cover puts both ends of an edge in one biclique");
  return out;
}

bool coversBipartiteComplement(const BipartiteGraph& gb, const BicliqueCover& cover) {
  std::unordered_map<Vertex, int> p1, p2;
  for (std::size_t i = 0; i < gb.v1.size(); ++i) p1[gb.v1[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < gb.v2.size(); ++j) p2[gb.v2[j]] = static_cast<int>(j);
  auto rows = complementRows(gb);
  auto unc = rows;
  for (const auto& b : cover.bicliques)
    for (Vertex l : b.left) {
      auto il = p1.find(l);
      if (il == p1.end()) return false;
      for (Vertex r : b.right) {
        auto ir = p2.find(r);
        if (ir == p2.end()) return false;
        const int i = il->second, j = ir->second;
        if (!((rows[i][j >> 6] >> (j & 63)) & 1U)) return false;
        unc[i][j >> 6] &= ~(std::uint64_t{1} << (j & 63));
      }
    }
  for (const auto& r : unc)
    if (anyBit(r)) return false;
  return true;
}

bool coversComplement(const Graph& g, const BicliqueCover& cover) {
  const std::size_t n = g.n();
  std::vector<bool> covered(n * n, false);
  for (const auto& b : cover.bicliques)
    for (Vertex l : b.left)
      for (Vertex r : b.right) {
        if (l < 0 || r < 0 || l >= g.n() || r >= g.n() || l == r || g.adjacent(l, r)) return false;
        covered[l * n + r] = covered[r * n + l] = true;
      }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!covered[u * n + v] && !g.adjacent(static_cast<Vertex>(u), static_cast<Vertex>(v))) return false;
  return true;
}

bool sharesAtMostOneVertex(const Graph& g, const BicliqueCover& cover) {
  std::vector<int> stamp(g.n(), -1);
  for (std::size_t i = 0; i < cover.bicliques.size(); ++i) {
    const auto& b = cover.bicliques[i];
    for (const auto* side : {&b.left, &b.right})
      for (Vertex v : *side) stamp[v] = static_cast<int>(i);
    for (const auto* side : {&b.left, &b.right})
      for (Vertex v : *side)
        for (auto [y, e] : g.neighbors(v))
          if (stamp[y] == static_cast<int>(i)) return false;
  }
  return true;
}

std::string serializeCover(const BicliqueCover& cover) {
  std::ostringstream out;
  for (const auto& b : cover.bicliques) {
    out << "L:";
    for (Vertex v : b.left) out << ' ' << v + 1;
    out << " R:";
    for (Vertex v : b.right) out << ' ' << v + 1;
    out << '\n';
  }
  return out.str();
}

BicliqueCover parseCover(const std::string& text) {
  BicliqueCover cover;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok != "L:") throw FormatError(lineNo, "expected 'L:'");
    Biclique b;
    std::vector<Vertex>* side = &b.left;
    while (ls >> tok) {
      if (tok == "R:") {
        if (side == &b.right) throw FormatError(lineNo, "duplicate 'R:'");
        side = &b.right;
        continue;
      }
      std::size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 1) throw FormatError(lineNo, "bad vertex '" + tok + "'");
      side->push_back(static_cast<Vertex>(v - 1));
    }
    if (side != &b.right) throw FormatError(lineNo, "missing 'R:'");
    cover.bicliques.push_back(std::move(b));
  }
  return cover;
}

}  // namespace rainbow
