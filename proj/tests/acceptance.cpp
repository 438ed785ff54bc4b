// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "rainbow/biclique.hpp"
#include "rainbow/cnf.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/exact.hpp"
#include "rainbow/max_rainbow.hpp"
#include "rainbow/reduction.hpp"
#include "rainbow/verify.hpp"

using namespace rainbow;
using namespace testing_helpers;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tallies checks and keeps the first few failure messages.
struct Tally {
  long long cases = 0, failures = 0;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    if (notes.size() < 5) notes.push_back(what);
  }
  std::string str() const {
    std::string s = std::to_string(cases) + " checks, " + std::to_string(failures) + " failures";
    for (const auto& n : notes) s += "; " + n;
    return s;
  }
};

// ---- independent oracles ----

// Some simple path of length <= k between the pair is rainbow.
bool pairSatisfied(const Graph& g, const Coloring& c, VertexPair p, int k) {
  for (const auto& path : allShortPaths(g, p, k)) {
    std::set<Color> seen;
    bool ok = true;
    for (EdgeId e : path) ok = ok && seen.insert(c[e]).second;
    if (ok) return true;
  }
  return false;
}

bool solvesOracle(const Instance& inst, const Coloring& c) {
  if (static_cast<int>(c.size()) != inst.graph.m()) return false;
  for (Color x : c)
    if (x < 1 || x > inst.k) return false;
  if (inst.hasPrecoloring() && !inst.precoloring.extendedBy(c)) return false;
  for (VertexPair p : inst.effectiveRequests())
    if (!pairSatisfied(inst.graph, c, p, inst.k)) return false;
  return true;
}

// Large instances: the library verifiers.
bool solvesLarge(const Instance& inst, const Coloring& c) {
  if (inst.hasPrecoloring() && !inst.precoloring.extendedBy(c)) return false;
  if (inst.mode == RequestMode::AllPairs) return isRainbowConnected(inst.graph, c, inst.k);
  auto reqs = inst.effectiveRequests();
  return verifyRequests(inst.graph, c, reqs, inst.k).size() == reqs.size();
}

template <class F>
void forEachColoring(int m, int k, F&& f) {
  Coloring c(m, 1);
  while (true) {
    if (!f(c)) return;
    int i = 0;
    while (i < m && c[i] == k) c[i++] = 1;
    if (i == m) return;
    ++c[i];
  }
}

long long countOracle(const Graph& g, const std::vector<VertexPair>& S) {
  long long n = 0;
  forEachColoring(g.m(), 2, [&](const Coloring& c) {
    bool ok = true;
    for (VertexPair p : S) ok = ok && (g.adjacent(p.u, p.v) || pairSatisfied(g, c, p, 2));
    n += ok;
    return true;
  });
  return n;
}

int ceilLog2(long long n) {
  int b = 0;
  while ((1LL << b) < n) ++b;
  return b;
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e--) r *= b;
  return r;
}

long long factorial(int k) {
  long long r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Smallest integer r with r^3 >= n, and with r^3 >= n^2.
long long ceilCube(long long n) {
  long long r = 0;
  while (r * r * r < n) ++r;
  return r;
}
long long ceilTwoThirds(long long n) {
  long long r = 0;
  while (r * r * r < n * n) ++r;
  return r;
}

// Every left x right pair satisfies `target` and every pair of targetPairs lies in some biclique.
bool coverOracle(int n, const std::function<bool(Vertex, Vertex)>& target, const std::vector<VertexPair>& targetPairs,
                 const BicliqueCover& cover, std::string& why) {
  std::set<VertexPair> covered;
  for (const Biclique& b : cover.bicliques) {
    for (Vertex a : b.left)
      for (Vertex c : b.right) {
        if (a < 0 || c < 0 || a >= n || c >= n || !target(a, c)) {
          why = "invalid biclique pair " + std::to_string(a) + "-" + std::to_string(c);
          return false;
        }
        covered.insert(makePair(a, c));
      }
  }
  for (VertexPair p : targetPairs)
    if (!covered.count(p)) {
      why = "uncovered pair " + std::to_string(p.u) + "-" + std::to_string(p.v);
      return false;
    }
  return true;
}

bool complementCovered(const Graph& g, const BicliqueCover& cover, std::string& why) {
  return coverOracle(
      g.n(), [&](Vertex a, Vertex b) { return a != b && !g.adjacent(a, b); }, antiEdges(g), cover, why);
}

BipartiteGraph randomBipartite(int n1, int n2, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  BipartiteGraph gb;
  for (int i = 0; i < n1; ++i) gb.v1.push_back(i);
  for (int j = 0; j < n2; ++j) gb.v2.push_back(n1 + j);
  gb.adj.resize(n1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (coin(rng)) gb.adj[i].push_back(j);
  return gb;
}

bool bipartiteCovered(const BipartiteGraph& gb, const BicliqueCover& cover, std::string& why) {
  const int n1 = static_cast<int>(gb.v1.size()), n2 = static_cast<int>(gb.v2.size());
  std::vector<std::vector<char>> edge(n1, std::vector<char>(n2, 0));
  for (int i = 0; i < n1; ++i)
    for (int j : gb.adj[i]) edge[i][j] = 1;
  std::vector<VertexPair> targets;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (!edge[i][j]) targets.push_back(makePair(i, n1 + j));
  auto target = [&](Vertex a, Vertex b) { return a < n1 && b >= n1 && !edge[a][b - n1]; };
  return coverOracle(n1 + n2, target, targets, cover, why);
}

CnfFormula formula(int variables, std::vector<Clause> clauses) {
  CnfFormula f;
  f.variables = variables;
  f.clauses = std::move(clauses);
  return f;
}

// Three distinct variables per clause, at most 4 occurrences per variable, satisfied by xi if given.
CnfFormula randomToveyFormula(std::mt19937_64& rng, int n, int m, const Assignment* xi = nullptr) {
  CnfFormula f;
  f.variables = n;
  std::vector<int> occ(n, 0);
  for (int tries = 0; static_cast<int>(f.clauses.size()) < m && tries < 10000; ++tries) {
    Clause cl;
    while (cl.size() < 3) {
      int v = static_cast<int>(rng() % n);
      bool dup = false;
      for (Literal l : cl) dup = dup || std::abs(l) == v + 1;
      if (!dup) cl.push_back(rng() % 2 ? v + 1 : -(v + 1));
    }
    bool ok = true;
    for (Literal l : cl) ok = ok && occ[std::abs(l) - 1] < 4;
    if (xi) ok = ok && satisfies(formula(n, {cl}), *xi);
    if (!ok) continue;
    for (Literal l : cl) ++occ[std::abs(l) - 1];
    f.clauses.push_back(cl);
  }
  return f;
}

// Each of the n variables occurs exactly 3 times over n clauses of 3 distinct variables.
CnfFormula regularToveyFormula(std::mt19937_64& rng, int n) {
  std::vector<int> slots;
  for (int v = 1; v <= n; ++v) slots.insert(slots.end(), 3, v);
  while (true) {
    std::shuffle(slots.begin(), slots.end(), rng);
    CnfFormula f;
    f.variables = n;
    bool ok = true;
    for (int c = 0; c < n && ok; ++c) {
      int a = slots[3 * c], b = slots[3 * c + 1], d = slots[3 * c + 2];
      ok = a != b && b != d && a != d;
      f.clauses.push_back({rng() % 2 ? a : -a, rng() % 2 ? b : -b, rng() % 2 ? d : -d});
    }
    if (ok) return f;
  }
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criteria ----

Outcome decisionEquivalence() {
  std::mt19937_64 rng(101);
  Tally t;
  long long yes = 0;
  for (unsigned mask = 0; mask < 1024; ++mask) {
    Graph g = graphFromMask(5, mask);
    for (int draw = 0; draw < 3; ++draw)
      for (int k : {2, 3}) {
        Instance inst(g, k, randomSubset(feasiblePairs(g, k), rng));
        auto a = solveSubsetRainbow(inst);
        auto b = bruteForceSolve(inst);
        t.check(a.has_value() == b.has_value(), "disagreement on mask " + std::to_string(mask));
        if (a) t.check(solvesOracle(inst, *a), "unsound coloring on mask " + std::to_string(mask));
        yes += b.has_value();
      }
  }
  return {t.failures == 0 && t.cases >= 6144, t.str() + ", " + std::to_string(yes) + " YES"};
}

Outcome countExactness() {
  std::mt19937_64 rng(202);
  Tally t;
  for (int trial = 0; trial < 500;) {
    int n = 2 + static_cast<int>(rng() % 7);
    Graph g = randomGraph(n, 0.2 + 0.1 * (trial % 4), rng);
    if (g.m() > 12) continue;
    auto S = randomSubset(antiEdges(g), rng, 6);
    Instance inst(g, 2, S);
    ColoringCount ie = countSatisfying2Colorings(g, S);
    ColoringCount bf = bruteForceCount(inst);
    t.check(ie == bf, "IE " + ie.str() + " vs brute force " + bf.str());
    t.check(bf == countOracle(g, S), "brute force differs from path enumeration");
    ++trial;
  }
  return {t.failures == 0, t.str()};
}

Outcome completeGraphCovers() {
  Tally t;
  for (int n = 1; n <= 64; ++n) {
    auto cover = coverCompleteGraph(n);
    t.check(cover.size() == ceilLog2(n), "n=" + std::to_string(n) + " has " + std::to_string(cover.size()));
    std::string why;
    t.check(complementCovered(Graph(n), cover, why), "n=" + std::to_string(n) + ": " + why);
  }
  return {t.failures == 0, t.str()};
}

Outcome juknaCovers() {
  std::mt19937_64 rng(404);
  Tally t;
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double p = 0.05 + 0.1 * (trial % 5);
    int small = 1 + static_cast<int>(rng() % 12);
    auto gb = randomBipartite(small, small, p, rng);
    std::string why;
    auto greedy = juknaCoverGreedy(gb);
    t.check(bipartiteCovered(gb, greedy, why), "greedy: " + why);
    const int delta = std::max(1, gb.maxDegree());
    const double bound = 10.0 * delta * std::log2(2 * small + 1);
    t.check(greedy.size() <= bound, "greedy size " + std::to_string(greedy.size()) + " over bound");
    worst = std::max(worst, greedy.size() / bound);
    t.check(bipartiteCovered(gb, juknaCoverRandom(gb, trial), why), "random (small): " + why);

    int large = 1 + static_cast<int>(rng() % 100);
    auto big = randomBipartite(large, large, p, rng);
    t.check(bipartiteCovered(big, juknaCoverRandom(big, 1000 + trial), why), "random: " + why);
  }
  std::ostringstream s;
  s << t.str() << ", largest greedy size/bound " << std::setprecision(3) << worst;
  return {t.failures == 0, s.str()};
}

Outcome coloredCovers() {
  std::mt19937_64 rng(505);
  Tally t;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 40);
    Graph g = randomGraph(n, 0.05 + 0.05 * (trial % 5), rng);
    auto col = greedyProperColoring(g);
    t.check(isProperVertexColoring(g, col) && *std::max_element(col.begin(), col.end()) <= g.maxDegree() + 1,
            "greedy coloring");
    ColoredCoverOptions opts;
    opts.deterministic = trial % 2 == 0;
    opts.seed = trial;
    auto cover = coverComplementColored(g, col, opts);
    std::string why;
    t.check(complementCovered(g, cover, why), why);
    bool sharing = true;
    for (const Biclique& b : cover.bicliques) {
      std::set<Vertex> in(b.left.begin(), b.left.end());
      in.insert(b.right.begin(), b.right.end());
      for (const Edge& e : g.edges()) sharing = sharing && !(in.count(e.u) && in.count(e.v));
    }
    t.check(sharing, "an edge has both ends in one biclique");
  }
  return {t.failures == 0, t.str()};
}

Outcome approximationBound() {
  std::mt19937_64 rng(606);
  Tally t;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + trial % 2;
    int n = 3 + static_cast<int>(rng() % 14);
    Graph g = randomGraph(n, 0.15 + 0.05 * (trial % 6), rng);
    auto S = randomSubset(feasiblePairs(g, k), rng, 40);
    Coloring c = derandomizedApprox(g, S, k);
    PathPlan plan = choosePaths(g, S, k);
    int rainbow = 0;
    bool planOk = plan.pairs == normalizePairs(S) || plan.pairs.size() == S.size();
    for (std::size_t i = 0; i < plan.paths.size(); ++i) {
      const Walk& w = plan.paths[i];
      planOk = planOk && w.length() <= k && !w.vertices.empty() &&
               makePair(w.vertices.front(), w.vertices.back()) == plan.pairs[i];
      std::set<Color> seen;
      bool ok = true;
      for (EdgeId e : w.edges) ok = ok && seen.insert(c[e]).second;
      rainbow += ok;
    }
    const long long kk = ipow(k, k), fact = factorial(k);
    const long long need = (static_cast<long long>(S.size()) * fact + kk - 1) / kk;
    t.check(planOk, "malformed plan");
    t.check(rainbow >= need, std::to_string(rainbow) + " rainbow paths < " + std::to_string(need));
  }
  return {t.failures == 0, t.str()};
}

Outcome kernelCriterion() {
  std::mt19937_64 rng(707);
  Tally t;
  int reduced = 0, oracle = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2;
    int n = 2 + static_cast<int>(rng() % 7);
    Graph g = randomGraph(n, 0.2 + 0.1 * (trial % 4), rng);
    int pool = static_cast<int>(feasiblePairs(g, k).size());
    int q = 1 + static_cast<int>(rng() % (pool + 1));
    bool direct = solveMaxRainbow(g, k, q).yes;
    auto kr = kernelize(g, k, q);
    bool viaKernel = kr.verdict == KernelVerdict::YesImmediate || solveMaxRainbow(kr.graph, k, kr.q).yes;
    t.check(direct == viaKernel, "kernel changes the verdict");
    if (kr.verdict == KernelVerdict::Reduced) {
      ++reduced;
      t.check(kr.graph.n() * factorial(k) <= 3LL * q * ipow(k, k), "kernel too large");
    }
    if (g.m() <= 14) {
      ++oracle;
      t.check(direct == (bruteForceMaxSatisfied(g, k) >= q), "solver differs from brute-force maximizer");
    }
  }
  return {t.failures == 0, t.str() + ", " + std::to_string(reduced) + " reduced, " + std::to_string(oracle) + " with oracle"};
}

Outcome maxSolver() {
  std::mt19937_64 rng(808);
  Tally t;
  int eligible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 2;
    int n = 3 + static_cast<int>(rng() % 6);
    Graph g = randomGraph(n, 0.25 + 0.1 * (trial % 3), rng);
    int pool = static_cast<int>(feasiblePairs(g, k).size());
    int q = 1 + static_cast<int>(rng() % (pool + 1));
    if (g.m() > 12) continue;
    ++eligible;
    auto r = solveMaxRainbow(g, k, q);
    t.check(r.yes == (bruteForceMaxSatisfied(g, k) >= q), "verdict differs at trial " + std::to_string(trial));
    if (r.coloring) {
      int sat = 0;
      for (VertexPair p : feasiblePairs(g, k)) sat += pairSatisfied(g, *r.coloring, p, k);
      t.check(sat >= q, "witness satisfies too few pairs");
    }
  }
  return {t.failures == 0 && eligible > 0, t.str() + " over " + std::to_string(eligible) + " eligible instances"};
}

Outcome reductionEquivalence() {
  std::mt19937_64 rng(909);
  Tally t;
  std::vector<std::pair<std::string, CnfFormula>> corpus;
  for (int i = 0; i < 30; ++i) {
    int n = 3 + static_cast<int>(rng() % 5);
    int m = 1 + static_cast<int>(rng() % 3);
    corpus.push_back({"tovey" + std::to_string(i), randomToveyFormula(rng, n, m)});
  }
  corpus.push_back({"x&!x", formula(1, {{1}, {-1}})});
  corpus.push_back({"2sat-unsat", formula(2, {{1, 2}, {-1, 2}, {1, -2}, {-1, -2}})});
  corpus.push_back({"clause-and-negations", formula(3, {{1, 2, 3}, {-1}, {-2}, {-3}})});
  int yes = 0, no = 0, crossChecked = 0;
  for (const auto& [name, phi] : corpus) {
    const bool sat = bruteForceSat(phi).has_value();
    yes += sat;
    no += !sat;
    if (name.rfind("tovey", 0) == 0) t.check(isToveyForm(phi) && phi.clauses.size() <= 3, name + " not in Tovey form");
    CompileOptions o;
    o.k = 3;
    o.target = CompileTarget::SRkC;
    auto res = compile(phi, o);
    const Instance& sr2 = res.instances.front();
    const Instance& srk = res.instances.back();

    auto fc = solveSubsetRainbow(sr2);
    auto pr2 = solveByPropagation(sr2);
    t.check(fc.has_value() == sat, name + ": SR2CExt FindColoring verdict");
    t.check(pr2.has_value() == sat, name + ": SR2CExt propagation verdict");
    if (fc) t.check(solvesLarge(sr2, *fc), name + ": SR2CExt witness");

    auto prk = solveByPropagation(srk);
    t.check(prk.has_value() == sat, name + ": SRkC verdict");
    if (prk) {
      t.check(solvesLarge(srk, *prk), name + ": SRkC witness");
      SolverOptions so;
      so.findColoring.pick = PickRule::FewestWalks;
      so.findColoring.nodeLimit = 200'000;
      try {
        auto other = solveSubsetRainbow(srk, so);
        t.check(other.has_value(), name + ": FindColoring misses an SRkC witness");
        ++crossChecked;
      } catch (const ResourceError&) {
      }
      // the witness maps back to a model through the whole chain
      t.check(satisfies(phi, pullBack(res.trace, *prk)), name + ": pulled-back assignment");
    }
  }
  return {t.failures == 0, t.str() + "; " + std::to_string(yes) + " satisfiable, " + std::to_string(no) +
                               " unsatisfiable, " + std::to_string(crossChecked) + " YES cross-checked"};
}

Outcome witnessLifting() {
  std::mt19937_64 rng(1010);
  Tally t;
  int general = 0;
  for (int i = 0; i < 50; ++i) {
    CnfFormula phi;
    Assignment xi;
    if (i % 5 == 4) {
      // general widths and repeated variables exercise splitting and padding
      ++general;
      int n = 2 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 6);
      xi.resize(n);
      for (int v = 0; v < n; ++v) xi[v] = rng() % 2;
      phi.variables = n;
      while (static_cast<int>(phi.clauses.size()) < m) {
        Clause cl;
        int width = 1 + static_cast<int>(rng() % std::min(3, n));
        while (static_cast<int>(cl.size()) < width) {
          int v = 1 + static_cast<int>(rng() % n);
          if (std::find(cl.begin(), cl.end(), v) == cl.end() && std::find(cl.begin(), cl.end(), -v) == cl.end())
            cl.push_back(rng() % 2 ? v : -v);
        }
        if (satisfies(formula(n, {cl}), xi)) phi.clauses.push_back(cl);
      }
    } else {
      int m = 1 + static_cast<int>(rng() % 20);
      int n = std::max(3, (3 * m + 3) / 4 + static_cast<int>(rng() % 4));
      xi.resize(n);
      for (int v = 0; v < n; ++v) xi[v] = rng() % 2;
      phi = randomToveyFormula(rng, n, m, &xi);
    }
    const std::string name = "formula " + std::to_string(i);
    t.check(satisfies(phi, xi) && phi.clauses.size() <= 20, name + ": planted model");
    CompileOptions o;
    o.k = 3;
    o.target = CompileTarget::RkC;
    auto res = compile(phi, o);
    t.check(satisfies(res.normalized, toveyLift(res.trace.front(), xi)), name + ": normalized model");
    auto cs = liftThrough(res.trace, xi);
    t.check(cs.size() == res.instances.size(), name + ": stage count");
    for (std::size_t s = 0; s < cs.size() && s < res.instances.size(); ++s)
      t.check(solvesLarge(res.instances[s], cs[s]), name + ": stage " + std::to_string(s) + " witness rejected");
    const Instance& fin = res.final();
    t.check(fin.mode == RequestMode::AllPairs && fin.k == 3 && isRainbowConnected(fin.graph, cs.back(), 3),
            name + ": final coloring not rainbow connected");
  }
  return {t.failures == 0, t.str() + ", " + std::to_string(general) + " general formulas"};
}

Outcome structuralAudits() {
  std::mt19937_64 rng(1111);
  Tally t;
  std::ostringstream notes;
  for (int n : {27, 64, 125}) {
    const int k = 3;
    CnfFormula phi = regularToveyFormula(rng, n);
    CompileOptions o;
    o.k = k;
    o.target = CompileTarget::RkC;
    auto res = compile(phi, o);
    const std::string tag = "n=" + std::to_string(n);
    t.check(res.normalized.variables == n, tag + ": normalization changed the variable count");
    for (const SizeCheck& c : res.report.checks)
      t.check(c.holds(), tag + ": " + c.stage + "." + c.quantity + " expected " + std::to_string(c.expected) + " got " +
                             std::to_string(c.actual));
    const SatTrace& sat = res.sat;
    t.check(static_cast<long long>(sat.middle.size()) == ceilTwoThirds(n) + 9, tag + ": |M|");
    for (std::size_t i = 0; i < sat.upper.size(); ++i) {
      t.check(static_cast<long long>(sat.upper[i].size()) == ceilCube(n) + 3, tag + ": upper layer size");
      t.check(static_cast<long long>(sat.lower[i].size()) == ceilCube(n) + 3, tag + ": lower layer size");
    }
    const Instance &s0 = res.instances[0], &s1 = res.instances[1], &s2 = res.instances[2], &s3 = res.instances[3];
    t.check(s1.requests.size() == s0.requests.size() + static_cast<std::size_t>(s0.graph.m()), tag + ": |S'| = |S| + |E|");
    const int addedExt = s2.graph.n() - s1.graph.n();
    t.check(addedExt > 0 && addedExt % (3 * k * k) == 0, tag + ": dropExtension adds a multiple of 3k^2 vertices");
    const int addedReq = s3.graph.n() - s2.graph.n();
    // recover q from the implemented count 2(k-2)q + 2·hubPairs(q) (+1 isolated vertex)
    int q = -1;
    for (int cand = 1; cand <= addedReq && q < 0; ++cand)
      for (int iso : {0, 1})
        if (2 * (k - 2) * cand + 2 * requestHubPairs(cand) + iso == addedReq) q = cand;
    t.check(q > 0, tag + ": added vertices at request elimination match no biclique count");
    if (q > 0)
      notes << " " << tag << ": q=" << q << " added=" << addedReq << " (2(k-1)q+2ceil(log2 q) would be "
            << 2 * (k - 1) * q + 2 * ceilLog2(q) << ")";
  }
  return {t.failures == 0, t.str() + ";" + notes.str()};
}

// ---- invariant suite ----

void graphProperties(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + static_cast<int>(rng() % 12);
    std::vector<std::pair<Vertex, Vertex>> list;
    for (int j = 0; j < 2 * n; ++j) {
      Vertex a = static_cast<Vertex>(rng() % n), b = static_cast<Vertex>(rng() % n);
      if (a != b) list.push_back({a, b});
    }
    Graph g = buildGraph(n, list);
    bool ok = true;
    std::set<VertexPair> fromAdj, fromEdges;
    for (const Edge& e : g.edges()) {
      ok = ok && e.u < e.v;
      fromEdges.insert({e.u, e.v});
    }
    for (Vertex v = 0; v < n; ++v)
      for (auto [w, e] : g.neighbors(v)) {
        ok = ok && makePair(v, w) == VertexPair{g.edge(e).u, g.edge(e).v};
        fromAdj.insert(makePair(v, w));
      }
    t.check(ok && fromAdj == fromEdges, "adjacency round trip");
    int k = 1 + static_cast<int>(rng() % 4);
    auto a = feasiblePairs(g, k), b = feasiblePairs(g, k + 1);
    t.check(std::includes(b.begin(), b.end(), a.begin(), a.end()), "feasible pairs not monotone in k");
    auto col = greedyProperColoring(g);
    t.check(isProperVertexColoring(g, col) && (col.empty() || *std::max_element(col.begin(), col.end()) <= g.maxDegree() + 1),
            "greedy coloring");
  }
  for (int i = 0; i < 500; ++i) {
    int n = 1 + static_cast<int>(rng() % 20);
    DisjointSets ds(n);
    Graph u(n);
    for (int j = 0; j < n; ++j) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      ds.unite(a, b);
      if (a != b) u.addEdge(a, b);
    }
    bool ok = true;
    int comps = 0;
    std::vector<char> seen(n, 0);
    for (Vertex s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++comps;
      auto d = bfsDistances(u, s);
      for (Vertex v = 0; v < n; ++v) {
        ok = ok && (d[v].has_value() == (ds.find(v) == ds.find(s)));
        if (d[v]) seen[v] = 1;
      }
    }
    t.check(ok && comps == ds.classes(), "disjoint sets vs BFS components");
  }
}

void verifyProperties(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 2000; ++i) {
    int n = 2 + static_cast<int>(rng() % 4);
    Graph g = randomGraph(n, 0.5, rng);
    int k = 1 + static_cast<int>(rng() % 4);
    PartialColoring c0(g.m(), k);
    for (EdgeId e = 0; e < g.m(); ++e)
      if (rng() % 3) c0.set(e, 1 + static_cast<Color>(rng() % k));
    std::vector<EdgeId> guide;
    for (EdgeId e = 0; e < g.m(); ++e)
      if (c0.isSet(e) && rng() % 4 == 0 && static_cast<int>(guide.size()) < k) guide.push_back(e);
    Vertex a = static_cast<Vertex>(rng() % n), b = static_cast<Vertex>(rng() % n);
    if (a == b) continue;
    VertexPair p = makePair(a, b);
    auto w = findGuidedWalk(g, c0, p, guide, k);
    bool oracle = walkOracle(g, c0.values(), p, guide, k);
    t.check(w.has_value() == oracle, "guided walk completeness");
    if (w) {
      bool ok = w->length() <= k && w->vertices.front() == p.u && w->vertices.back() == p.v;
      std::set<Color> seen;
      for (EdgeId e : w->edges)
        if (c0.isSet(e)) ok = ok && seen.insert(c0[e]).second;
      for (EdgeId e : guide) ok = ok && std::find(w->edges.begin(), w->edges.end(), e) != w->edges.end();
      t.check(ok, "guided walk soundness");
    }
  }
  for (int i = 0; i < 1000; ++i) {
    int n = 3 + static_cast<int>(rng() % 6);
    Graph g = randomGraph(n, 0.4, rng);
    int k = 2 + static_cast<int>(rng() % 3);
    Coloring c(g.m());
    for (auto& x : c) x = 1 + static_cast<Color>(rng() % k);
    auto S = antiEdges(g);
    auto sat = verifyRequests(g, c, S, k);
    auto wider = verifyRequests(g, c, S, k + 1);
    t.check(std::includes(wider.begin(), wider.end(), sat.begin(), sat.end()),
            "satisfied set not monotone in k");
    std::vector<Color> perm(k);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    Coloring pc(c.size());
    for (std::size_t e = 0; e < c.size(); ++e) pc[e] = perm[c[e] - 1];
    t.check(verifyRequests(g, pc, S, k) == sat, "satisfied set changes under color permutation");
    bool oracle = true;
    for (VertexPair p : S) oracle = oracle && pairSatisfied(g, c, p, k);
    t.check(isRainbowConnected(g, c, k) == oracle, "rainbow connectivity vs path enumeration");
  }
}

void exactProperties(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 600; ++i) {
    int n = 3 + static_cast<int>(rng() % 4);
    Graph g = randomGraph(n, 0.45, rng);
    if (g.m() > 9) continue;
    int k = 2 + i % 2;
    Instance inst(g, k, randomSubset(feasiblePairs(g, k), rng));
    if (i % 3 == 0)
      for (EdgeId e = 0; e < g.m(); ++e)
        if (rng() % 4 == 0) inst.precoloring.set(e, 1 + static_cast<Color>(rng() % k));
    bool truth = bruteForceSolve(inst).has_value();
    auto a = solveSubsetRainbow(inst);
    t.check(a.has_value() == truth, "solveSubsetRainbow vs brute force");
    if (a) t.check(solvesOracle(inst, *a), "solveSubsetRainbow witness");
    auto b = solveByPropagation(inst);
    t.check(b.has_value() == truth, "propagation vs brute force");
    if (b) t.check(solvesOracle(inst, *b), "propagation witness");
  }
  for (int i = 0; i < 500; ++i) {
    int n = 3 + static_cast<int>(rng() % 5);
    Graph g = randomGraph(n, 0.35, rng);
    if (g.m() > 14) continue;
    auto pool = antiEdges(g);
    auto S = randomSubset(pool, rng, 6);
    ColoringCount base = countSatisfying2Colorings(g, S);
    ColoringCount all = ColoringCount(1) << g.m();
    t.check(base >= 0 && base <= all, "count outside [0, 2^m]");
    t.check(countSatisfying2Colorings(g, {}) == all, "empty request set counts 2^m");
    if (!pool.empty()) {
      auto more = S;
      more.push_back(pool[rng() % pool.size()]);
      t.check(countSatisfying2Colorings(g, more) <= base, "count grows with an extra request");
    }
  }
}

void maxProperties(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 500; ++i) {
    int k = 2 + i % 3;
    int n = 3 + static_cast<int>(rng() % 10);
    Graph g = randomGraph(n, 0.3, rng);
    auto S = randomSubset(feasiblePairs(g, k), rng, 30);
    ExpectationTrace trace;
    derandomizedApprox(g, S, k, &trace);
    bool mono = true;
    for (std::size_t j = 1; j < trace.size(); ++j) mono = mono && trace[j] >= trace[j - 1];
    t.check(!trace.empty() && mono, "conditional expectation decreased");
  }
  for (int i = 0; i < 300; ++i) {
    int k = 2 + i % 2;
    int n = 2 + static_cast<int>(rng() % 7);
    Graph g = randomGraph(n, 0.3, rng);
    if (k == 3 && g.m() > 9) continue;
    int q = 1 + static_cast<int>(rng() % (feasiblePairs(g, k).size() + 1));
    auto kr = kernelize(g, k, q);
    bool viaKernel = kr.verdict == KernelVerdict::YesImmediate || solveMaxRainbow(kr.graph, k, kr.q).yes;
    t.check(viaKernel == solveMaxRainbow(g, k, q).yes, "kernel equivalence");
    if (kr.verdict == KernelVerdict::Reduced) t.check(kr.graph.n() * factorial(k) <= 3LL * q * ipow(k, k), "kernel size");
  }
}

void coverProperties(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 300; ++i) {
    int n1 = 1 + static_cast<int>(rng() % 16), n2 = 1 + static_cast<int>(rng() % 16);
    auto gb = randomBipartite(n1, n2, 0.1 + 0.1 * (i % 4), rng);
    auto greedy = juknaCoverGreedy(gb);
    std::string why;
    t.check(bipartiteCovered(gb, greedy, why), "greedy cover: " + why);
    t.check(greedy.size() <= 10.0 * std::max(1, gb.maxDegree()) * std::log2(n1 + n2 + 1), "greedy size bound");
    t.check(bipartiteCovered(gb, juknaCoverRandom(gb, i), why), "random cover: " + why);
    t.check(coversBipartiteComplement(gb, greedy), "library coverage check disagrees");
  }
}

void reductionProperties(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 200; ++i) {
    int n = 3 + static_cast<int>(rng() % 12);
    Assignment xi(n);
    for (int v = 0; v < n; ++v) xi[v] = rng() % 2;
    CnfFormula phi = randomToveyFormula(rng, n, 1 + static_cast<int>(rng() % n), &xi);
    auto [inst, trace] = satToSR2CExt(phi);
    bool audited = true;
    try {
      auditSatInstance(inst, trace);
    } catch (const std::exception&) {
      audited = false;
    }
    t.check(audited, "SAT gadget audit");
    Coloring c = liftAssignment(trace, xi);
    t.check(solvesLarge(inst, c), "lifted SAT witness");
    t.check(satisfies(phi, extractAssignment(trace, c)), "extracted assignment");
    Graph both = pairGraph(inst.graph.n(), inst.requests);
    for (const Edge& e : inst.graph.edges()) both.addEdge(e.u, e.v);
    t.check(isProperVertexColoring(both, trace.fourColoring), "four-coloring of edges and requests");
    t.check(isProperConflictColoring(inst, trace.cgColoring), "conflict coloring");
  }
  for (int i = 0; i < 500; ++i) {
    int n = 1 + static_cast<int>(rng() % 6), m = static_cast<int>(rng() % 8);
    CnfFormula phi;
    phi.variables = n;
    for (int c = 0; c < m; ++c) {
      Clause cl;
      int width = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < width; ++j) {
        int v = 1 + static_cast<int>(rng() % n);
        cl.push_back(rng() % 2 ? v : -v);
      }
      phi.clauses.push_back(cl);
    }
    auto [norm, trace] = toveyNormalize(phi);
    t.check(isToveyForm(norm), "normalization output form");
    auto model = solveSat(norm);
    t.check(model.has_value() == bruteForceSat(phi).has_value(), "normalization equisatisfiable");
    if (model) t.check(satisfies(phi, toveyRestrict(trace, *model)), "restricted model");
  }
}

void roundTrips(std::mt19937_64& rng, Tally& t) {
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + static_cast<int>(rng() % 10), k = 1 + static_cast<int>(rng() % 5);
    Graph g = randomGraph(n, 0.4, rng);
    Instance inst(g, k, randomSubset(antiEdges(g), rng));
    if (i % 4 == 0) inst.mode = RequestMode::AllPairs, inst.requests.clear();
    if (i % 2)
      for (EdgeId e = 0; e < g.m(); ++e)
        if (rng() % 3 == 0) inst.precoloring.set(e, 1 + static_cast<Color>(rng() % k));
    t.check(parseInstance(serializeInstance(inst)) == inst, "instance round trip");
    Coloring c(g.m());
    for (auto& x : c) x = 1 + static_cast<Color>(rng() % k);
    t.check(parseColoring(g, serializeColoring(g, c)) == c, "coloring round trip");
    t.check(!parseColoring(g, serializeColoring(g, std::nullopt)).has_value(), "NULL coloring round trip");
  }
  for (int i = 0; i < 300; ++i) {
    Graph g = randomGraph(2 + static_cast<int>(rng() % 12), 0.3, rng);
    auto cover = coverComplementColored(g, greedyProperColoring(g));
    t.check(parseCover(serializeCover(cover)) == cover, "cover round trip");
  }
  for (int i = 0; i < 500; ++i) {
    int n = 1 + static_cast<int>(rng() % 8);
    CnfFormula phi;
    phi.variables = n;
    for (int c = static_cast<int>(rng() % 6); c > 0; --c) {
      Clause cl;
      for (int j = 1 + static_cast<int>(rng() % 3); j > 0; --j) {
        int v = 1 + static_cast<int>(rng() % n);
        cl.push_back(rng() % 2 ? v : -v);
      }
      phi.clauses.push_back(cl);
    }
    t.check(parseDimacs(serializeDimacs(phi)) == phi, "DIMACS round trip");
  }
  for (int i = 0; i < 60; ++i) {
    int n = 3 + static_cast<int>(rng() % 4);
    CnfFormula phi = randomToveyFormula(rng, n, 1 + static_cast<int>(rng() % 3));
    CompileOptions o;
    o.k = 3;
    o.target = i % 3 == 0 ? CompileTarget::SR2CExt : CompileTarget::SRkC;
    auto res = compile(phi, o);
    t.check(parseTrace(serializeTrace(res.trace)) == res.trace, "trace round trip");
  }
}

Outcome invariantSuite() {
  std::mt19937_64 rng(1212);
  Tally t;
  graphProperties(rng, t);
  verifyProperties(rng, t);
  exactProperties(rng, t);
  maxProperties(rng, t);
  coverProperties(rng, t);
  reductionProperties(rng, t);
  roundTrips(rng, t);
  return {t.failures == 0 && t.cases >= 10000, t.str()};
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  struct Criterion {
    int id;
    std::string name;
    double limit;  // seconds, 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "decision equivalence on all 5-vertex graphs", 300, decisionEquivalence},
      {2, "inclusion-exclusion count exactness", 60, countExactness},
      {3, "complete-graph bit covers", 0, completeGraphCovers},
      {4, "Jukna covers (greedy and randomized)", 0, juknaCovers},
      {5, "colored complement covers", 0, coloredCovers},
      {6, "approximation bound", 0, approximationBound},
      {7, "kernel equivalence and size", 0, kernelCriterion},
      {8, "max solver vs brute-force maximizer", 0, maxSolver},
      {9, "reduction equivalence, small formulas", 600, reductionEquivalence},
      {10, "witness lifting to Rainbow 3-Coloring", 0, witnessLifting},
      {11, "structural size audits", 0, structuralAudits},
      {12, "invariant suite", 600, invariantSuite},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = seconds(t0);
    if (c.limit > 0 && s >= c.limit) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << std::fixed << std::setprecision(1) << s << " s" << (c.limit > 0 ? ", limit " + std::to_string(static_cast<int>(c.limit)) + " s" : "")
              << "]" << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << ran - failed << "/" << ran << std::endl;
  return failed ? 1 : 0;
}
