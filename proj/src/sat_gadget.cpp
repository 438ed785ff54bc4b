#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

#include "rainbow/errors.hpp"
#include "rainbow/reduction.hpp"

namespace rainbow {

int ceilCubeRoot(long long n) {
  int r = 0;
  while (static_cast<long long>(r) * r * r < n) ++r;
  return r;
}

int ceilTwoThirdsPower(long long n) {
  int r = 0;
  while (static_cast<long long>(r) * r * r < n * n) ++r;
  return r;
}

namespace {

// Splits color classes (ascending color, items ascending) into chunks of at most `cap` items.
struct Chunks {
  std::vector<int> group, position;  // 1-based
  int groups = 0;
};

Chunks chunkClasses(const std::vector<int>& color, int cap) {
  Chunks out{std::vector<int>(color.size(), 0), std::vector<int>(color.size(), 0), 0};
  int maxColor = color.empty() ? 0 : *std::max_element(color.begin(), color.end());
  for (int c = 1; c <= maxColor; ++c) {
    int count = 0;
    for (std::size_t i = 0; i < color.size(); ++i) {
      if (color[i] != c) continue;
      if (count % cap == 0) ++out.groups;
      out.group[i] = out.groups;
      out.position[i] = count % cap + 1;
      ++count;
    }
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("SAT gadget audit: " + what);
}

int variableOf(Literal l) { return std::abs(l) - 1; }

}  // namespace

std::pair<Instance, SatTrace> satToSR2CExt(const CnfFormula& phi) {
  validateFormula(phi);
  if (!isToveyForm(phi)) throw UsageError("formula is not in Tovey form");
  const int n = phi.variables;
  const int mCl = static_cast<int>(phi.clauses.size());

  SatTrace t;
  t.formula = phi;
  t.side = ceilCubeRoot(n);
  t.rowLength = t.side + 3;
  t.middleCount = ceilTwoThirdsPower(n) + 9;

  // Variable conflict graph, 9-colored; groups of each class give mid and lay.
  Graph gv(n);
  for (const Clause& c : phi.clauses)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) gv.addEdge(variableOf(c[a]), variableOf(c[b]));
  t.alpha = greedyProperColoring(gv);
  Chunks groups = chunkClasses(t.alpha, std::max(t.side, 1));
  t.mid = groups.group;
  t.lay = groups.position;
  if (groups.groups > t.middleCount) throw std::logic_error("more groups than middle vertices");

  // h_i: row-major over the layer's variables in group order.
  t.up.assign(n, 0);
  t.low.assign(n, 0);
  for (int i = 1; i <= t.side; ++i) {
    std::vector<int> inLayer;
    for (int x = 0; x < n; ++x)
      if (t.lay[x] == i) inLayer.push_back(x);
    std::sort(inLayer.begin(), inLayer.end(), [&](int a, int b) { return t.mid[a] < t.mid[b]; });
    if (static_cast<int>(inLayer.size()) > t.rowLength * t.rowLength) throw std::logic_error("layer overflow");
    for (std::size_t p = 0; p < inLayer.size(); ++p) {
      t.up[inLayer[p]] = static_cast<int>(p) / t.rowLength + 1;
      t.low[inLayer[p]] = static_cast<int>(p) % t.rowLength + 1;
    }
  }

  // Clause conflict graph: shared mid value. Classes split to ceil(n^{2/3}).
  Graph gc(mCl);
  {
    std::vector<std::vector<int>> byMid(t.middleCount + 1);
    for (int ci = 0; ci < mCl; ++ci)
      for (Literal l : phi.clauses[ci]) byMid[t.mid[variableOf(l)]].push_back(ci);
    for (const auto& list : byMid)
      for (std::size_t a = 0; a < list.size(); ++a)
        for (std::size_t b = a + 1; b < list.size(); ++b)
          if (list[a] != list[b]) gc.addEdge(list[a], list[b]);
  }
  Chunks clusters = chunkClasses(greedyProperColoring(gc), std::max(ceilTwoThirdsPower(n), 1));
  t.beta = clusters.group;
  t.clusters = clusters.groups;

  // Per-cluster conflict graphs. C1 ~ C2 when a variable of C2 shares mid with some x3 that shares
  // (lay, up) or (lay, low) with a variable of C1.
  std::map<std::pair<int, int>, std::vector<int>> midsByUp, midsByLow;
  for (int x = 0; x < n; ++x) {
    midsByUp[{t.lay[x], t.up[x]}].push_back(t.mid[x]);
    midsByLow[{t.lay[x], t.low[x]}].push_back(t.mid[x]);
  }
  std::vector<std::set<int>> reach(mCl), mids(mCl);
  for (int ci = 0; ci < mCl; ++ci)
    for (Literal l : phi.clauses[ci]) {
      int x = variableOf(l);
      mids[ci].insert(t.mid[x]);
      for (int m : midsByUp[{t.lay[x], t.up[x]}]) reach[ci].insert(m);
      for (int m : midsByLow[{t.lay[x], t.low[x]}]) reach[ci].insert(m);
    }
  auto meets = [](const std::set<int>& a, const std::set<int>& b) {
    for (int v : a)
      if (b.count(v)) return true;
    return false;
  };
  t.gamma.assign(mCl, 0);
  t.g.assign(mCl, 0);
  t.clusterSizes.assign(t.clusters, 0);
  for (int i = 1; i <= t.clusters; ++i) {
    std::vector<int> members;
    for (int ci = 0; ci < mCl; ++ci)
      if (t.beta[ci] == i) members.push_back(ci);
    Graph gi(static_cast<int>(members.size()));
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        if (meets(reach[members[a]], mids[members[b]]) || meets(reach[members[b]], mids[members[a]]))
          gi.addEdge(static_cast<int>(a), static_cast<int>(b));
    if (gi.maxDegree() > 12 * (t.side + 2)) throw std::logic_error("cluster conflict graph degree bound");
    Chunks split = chunkClasses(greedyProperColoring(gi), std::max(t.side, 1));
    for (std::size_t a = 0; a < members.size(); ++a) {
      t.gamma[members[a]] = split.group[a];
      t.g[members[a]] = split.position[a];
    }
    t.clusterSizes[i - 1] = split.groups;
  }

  // Vertices.
  Graph graph;
  auto named = [&](std::string name) {
    t.names.push_back(std::move(name));
    return graph.addVertex();
  };
  for (int j = 1; j <= t.middleCount; ++j) t.middle.push_back(named("m_" + std::to_string(j)));
  t.upper.assign(t.side, {});
  t.lower.assign(t.side, {});
  for (int i = 1; i <= t.side; ++i) {
    for (int j = 1; j <= t.rowLength; ++j)
      t.upper[i - 1].push_back(named("u_" + std::to_string(i) + "_" + std::to_string(j)));
    for (int j = 1; j <= t.rowLength; ++j)
      t.lower[i - 1].push_back(named("l_" + std::to_string(i) + "_" + std::to_string(j)));
  }
  t.aVertices.assign(t.clusters, {});
  t.bVertices.assign(t.clusters, {});
  t.cVertices.assign(t.clusters, {});
  for (int i = 1; i <= t.clusters; ++i) {
    std::string si = std::to_string(i);
    for (int j = 1; j <= t.side; ++j) t.aVertices[i - 1].push_back(named("a_" + si + "_" + std::to_string(j)));
    for (int j = 1; j <= t.clusterSizes[i - 1]; ++j) {
      std::array<Vertex, 3> bs{};
      for (int k = 1; k <= 3; ++k)
        bs[k - 1] = named("b_" + si + "_" + std::to_string(j) + "_" + std::to_string(k));
      t.bVertices[i - 1].push_back(bs);
    }
    for (int j = 1; j <= t.clusterSizes[i - 1]; ++j)
      t.cVertices[i - 1].push_back(named("c_" + si + "_" + std::to_string(j)));
  }

  // Edges.
  for (int x = 0; x < n; ++x) {
    Vertex m = t.middle[t.mid[x] - 1];
    t.upEdge.push_back(graph.addEdge(t.upper[t.lay[x] - 1][t.up[x] - 1], m));
    t.lowEdge.push_back(graph.addEdge(m, t.lower[t.lay[x] - 1][t.low[x] - 1]));
  }
  std::vector<EdgeId> precolored;
  for (int i = 0; i < t.clusters; ++i)
    for (int j = 0; j < t.clusterSizes[i]; ++j)
      for (int k = 0; k < 3; ++k) precolored.push_back(graph.addEdge(t.cVertices[i][j], t.bVertices[i][j][k]));
  auto aOf = [&](int ci) { return t.aVertices[t.beta[ci] - 1][t.g[ci] - 1]; };
  auto bOf = [&](int ci, int k) { return t.bVertices[t.beta[ci] - 1][t.gamma[ci] - 1][k]; };
  auto cOf = [&](int ci) { return t.cVertices[t.beta[ci] - 1][t.gamma[ci] - 1]; };
  for (int ci = 0; ci < mCl; ++ci) {
    std::array<EdgeId, 3> es{};
    for (int k = 0; k < 3; ++k) es[k] = graph.addEdge(aOf(ci), bOf(ci, k));
    t.clauseEdges.push_back(es);
  }
  for (int ci = 0; ci < mCl; ++ci) {
    std::array<EdgeId, 3> es{};
    for (int k = 0; k < 3; ++k) es[k] = graph.addEdge(bOf(ci, k), t.middle[t.mid[variableOf(phi.clauses[ci][k])] - 1]);
    t.crossEdges.push_back(es);
  }

  // Requests, tagged by origin.
  std::vector<std::pair<VertexPair, RequestOrigin>> tagged;
  for (int x = 0; x < n; ++x)
    tagged.push_back({makePair(t.upper[t.lay[x] - 1][t.up[x] - 1], t.lower[t.lay[x] - 1][t.low[x] - 1]),
                      {RequestKind::VariablePath, x, -1}});
  for (int ci = 0; ci < mCl; ++ci) {
    tagged.push_back({makePair(aOf(ci), cOf(ci)), {RequestKind::ClausePair, ci, -1}});
    for (int k = 0; k < 3; ++k) {
      Literal l = phi.clauses[ci][k];
      int x = variableOf(l);
      tagged.push_back({makePair(t.middle[t.mid[x] - 1], aOf(ci)), {RequestKind::MiddleToA, ci, k}});
      Vertex side = l > 0 ? t.upper[t.lay[x] - 1][t.up[x] - 1] : t.lower[t.lay[x] - 1][t.low[x] - 1];
      tagged.push_back({makePair(bOf(ci, k), side), {RequestKind::LiteralToLayer, ci, k}});
    }
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<VertexPair> requests;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (i > 0 && tagged[i].first == tagged[i - 1].first) throw std::logic_error("duplicate request");
    requests.push_back(tagged[i].first);
    t.origins.push_back(tagged[i].second);
  }

  t.edgeCount = graph.m();
  Instance inst(std::move(graph), 2, std::move(requests));
  for (EdgeId e : precolored) inst.precoloring.set(e, kFalse);

  // I1 = upper u A, I2 = M, I3 = B, I4 = lower u C.
  t.fourColoring.assign(inst.graph.n(), 0);
  for (Vertex v : t.middle) t.fourColoring[v] = 2;
  for (int i = 0; i < t.side; ++i) {
    for (Vertex v : t.upper[i]) t.fourColoring[v] = 1;
    for (Vertex v : t.lower[i]) t.fourColoring[v] = 4;
  }
  for (int i = 0; i < t.clusters; ++i) {
    for (Vertex v : t.aVertices[i]) t.fourColoring[v] = 1;
    for (const auto& bs : t.bVertices[i])
      for (Vertex v : bs) t.fourColoring[v] = 3;
    for (Vertex v : t.cVertices[i]) t.fourColoring[v] = 4;
  }
  // Colors 1..3n_i inside each cluster.
  t.cgColoring.assign(inst.graph.m(), 0);
  {
    std::size_t p = 0;
    for (int i = 0; i < t.clusters; ++i)
      for (int c = 1; c <= 3 * t.clusterSizes[i]; ++c) t.cgColoring[precolored[p++]] = c;
  }

  auditSatInstance(inst, t);
  return {std::move(inst), std::move(t)};
}

void auditSatInstance(const Instance& inst, const SatTrace& t) {
  const Graph& g = inst.graph;
  const CnfFormula& phi = t.formula;
  const int n = phi.variables;
  const int mCl = static_cast<int>(phi.clauses.size());

  for (const Clause& c : phi.clauses)
    require(t.mid[variableOf(c[0])] != t.mid[variableOf(c[1])] && t.mid[variableOf(c[0])] != t.mid[variableOf(c[2])] &&
                t.mid[variableOf(c[1])] != t.mid[variableOf(c[2])],
            "P1");
  std::set<std::pair<int, int>> layerMid;
  std::set<std::array<int, 3>> images;
  for (int x = 0; x < n; ++x) {
    require(layerMid.insert({t.lay[x], t.mid[x]}).second, "P2");
    require(images.insert({t.lay[x], t.up[x], t.low[x]}).second, "h injective");
    require(t.lay[x] >= 1 && t.lay[x] <= t.side && t.up[x] >= 1 && t.up[x] <= t.rowLength && t.low[x] >= 1 &&
                t.low[x] <= t.rowLength,
            "variable map ranges");
  }

  auto commonNeighbors = [&](Vertex a, Vertex b) {
    std::set<Vertex> na, out;
    for (auto [y, e] : g.neighbors(a)) na.insert(y);
    for (auto [y, e] : g.neighbors(b))
      if (na.count(y)) out.insert(y);
    return out;
  };
  std::set<EdgeId> pathEdges;
  for (int x = 0; x < n; ++x) {
    Vertex u = t.upper[t.lay[x] - 1][t.up[x] - 1], l = t.lower[t.lay[x] - 1][t.low[x] - 1];
    require(commonNeighbors(u, l) == std::set<Vertex>{t.middle[t.mid[x] - 1]}, "P3");
    require(pathEdges.insert(t.upEdge[x]).second && pathEdges.insert(t.lowEdge[x]).second, "P4");
  }
  std::set<EdgeId> cross;
  for (int ci = 0; ci < mCl; ++ci) {
    Vertex a = t.aVertices[t.beta[ci] - 1][t.g[ci] - 1], c = t.cVertices[t.beta[ci] - 1][t.gamma[ci] - 1];
    const auto& bs = t.bVertices[t.beta[ci] - 1][t.gamma[ci] - 1];
    require(commonNeighbors(a, c) == std::set<Vertex>(bs.begin(), bs.end()), "P5");
    for (EdgeId e : t.crossEdges[ci]) require(cross.insert(e).second, "P6");
  }

  // Exact counts.
  int sumSizes = 0;
  for (int s : t.clusterSizes) sumSizes += s;
  require(static_cast<int>(t.middle.size()) == ceilTwoThirdsPower(n) + 9, "|M|");
  for (int i = 0; i < t.side; ++i)
    require(static_cast<int>(t.upper[i].size()) == t.rowLength && static_cast<int>(t.lower[i].size()) == t.rowLength,
            "layer size");
  require(g.n() == t.middleCount + 2 * t.side * t.rowLength + t.clusters * t.side + 4 * sumSizes, "|V|");
  require(g.m() == 2 * n + 3 * sumSizes + 6 * mCl, "|E|");
  require(static_cast<int>(inst.requests.size()) == n + 7 * mCl, "|S|");
  require(inst.precoloring.domainSize() == 3 * sumSizes, "|Dom(c0)|");
  for (int s : t.clusterSizes) require(s <= 13 * t.side + 25, "cluster size n_i");

  // Degree bounds from the case analysis.
  std::vector<int> sdeg(g.n(), 0);
  for (auto p : inst.requests) ++sdeg[p.u], ++sdeg[p.v];
  auto both = [&](Vertex v, int edgeBound, int requestBound, const char* what) {
    require(g.degree(v) <= edgeBound, std::string("degree of ") + what);
    require(sdeg[v] <= requestBound, std::string("request degree of ") + what);
  };
  for (int i = 0; i < t.side; ++i)
    for (int j = 0; j < t.rowLength; ++j) {
      both(t.upper[i][j], t.rowLength, 5 * t.rowLength, "u");
      both(t.lower[i][j], t.rowLength, 5 * t.rowLength, "l");
    }
  for (Vertex v : t.middle) both(v, 6 * t.side, 4 * t.side, "m");
  for (int i = 0; i < t.clusters; ++i) {
    int ni = t.clusterSizes[i];
    for (Vertex v : t.aVertices[i]) both(v, 3 * ni, 4 * ni, "a");
    for (const auto& bs : t.bVertices[i])
      for (Vertex v : bs) both(v, 2 * t.side + 1, t.side, "b");
    for (Vertex v : t.cVertices[i]) {
      require(g.degree(v) == 3, "degree of c");
      require(sdeg[v] <= t.side, "request degree of c");
    }
  }

  Graph combined = g;
  for (auto p : inst.requests) combined.addEdge(p.u, p.v);
  require(isProperVertexColoring(combined, t.fourColoring), "4-coloring of (V, E u S)");
  require(colorCount(t.fourColoring) <= 4, "4-coloring color count");
  require(isProperConflictColoring(inst, t.cgColoring), "conflict graph coloring");
}

Graph precoloringConflictGraph(const Instance& inst) {
  const Graph& g = inst.graph;
  std::vector<EdgeId> dom = inst.precoloring.domain();
  std::vector<int> pos(g.m(), -1);
  for (std::size_t i = 0; i < dom.size(); ++i) pos[dom[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> incident(g.n());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    incident[g.edge(dom[i]).u].push_back(static_cast<int>(i));
    incident[g.edge(dom[i]).v].push_back(static_cast<int>(i));
  }
  std::vector<std::vector<Vertex>> reach(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    reach[v].push_back(v);
    for (auto [y, e] : g.neighbors(v)) reach[v].push_back(y);
  }
  for (auto p : inst.effectiveRequests()) {
    reach[p.u].push_back(p.v);
    reach[p.v].push_back(p.u);
  }
  Graph cg(static_cast<int>(dom.size()));
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (Vertex u : {g.edge(dom[i]).u, g.edge(dom[i]).v})
      for (Vertex w : reach[u])
        for (int j : incident[w])
          if (j != static_cast<int>(i)) cg.addEdge(static_cast<int>(i), j);
  return cg;
}

bool isProperConflictColoring(const Instance& inst, const std::vector<int>& cg) {
  if (static_cast<int>(cg.size()) != inst.graph.m()) return false;
  std::vector<EdgeId> dom = inst.precoloring.domain();
  std::vector<int> color;
  for (EdgeId e : dom) {
    if (cg[e] < 1) return false;
    color.push_back(cg[e]);
  }
  return isProperVertexColoring(precoloringConflictGraph(inst), color);
}

int colorCount(const std::vector<int>& coloring) {
  std::set<int> used;
  for (int c : coloring)
    if (c > 0) used.insert(c);
  return static_cast<int>(used.size());
}

Coloring liftAssignment(const SatTrace& t, const Assignment& xi) {
  // Precolored edges are the only ones left at F.
  Coloring c(t.edgeCount, kFalse);
  auto tf = [](bool v) { return v ? kTrue : kFalse; };
  for (int x = 0; x < t.formula.variables; ++x) {
    c[t.upEdge[x]] = tf(xi[x]);
    c[t.lowEdge[x]] = tf(!xi[x]);
  }
  for (std::size_t ci = 0; ci < t.formula.clauses.size(); ++ci)
    for (int k = 0; k < 3; ++k) {
      bool v = literalValue(t.formula.clauses[ci][k], xi);
      c[t.clauseEdges[ci][k]] = tf(v);
      c[t.crossEdges[ci][k]] = tf(!v);
    }
  return c;
}

Assignment extractAssignment(const SatTrace& t, const Coloring& c) {
  Assignment xi(t.formula.variables, false);
  for (int x = 0; x < t.formula.variables; ++x) xi[x] = c[t.upEdge[x]] == kTrue;
  return xi;
}

StageTrace satStageTrace(const Instance& inst, const SatTrace& t) {
  StageTrace s;
  s.kind = StageKind::SatGadget;
  s.k = 2;
  s.sourceVariables = t.formula.variables;
  s.targetVertices = inst.graph.n();
  s.targetEdges = inst.graph.m();
  for (EdgeId e : inst.precoloring.domain()) s.fixedEdges.push_back({e, inst.precoloring[e]});
  for (int x = 0; x < t.formula.variables; ++x) s.variableEdges.push_back({x + 1, t.upEdge[x], t.lowEdge[x]});
  for (std::size_t ci = 0; ci < t.formula.clauses.size(); ++ci)
    for (int k = 0; k < 3; ++k)
      s.literalEdges.push_back({t.formula.clauses[ci][k], t.clauseEdges[ci][k], t.crossEdges[ci][k]});
  return s;
}

Coloring liftAssignment(const StageTrace& s, const Assignment& xi) {
  if (s.kind != StageKind::SatGadget) throw UsageError("not a SAT gadget stage");
  Coloring c(s.targetEdges, 0);
  auto tf = [](bool v) { return v ? kTrue : kFalse; };
  for (auto [e, col] : s.fixedEdges) c[e] = col;
  for (const auto& ve : s.variableEdges) {
    c[ve.up] = tf(xi[ve.variable - 1]);
    c[ve.low] = tf(!xi[ve.variable - 1]);
  }
  for (const auto& le : s.literalEdges) {
    bool v = literalValue(le.literal, xi);
    c[le.clauseEdge] = tf(v);
    c[le.crossEdge] = tf(!v);
  }
  for (Color col : c)
    if (col == 0) throw UsageError("SAT stage trace leaves an edge uncolored");
  return c;
}

Assignment extractAssignment(const StageTrace& s, const Coloring& c) {
  if (s.kind != StageKind::SatGadget) throw UsageError("not a SAT gadget stage");
  Assignment xi(s.sourceVariables, false);
  for (const auto& ve : s.variableEdges) xi[ve.variable - 1] = c[ve.up] == kTrue;
  return xi;
}

}  // namespace rainbow
