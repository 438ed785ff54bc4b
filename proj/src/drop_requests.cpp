#include <algorithm>

#include "rainbow/errors.hpp"
#include "rainbow/reduction.hpp"

namespace rainbow {

namespace {

Graph copyGraph(const Graph& g) {
  Graph out(g.n());
  for (const Edge& e : g.edges()) out.addEdge(e.u, e.v);
  return out;
}

void startTrace(StageTrace& trace, StageKind kind, int k, const Graph& source) {
  trace.kind = kind;
  trace.k = k;
  trace.sourceVertices = source.n();
  trace.sourceEdges = source.m();
  for (Vertex v = 0; v < source.n(); ++v) trace.vertexMap.push_back({v, v});
  for (EdgeId e = 0; e < source.m(); ++e) trace.edgeMap.push_back({e, e});
}

Graph checkedRequestGraph(const Instance& inst, const std::vector<int>& coloring) {
  if (inst.hasPrecoloring()) throw UsageError("request elimination needs an instance without precoloring");
  if (inst.mode != RequestMode::Explicit) throw UsageError("request elimination needs an explicit request set");
  Graph gs = pairGraph(inst.graph.n(), inst.requests);
  if (!isProperVertexColoring(gs, coloring)) throw UsageError("request coloring is not proper on (V, S)");
  return gs;
}

}  // namespace

int requestHubPairs(int q) {
  if (q <= 1) return 0;
  int bits = 0;
  while ((1LL << bits) < q + 1LL) ++bits;
  return bits;
}

DropResult dropRequests2(const Instance& inst, const std::vector<int>& requestColoring,
                         const ColoredCoverOptions& opts) {
  if (inst.k != 2) throw UsageError("dropRequests2 needs k = 2");
  Graph gs = checkedRequestGraph(inst, requestColoring);
  const Graph& g = inst.graph;

  DropResult r;
  r.cover = coverComplementColored(gs, requestColoring, opts);
  startTrace(r.trace, StageKind::DropRequests2, 2, g);

  Graph out = copyGraph(g);
  const int q = r.cover.size();
  std::vector<Vertex> w(q);
  for (int i = 0; i < q; ++i) w[i] = out.addVertex();
  Vertex t1 = out.addVertex(), t2 = out.addVertex(), t3 = out.addVertex();
  auto add = [&](Vertex a, Vertex b, Color c) { r.trace.fixedEdges.push_back({out.addEdge(a, b), c}); };
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) add(w[i], w[j], 1);
  add(t1, t2, 1);
  add(t1, t3, 1);
  add(t2, t3, 1);
  for (int i = 0; i < q; ++i) add(t2, w[i], 2);
  for (int i = 0; i < q; ++i) add(t3, w[i], 1);
  for (Vertex v = 0; v < g.n(); ++v) add(t3, v, 2);
  for (int i = 0; i < q; ++i) {
    for (Vertex u : r.cover.bicliques[i].left) add(w[i], u, 1);
    for (Vertex v : r.cover.bicliques[i].right) add(w[i], v, 2);
  }

  r.inst = Instance(std::move(out), 2);
  r.inst.mode = RequestMode::AllPairs;
  r.trace.targetVertices = r.inst.graph.n();
  r.trace.targetEdges = r.inst.graph.m();
  return r;
}

DropResult dropRequestsK(const Instance& inst, const std::vector<int>& requestColoring,
                         const ColoredCoverOptions& opts) {
  const int k = inst.k;
  if (k < 3) throw UsageError("dropRequestsK needs k >= 3");
  Graph gs = checkedRequestGraph(inst, requestColoring);
  const Graph& g = inst.graph;

  DropResult r;
  startTrace(r.trace, StageKind::DropRequestsK, k, g);
  Graph out = copyGraph(g);
  std::vector<int> coloring = requestColoring;
  bool hasIsolated = false;
  for (Vertex v = 0; v < g.n() && !hasIsolated; ++v) hasIsolated = g.degree(v) == 0;
  if (!hasIsolated) {
    out.addVertex();
    gs.addVertex();
    coloring.push_back(1);
    r.addedIsolated = true;
  }
  r.cover = coverComplementColored(gs, coloring, opts);

  const int q = r.cover.size();
  const int hubs = requestHubPairs(q);
  r.hubPairs = hubs;
  auto add = [&](Vertex a, Vertex b, Color c) { r.trace.fixedEdges.push_back({out.addEdge(a, b), c}); };

  // cyc[i][r]: v_{i,r} for r = 0..k-2; side[i][r]: w_{i,r}, sharing both ends with cyc.
  std::vector<std::vector<Vertex>> cyc(q), side(q);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j <= k - 2; ++j) cyc[i].push_back(out.addVertex());
    side[i].push_back(cyc[i][0]);
    for (int j = 1; j <= k - 3; ++j) side[i].push_back(out.addVertex());
    side[i].push_back(cyc[i][k - 2]);
  }
  std::vector<Vertex> a(hubs), b(hubs);
  for (int t = 0; t < hubs; ++t) a[t] = out.addVertex();
  for (int t = 0; t < hubs; ++t) b[t] = out.addVertex();

  for (int i = 0; i < q; ++i) {
    for (int j = 0; j + 1 <= k - 2; ++j) add(cyc[i][j], cyc[i][j + 1], j + 2);
    for (int j = 0; j + 1 <= k - 2; ++j) add(side[i][j], side[i][j + 1], k - 1 - j);
    for (Vertex u : r.cover.bicliques[i].left) add(u, cyc[i][0], 1);
    for (Vertex v : r.cover.bicliques[i].right) add(v, cyc[i][k - 2], k);
  }

  // Portals are the ends of the edge colored mid on each half of the cycle.
  const Color mid = (k + 1) / 2;
  for (int i = 0; i < q; ++i)
    for (int t = 0; t < hubs; ++t) {
      int bit = (i >> t) & 1;
      for (Vertex x : {cyc[i][mid - 2], cyc[i][mid - 1], side[i][k - 1 - mid], side[i][k - mid]}) {
        add(a[t], x, bit ? 1 : mid);
        add(b[t], x, bit ? k : mid);
      }
    }
  std::vector<Vertex> hubList = a;
  hubList.insert(hubList.end(), b.begin(), b.end());
  for (std::size_t x = 0; x < hubList.size(); ++x)
    for (std::size_t y = x + 1; y < hubList.size(); ++y) add(hubList[x], hubList[y], k);

  // Edges shared by both cycle halves (k = 3) or by two portals were recorded twice.
  auto& fe = r.trace.fixedEdges;
  std::sort(fe.begin(), fe.end());
  fe.erase(std::unique(fe.begin(), fe.end()), fe.end());
  for (std::size_t x = 1; x < fe.size(); ++x)
    if (fe[x].first == fe[x - 1].first) throw std::logic_error("gadget edge with two colors");

  r.inst = Instance(std::move(out), k);
  r.inst.mode = RequestMode::AllPairs;
  r.trace.targetVertices = r.inst.graph.n();
  r.trace.targetEdges = r.inst.graph.m();
  return r;
}

}  // namespace rainbow
