#include <algorithm>

#include "rainbow/errors.hpp"
#include "rainbow/reduction.hpp"

namespace rainbow {

namespace {

int maxColor(const std::vector<int>& coloring) {
  return coloring.empty() ? 0 : *std::max_element(coloring.begin(), coloring.end());
}

// Copies the vertices and edges of g, keeping every id.
Graph copyGraph(const Graph& g) {
  Graph out(g.n());
  for (const Edge& e : g.edges()) out.addEdge(e.u, e.v);
  return out;
}

void identityMaps(StageTrace& trace, const Graph& source) {
  trace.sourceVertices = source.n();
  trace.sourceEdges = source.m();
  for (Vertex v = 0; v < source.n(); ++v) trace.vertexMap.push_back({v, v});
  for (EdgeId e = 0; e < source.m(); ++e) trace.edgeMap.push_back({e, e});
}

void checkRequestColoring(const Instance& inst, const std::vector<int>& coloring) {
  if (!isProperVertexColoring(pairGraph(inst.graph.n(), inst.requests), coloring))
    throw UsageError("request coloring is not proper on (V, S)");
}

int modOne(int x, int y) { return 1 + (x - 1) % y; }

}  // namespace

StageResult lift2ToK(const ColoredInstance& in, int k) {
  const Instance& src = in.inst;
  const Graph& g = src.graph;
  if (k < 3) throw UsageError("lift2ToK needs k >= 3");
  if (src.k != 2) throw UsageError("lift2ToK needs a 2-color instance");
  checkRequestColoring(src, in.requestColoring);
  Graph combined = copyGraph(g);
  for (auto p : src.requests) combined.addEdge(p.u, p.v);
  if (!isProperVertexColoring(combined, in.combinedColoring))
    throw UsageError("combined coloring is not proper on (V, E u S)");
  if (!isProperConflictColoring(src, in.cgColoring)) throw UsageError("conflict graph coloring is not proper");

  const int ell = maxColor(in.cgColoring);
  const int q = maxColor(in.combinedColoring);
  const int p = maxColor(in.requestColoring);

  StageResult r;
  r.trace.kind = StageKind::LiftColors;
  r.trace.k = k;
  identityMaps(r.trace, g);

  Graph out = copyGraph(g);
  std::vector<std::pair<EdgeId, Color>> fixed;
  std::vector<std::pair<EdgeId, int>> cgNew;
  std::vector<Vertex> last(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    Vertex v11 = out.addVertex(), v12 = out.addVertex();
    std::vector<Vertex> path{-1, -1, out.addVertex()};  // path[i] = v_i for i >= 2
    for (int i = 3; i <= k - 1; ++i) path.push_back(out.addVertex());
    int h = in.combinedColoring[v];
    auto add = [&](Vertex a, Vertex b, Color c, int cg) {
      EdgeId e = out.addEdge(a, b);
      fixed.push_back({e, c});
      cgNew.push_back({e, cg});
    };
    add(v, v11, 1, ell + 2 * h - 1);
    add(v, v12, 2, ell + 2 * h);
    add(v11, path[2], 3, ell + 2 * q + 1);
    add(v12, path[2], 3, ell + 2 * q + 2);
    for (int i = 2; i <= k - 2; ++i) add(path[i], path[i + 1], i + 2, ell + 2 * q + 3 + (i - 2) % 3);
    last[v] = path[k - 1];
  }

  std::vector<VertexPair> requests = src.requests;
  for (const Edge& e : g.edges()) requests.push_back(makePair(last[e.u], e.v));

  Instance inst(std::move(out), k, std::move(requests));
  for (EdgeId e : src.precoloring.domain()) inst.precoloring.set(e, src.precoloring[e]);
  for (auto [e, c] : fixed) inst.precoloring.set(e, c);

  r.out.requestColoring = in.requestColoring;
  r.out.requestColoring.resize(inst.graph.n(), p + 1);
  r.out.cgColoring = in.cgColoring;
  r.out.cgColoring.resize(inst.graph.m(), 0);
  for (auto [e, c] : cgNew) r.out.cgColoring[e] = c;

  r.trace.fixedEdges = std::move(fixed);
  r.trace.targetVertices = inst.graph.n();
  r.trace.targetEdges = inst.graph.m();
  r.out.inst = std::move(inst);
  return r;
}

StageResult dropExtension(const ColoredInstance& in) {
  const Instance& src = in.inst;
  const Graph& g = src.graph;
  const int k = src.k;
  if (k < 3) throw CapabilityError("precoloring elimination is only constructed for k >= 3");
  checkRequestColoring(src, in.requestColoring);
  if (!isProperConflictColoring(src, in.cgColoring)) throw UsageError("conflict graph coloring is not proper");

  std::vector<EdgeId> dom = src.precoloring.domain();
  const int ell = maxColor(in.cgColoring);
  const int p = maxColor(in.requestColoring);

  // Rebalance classes to at most ceil(|Dom|/ell) edges each; f takes values 1..ellPrime.
  std::vector<int> f(g.m(), 0);
  int ellPrime = 0;
  if (!dom.empty()) {
    int cap = (static_cast<int>(dom.size()) + ell - 1) / ell;
    for (int c = 1; c <= ell; ++c) {
      int count = 0;
      for (EdgeId e : dom) {
        if (in.cgColoring[e] != c) continue;
        if (count++ % cap == 0) ++ellPrime;
        f[e] = ellPrime;
      }
    }
  }

  StageResult r;
  r.trace.kind = StageKind::DropExtension;
  r.trace.k = k;
  identityMaps(r.trace, g);

  Graph out = copyGraph(g);
  const int len = 3 * k * k * ellPrime;
  std::vector<Vertex> path(len + 1, -1);  // 1-based
  for (int i = 1; i <= len; ++i) path[i] = out.addVertex();
  std::vector<VertexPair> requests = src.requests;
  for (int i = 1; i < len; ++i) r.trace.fixedEdges.push_back({out.addEdge(path[i], path[i + 1]), modOne(i, k)});
  for (int i = 1; i + k <= len; ++i) requests.push_back(makePair(path[i], path[i + k]));
  for (EdgeId e : dom) {
    Vertex u = g.edge(e).u, v = g.edge(e).v;
    int c0 = src.precoloring[e];
    int prj = (f[e] - 1) * 3 * k * k + (c0 - 1) * 3 * k + c0;
    r.trace.fixedEdges.push_back({out.addEdge(path[prj + k - 1], u), modOne(c0 - 1 + k, k)});
    requests.push_back(makePair(path[prj], u));
    requests.push_back(makePair(path[prj + 1], v));
  }
  if (out.m() != g.m() + std::max(len - 1, 0) + static_cast<int>(dom.size()))
    throw std::logic_error("anchor edges collide");

  Instance inst(std::move(out), k, std::move(requests));
  r.out.requestColoring = in.requestColoring;
  r.out.requestColoring.resize(inst.graph.n(), 0);
  for (int i = 1; i <= len; ++i) r.out.requestColoring[path[i]] = p + 1 + ((i - 1) / k) % 2;
  r.trace.targetVertices = inst.graph.n();
  r.trace.targetEdges = inst.graph.m();
  r.out.inst = std::move(inst);
  return r;
}

}  // namespace rainbow
