#include <algorithm>
#include <map>
#include <sstream>

#include "rainbow/errors.hpp"
#include "rainbow/reduction.hpp"

namespace rainbow {

namespace {

const std::map<CompileTarget, std::string>& targetNames() {
  static const std::map<CompileTarget, std::string> names{{CompileTarget::SR2CExt, "sr2cext"},
                                                          {CompileTarget::SRkCExt, "srkcext"},
                                                          {CompileTarget::SRkC, "srkc"},
                                                          {CompileTarget::RkC, "rc"}};
  return names;
}

int maxColor(const std::vector<int>& coloring) {
  return coloring.empty() ? 0 : *std::max_element(coloring.begin(), coloring.end());
}

StageSize measure(const std::string& stage, const Instance& inst, const std::vector<int>& requestColoring,
                  const std::vector<int>& cgColoring) {
  StageSize s;
  s.stage = stage;
  s.vertices = inst.graph.n();
  s.edges = inst.graph.m();
  s.requests = static_cast<int>(inst.mode == RequestMode::AllPairs ? antiEdges(inst.graph).size() : inst.requests.size());
  s.precolored = inst.precoloring.domainSize();
  s.requestColors = colorCount(requestColoring);
  s.conflictColors = colorCount(cgColoring);
  return s;
}

}  // namespace

std::string targetName(CompileTarget t) { return targetNames().at(t); }

CompileTarget parseTargetName(const std::string& name) {
  for (const auto& [t, n] : targetNames())
    if (n == name) return t;
  throw UsageError("unknown target '" + name + "' (sr2cext, srkcext, srkc, rc)");
}

Coloring liftColoring(const StageTrace& trace, const Coloring& source) {
  if (trace.kind == StageKind::Tovey || trace.kind == StageKind::SatGadget)
    throw UsageError("stage '" + stageName(trace.kind) + "' does not map colorings");
  if (static_cast<int>(source.size()) != trace.sourceEdges) throw UsageError("source coloring has the wrong size");
  Coloring c(trace.targetEdges, 0);
  for (auto [from, to] : trace.edgeMap) c[to] = source[from];
  for (auto [e, col] : trace.fixedEdges) c[e] = col;
  for (Color col : c)
    if (col == 0) throw UsageError("trace leaves a target edge uncolored");
  return c;
}

Coloring restrictColoring(const StageTrace& trace, const Coloring& target) {
  if (trace.kind == StageKind::Tovey || trace.kind == StageKind::SatGadget)
    throw UsageError("stage '" + stageName(trace.kind) + "' does not map colorings");
  if (static_cast<int>(target.size()) != trace.targetEdges) throw UsageError("target coloring has the wrong size");
  Coloring c(trace.sourceEdges, 0);
  for (auto [from, to] : trace.edgeMap) c[from] = target[to];
  // The path requests force the path to repeat some permutation of the colors; undo it.
  if (trace.kind == StageKind::DropExtension && static_cast<int>(trace.fixedEdges.size()) >= trace.k) {
    std::vector<Color> inverse(trace.k + 1, 0);
    for (int j = 0; j < trace.k; ++j) {
      auto [e, intended] = trace.fixedEdges[j];
      Color actual = target[e];
      if (actual < 1 || actual > trace.k || inverse[actual]) return c;
      inverse[actual] = intended;
    }
    for (Color& col : c)
      if (col >= 1 && col <= trace.k) col = inverse[col];
  }
  return c;
}

bool SizeReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const SizeCheck& c) { return c.holds(); });
}

std::string SizeReport::str() const {
  std::ostringstream out;
  for (const StageSize& s : stages)
    out << "stage=" << s.stage << " vertices=" << s.vertices << " edges=" << s.edges << " requests=" << s.requests
        << " precolored=" << s.precolored << " request_colors=" << s.requestColors
        << " conflict_colors=" << s.conflictColors << '\n';
  for (const SizeCheck& c : checks)
    out << "check stage=" << c.stage << " quantity=" << c.quantity << (c.upperBound ? " bound=" : " expected=")
        << c.expected << " actual=" << c.actual << " ok=" << (c.holds() ? 1 : 0) << '\n';
  return out.str();
}

CompileResult compile(const CnfFormula& phi, const CompileOptions& opts) {
  const int k = opts.k;
  if (k < 2) throw UsageError("k must be at least 2");
  if (k == 2 && (opts.target == CompileTarget::SRkC || opts.target == CompileTarget::RkC))
    throw CapabilityError("with k = 2 the chain stops at Subset Rainbow 2-Coloring Extension: "
                          "precoloring elimination is only constructed for k >= 3");

  CompileResult r;
  SizeReport& rep = r.report;
  auto check = [&](const std::string& stage, const std::string& what, long long expected, long long actual,
                   bool bound = false) { rep.checks.push_back({stage, what, expected, actual, bound}); };

  auto [psi, toveyTrace] = toveyNormalize(phi);
  r.normalized = psi;
  r.trace.push_back(std::move(toveyTrace));

  auto [inst2, sat] = satToSR2CExt(r.normalized);
  {
    const int n = r.normalized.variables, m = static_cast<int>(r.normalized.clauses.size());
    int sumSizes = 0;
    for (int s : sat.clusterSizes) sumSizes += s;
    check("sat", "middle", ceilTwoThirdsPower(n) + 9, static_cast<long long>(sat.middle.size()));
    for (int i = 0; i < sat.side; ++i) {
      check("sat", "upper_layer_" + std::to_string(i + 1), ceilCubeRoot(n) + 3, static_cast<long long>(sat.upper[i].size()));
      check("sat", "lower_layer_" + std::to_string(i + 1), ceilCubeRoot(n) + 3, static_cast<long long>(sat.lower[i].size()));
    }
    // Layer vertices touch only the variable paths.
    int variableEdges = 0;
    for (int i = 0; i < sat.side; ++i)
      for (int j = 0; j < sat.rowLength; ++j)
        variableEdges += inst2.graph.degree(sat.upper[i][j]) + inst2.graph.degree(sat.lower[i][j]);
    check("sat", "variable_edges", 2LL * n, variableEdges);
    for (int i = 0; i < sat.clusters; ++i) {
      int colored = 0;
      for (const auto& bs : sat.bVertices[i])
        for (Vertex b : bs)
          for (auto [y, e] : inst2.graph.neighbors(b)) colored += inst2.precoloring.isSet(e);
      check("sat", "cluster_precolored_" + std::to_string(i + 1), 3LL * sat.clusterSizes[i], colored);
    }
    check("sat", "edges", 2LL * n + 3LL * sumSizes + 6LL * m, inst2.graph.m());
    check("sat", "requests", static_cast<long long>(n) + 7LL * m, static_cast<long long>(inst2.requests.size()));
    check("sat", "request_colors", 4, colorCount(sat.fourColoring), true);
  }
  rep.stages.push_back(measure("sat", inst2, sat.fourColoring, sat.cgColoring));
  r.trace.push_back(satStageTrace(inst2, sat));
  r.instances.push_back(inst2);
  r.sat = std::move(sat);
  if (k == 2 || opts.target == CompileTarget::SR2CExt) return r;

  ColoredInstance ci{r.instances.back(), r.sat.fourColoring, r.sat.fourColoring, r.sat.cgColoring};
  StageResult lifted = lift2ToK(ci, k);
  {
    const Instance& a = ci.inst;
    const Instance& b = lifted.out.inst;
    const long long n = a.graph.n();
    check("lift", "vertices", n + k * n, b.graph.n());
    check("lift", "edges", a.graph.m() + (k + 1) * n, b.graph.m());
    check("lift", "requests", static_cast<long long>(a.requests.size()) + a.graph.m(),
          static_cast<long long>(b.requests.size()));
    check("lift", "precolored", a.precoloring.domainSize() + (k + 1) * n, b.precoloring.domainSize());
    check("lift", "max_degree", std::max(a.graph.maxDegree(), 1) + 2, b.graph.maxDegree(), true);
    check("lift", "request_colors", colorCount(ci.requestColoring) + 1, colorCount(lifted.out.requestColoring));
    check("lift", "conflict_colors", maxColor(ci.cgColoring) + 2LL * maxColor(ci.combinedColoring) + 5,
          colorCount(lifted.out.cgColoring), true);
  }
  rep.stages.push_back(measure("lift", lifted.out.inst, lifted.out.requestColoring, lifted.out.cgColoring));
  r.trace.push_back(lifted.trace);
  r.instances.push_back(lifted.out.inst);
  if (opts.target == CompileTarget::SRkCExt) return r;

  StageResult dropped = dropExtension(lifted.out);
  {
    const Instance& a = lifted.out.inst;
    const Instance& b = dropped.out.inst;
    const long long dom = a.precoloring.domainSize();
    const long long ell = maxColor(lifted.out.cgColoring);
    long long ellPrime = 0;
    if (dom > 0) {
      long long cap = (dom + ell - 1) / ell;
      std::map<int, long long> classSize;
      for (int c : lifted.out.cgColoring)
        if (c > 0) ++classSize[c];
      for (auto [c, size] : classSize) ellPrime += (size + cap - 1) / cap;
    }
    const long long len = 3LL * k * k * ellPrime;
    check("dropext", "added_vertices", len, b.graph.n() - a.graph.n());
    check("dropext", "edges", a.graph.m() + std::max(len - 1, 0LL) + dom, b.graph.m());
    check("dropext", "requests", static_cast<long long>(a.requests.size()) + std::max(len - k, 0LL) + 2 * dom,
          static_cast<long long>(b.requests.size()));
    check("dropext", "precolored", 0, b.precoloring.domainSize());
    check("dropext", "request_colors", colorCount(lifted.out.requestColoring) + 2,
          colorCount(dropped.out.requestColoring), true);
  }
  rep.stages.push_back(measure("dropext", dropped.out.inst, dropped.out.requestColoring, {}));
  r.trace.push_back(dropped.trace);
  r.instances.push_back(dropped.out.inst);
  if (opts.target == CompileTarget::SRkC) return r;

  DropResult dr = dropRequestsK(dropped.out.inst, dropped.out.requestColoring, opts.cover);
  {
    const Graph& a = dropped.out.inst.graph;
    const Graph& b = dr.inst.graph;
    const long long q = dr.cover.size(), lg = requestHubPairs(dr.cover.size());
    // Each biclique gadget is the cycle v_{i,0..k-2}, w_{i,k-3..1}: 2(k-2) vertices.
    check("dropreqk", "added_vertices", (dr.addedIsolated ? 1 : 0) + 2LL * (k - 2) * q + 2 * lg, b.n() - a.n());
    check("dropreqk", "added_edges", q * (2LL * (k - 1) + a.n() + 1 + 8 * lg) + 2 * lg * lg, b.m() - a.m(), true);
  }
  rep.stages.push_back(measure("dropreqk", dr.inst, {}, {}));
  r.trace.push_back(dr.trace);
  r.instances.push_back(dr.inst);
  return r;
}

std::vector<Coloring> liftThrough(const PipelineTrace& trace, const Assignment& xi) {
  std::vector<Coloring> out;
  Assignment a = xi;
  for (const StageTrace& s : trace) {
    switch (s.kind) {
      case StageKind::Tovey:
        a = toveyLift(s, a);
        break;
      case StageKind::SatGadget:
        out.push_back(liftAssignment(s, a));
        break;
      default:
        if (out.empty()) throw UsageError("graph stage before the SAT gadget stage");
        out.push_back(liftColoring(s, out.back()));
    }
  }
  return out;
}

Assignment pullBack(const PipelineTrace& trace, const Coloring& c) {
  Coloring cur = c;
  Assignment a;
  bool haveAssignment = false;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    switch (it->kind) {
      case StageKind::Tovey:
        if (!haveAssignment) throw UsageError("Tovey stage without an assignment");
        a = toveyRestrict(*it, a);
        break;
      case StageKind::SatGadget:
        a = extractAssignment(*it, cur);
        haveAssignment = true;
        break;
      default:
        cur = restrictColoring(*it, cur);
    }
  }
  if (!haveAssignment) throw UsageError("trace has no SAT gadget stage");
  return a;
}

}  // namespace rainbow
