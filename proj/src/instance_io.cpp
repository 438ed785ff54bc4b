#include <fstream>
#include <sstream>

#include "rainbow/errors.hpp"
#include "rainbow/instance.hpp"

namespace rainbow {

void PartialColoring::set(EdgeId e, Color c) {
  if (c < 1 || c > k_) throw UsageError("color " + std::to_string(c) + " out of range 1.." + std::to_string(k_));
  values_[e] = c;
}

int PartialColoring::domainSize() const {
  int count = 0;
  for (Color c : values_) count += c != kUnset;
  return count;
}

std::vector<EdgeId> PartialColoring::domain() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < m(); ++e)
    if (isSet(e)) out.push_back(e);
  return out;
}

Coloring PartialColoring::completed(Color fill) const {
  Coloring c(values_);
  for (Color& x : c)
    if (x == kUnset) x = fill;
  return c;
}

bool PartialColoring::extendedBy(const Coloring& c) const {
  if (static_cast<int>(c.size()) != m()) return false;
  for (EdgeId e = 0; e < m(); ++e)
    if (isSet(e) && c[e] != values_[e]) return false;
  return true;
}

Instance::Instance(Graph g, int k_, std::vector<VertexPair> reqs)
    : graph(std::move(g)), k(k_), requests(normalizePairs(std::move(reqs))), precoloring(graph.m(), k_) {}

std::vector<VertexPair> Instance::effectiveRequests() const {
  if (mode == RequestMode::AllPairs) return antiEdges(graph);
  std::vector<VertexPair> out;
  for (auto p : requests)
    if (!graph.adjacent(p.u, p.v)) out.push_back(p);
  return normalizePairs(std::move(out));
}

bool Instance::operator==(const Instance& other) const {
  return graph == other.graph && k == other.k && mode == other.mode && requests == other.requests &&
         precoloring.values() == other.precoloring.values();
}

void validateInstance(const Instance& inst) {
  if (inst.k < 1) throw UsageError("k must be positive");
  if (inst.precoloring.m() != inst.graph.m()) throw UsageError("precoloring size differs from edge count");
  for (Color c : inst.precoloring.values())
    if (c != PartialColoring::kUnset && (c < 1 || c > inst.k)) throw UsageError("precolor out of range");
  for (auto p : inst.requests)
    if (p.u < 0 || p.v >= inst.graph.n() || p.u == p.v) throw UsageError("request out of range");
}

namespace {

int toVertex(long long x, int n, int line) {
  if (x < 1 || x > n) throw FormatError(line, "vertex " + std::to_string(x) + " out of range 1.." + std::to_string(n));
  return static_cast<int>(x - 1);
}

}  // namespace

Instance parseInstance(std::istream& in) {
  Instance inst;
  bool header = false;
  bool explicitCount = false;
  int declaredEdges = 0;
  std::vector<VertexPair> requests;
  std::vector<std::tuple<int, int, int, int>> colored;  // u, v, color, line
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      if (header) throw FormatError(lineNo, "duplicate p-line");
      std::string kind;
      long long n, m, k;
      if (!(ls >> kind >> n >> m >> k) || kind != "rbw") throw FormatError(lineNo, "expected 'p rbw n m k'");
      if (n < 0 || m < 0 || k < 1) throw FormatError(lineNo, "bad p-line values");
      long long s;
      if (ls >> s) explicitCount = true;
      inst.graph = Graph(static_cast<int>(n));
      inst.k = static_cast<int>(k);
      declaredEdges = static_cast<int>(m);
      header = true;
      continue;
    }
    if (!header) throw FormatError(lineNo, "'" + tag + "' line before p-line");
    long long a, b;
    if (!(ls >> a >> b)) throw FormatError(lineNo, "expected two vertices");
    int u = toVertex(a, inst.graph.n(), lineNo), v = toVertex(b, inst.graph.n(), lineNo);
    if (u == v) throw FormatError(lineNo, "self-loop");
    if (tag == "e") {
      if (inst.graph.adjacent(u, v)) throw FormatError(lineNo, "duplicate edge");
      inst.graph.addEdge(u, v);
    } else if (tag == "r") {
      requests.push_back(makePair(u, v));
    } else if (tag == "f") {
      long long col;
      if (!(ls >> col)) throw FormatError(lineNo, "missing color");
      if (col < 1 || col > inst.k) throw FormatError(lineNo, "color out of range");
      colored.emplace_back(u, v, static_cast<int>(col), lineNo);
    } else {
      throw FormatError(lineNo, "unknown line tag '" + tag + "'");
    }
  }
  if (!header) throw FormatError(lineNo, "missing p-line");
  if (inst.graph.m() != declaredEdges)
    throw FormatError(lineNo, "p-line declares " + std::to_string(declaredEdges) + " edges, found " +
                                  std::to_string(inst.graph.m()));
  inst.precoloring = PartialColoring(inst.graph.m(), inst.k);
  for (auto [u, v, col, line] : colored) {
    auto e = inst.graph.edgeBetween(u, v);
    if (!e) throw FormatError(line, "precolored pair is not an edge");
    inst.precoloring.set(*e, col);
  }
  inst.mode = (requests.empty() && !explicitCount) ? RequestMode::AllPairs : RequestMode::Explicit;
  inst.requests = normalizePairs(std::move(requests));
  return inst;
}

Instance parseInstance(const std::string& text) {
  std::istringstream in(text);
  return parseInstance(in);
}

std::string serializeInstance(const Instance& inst, const std::string& comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "c " << comment << "\n";
  out << "p rbw " << inst.graph.n() << " " << inst.graph.m() << " " << inst.k;
  if (inst.mode == RequestMode::Explicit) out << " " << inst.requests.size();
  out << "\n";
  for (const auto& e : inst.graph.edges()) out << "e " << e.u + 1 << " " << e.v + 1 << "\n";
  if (inst.mode == RequestMode::Explicit)
    for (auto p : inst.requests) out << "r " << p.u + 1 << " " << p.v + 1 << "\n";
  for (EdgeId e = 0; e < inst.precoloring.m(); ++e)
    if (inst.precoloring.isSet(e))
      out << "f " << inst.graph.edge(e).u + 1 << " " << inst.graph.edge(e).v + 1 << " " << inst.precoloring[e] << "\n";
  return out.str();
}

std::string serializeColoring(const Graph& g, const std::optional<Coloring>& c) {
  if (!c) return "NULL\n";
  std::ostringstream out;
  for (EdgeId e = 0; e < g.m(); ++e) out << g.edge(e).u + 1 << " " << g.edge(e).v + 1 << " " << (*c)[e] << "\n";
  return out.str();
}

std::optional<Coloring> parseColoring(const Graph& g, std::istream& in) {
  Coloring c(g.m(), 0);
  std::string raw;
  int lineNo = 0;
  bool any = false;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::istringstream ls(raw);
    std::string first;
    if (!(ls >> first) || first == "c") continue;
    if (first == "NULL") {
      if (any) throw FormatError(lineNo, "NULL mixed with edge lines");
      return std::nullopt;
    }
    std::istringstream rest(raw);
    long long a, b, col;
    if (!(rest >> a >> b >> col)) throw FormatError(lineNo, "expected 'u v color'");
    int u = toVertex(a, g.n(), lineNo), v = toVertex(b, g.n(), lineNo);
    auto e = g.edgeBetween(u, v);
    if (!e) throw FormatError(lineNo, "colored pair is not an edge");
    if (col < 1) throw FormatError(lineNo, "color must be positive");
    c[*e] = static_cast<Color>(col);
    any = true;
  }
  for (EdgeId e = 0; e < g.m(); ++e)
    if (c[e] == 0) throw FormatError(lineNo, "edge " + std::to_string(g.edge(e).u + 1) + " " +
                                                 std::to_string(g.edge(e).v + 1) + " has no color");
  return c;
}

std::optional<Coloring> parseColoring(const Graph& g, const std::string& text) {
  std::istringstream in(text);
  return parseColoring(g, in);
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

}  // namespace rainbow
