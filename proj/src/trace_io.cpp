#include <map>
#include <sstream>

#include "rainbow/errors.hpp"
#include "rainbow/reduction.hpp"

namespace rainbow {

namespace {

const std::map<StageKind, std::string>& stageNames() {
  static const std::map<StageKind, std::string> names{
      {StageKind::Tovey, "tovey"},     {StageKind::SatGadget, "sat"},          {StageKind::LiftColors, "lift"},
      {StageKind::DropExtension, "dropext"}, {StageKind::DropRequests2, "dropreq2"}, {StageKind::DropRequestsK, "dropreqk"}};
  return names;
}

// Scalar fields in file order.
std::vector<std::pair<std::string, int StageTrace::*>> params() {
  return {{"k", &StageTrace::k},
          {"source_vertices", &StageTrace::sourceVertices},
          {"source_edges", &StageTrace::sourceEdges},
          {"target_vertices", &StageTrace::targetVertices},
          {"target_edges", &StageTrace::targetEdges},
          {"source_variables", &StageTrace::sourceVariables},
          {"target_variables", &StageTrace::targetVariables}};
}

}  // namespace

std::string stageName(StageKind kind) { return stageNames().at(kind); }

StageKind parseStageName(const std::string& name) {
  for (const auto& [kind, n] : stageNames())
    if (n == name) return kind;
  throw UsageError("unknown stage '" + name + "'");
}

std::string serializeTrace(const PipelineTrace& trace) {
  std::ostringstream out;
  for (const StageTrace& s : trace) {
    out << "stage " << stageName(s.kind) << '\n';
    for (const auto& [name, field] : params()) out << "param " << name << ' ' << s.*field << '\n';
    for (auto [a, b] : s.vertexMap) out << "map vertex " << a << ' ' << b << '\n';
    for (auto [a, b] : s.edgeMap) out << "map edge " << a << ' ' << b << '\n';
    for (auto [e, c] : s.fixedEdges) out << "map fixed " << e << ' ' << c << '\n';
    for (auto [a, b] : s.copies) out << "map copy " << a << ' ' << b << '\n';
    for (auto [v, value] : s.constants) out << "map const " << v << ' ' << (value ? 1 : 0) << '\n';
    for (const auto& ve : s.variableEdges) out << "map variable " << ve.variable << ' ' << ve.up << ' ' << ve.low << '\n';
    for (const auto& le : s.literalEdges)
      out << "map literal " << le.literal << ' ' << le.clauseEdge << ' ' << le.crossEdge << '\n';
    out << "end\n";
  }
  return out.str();
}

PipelineTrace parseTrace(std::istream& in) {
  PipelineTrace trace;
  StageTrace* cur = nullptr;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto ints = [&](int count) {
      std::vector<long long> v(count);
      for (auto& x : v)
        if (!(ls >> x)) throw FormatError(lineNo, "expected " + std::to_string(count) + " integers");
      std::string extra;
      if (ls >> extra) throw FormatError(lineNo, "trailing token '" + extra + "'");
      return v;
    };
    if (tag == "stage") {
      std::string name;
      if (cur) throw FormatError(lineNo, "stage without end");
      if (!(ls >> name)) throw FormatError(lineNo, "missing stage name");
      try {
        trace.push_back({});
        trace.back().kind = parseStageName(name);
      } catch (const UsageError& e) {
        throw FormatError(lineNo, e.what());
      }
      cur = &trace.back();
      continue;
    }
    if (!cur) throw FormatError(lineNo, "record outside a stage");
    if (tag == "end") {
      cur = nullptr;
    } else if (tag == "param") {
      std::string name;
      ls >> name;
      bool known = false;
      for (const auto& [pn, field] : params())
        if (pn == name) {
          cur->*field = static_cast<int>(ints(1)[0]);
          known = true;
        }
      if (!known) throw FormatError(lineNo, "unknown param '" + name + "'");
    } else if (tag == "map") {
      std::string kind;
      ls >> kind;
      if (kind == "vertex") {
        auto v = ints(2);
        cur->vertexMap.push_back({static_cast<int>(v[0]), static_cast<int>(v[1])});
      } else if (kind == "edge") {
        auto v = ints(2);
        cur->edgeMap.push_back({static_cast<int>(v[0]), static_cast<int>(v[1])});
      } else if (kind == "fixed") {
        auto v = ints(2);
        cur->fixedEdges.push_back({static_cast<int>(v[0]), static_cast<int>(v[1])});
      } else if (kind == "copy") {
        auto v = ints(2);
        cur->copies.push_back({static_cast<int>(v[0]), static_cast<int>(v[1])});
      } else if (kind == "const") {
        auto v = ints(2);
        if (v[1] != 0 && v[1] != 1) throw FormatError(lineNo, "constant must be 0 or 1");
        cur->constants.push_back({static_cast<int>(v[0]), v[1] == 1});
      } else if (kind == "variable") {
        auto v = ints(3);
        cur->variableEdges.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
      } else if (kind == "literal") {
        auto v = ints(3);
        cur->literalEdges.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
      } else {
        throw FormatError(lineNo, "unknown map kind '" + kind + "'");
      }
    } else {
      throw FormatError(lineNo, "unknown record '" + tag + "'");
    }
  }
  if (cur) throw FormatError(lineNo, "missing end");
  return trace;
}

PipelineTrace parseTrace(const std::string& text) {
  std::istringstream in(text);
  return parseTrace(in);
}

}  // namespace rainbow
