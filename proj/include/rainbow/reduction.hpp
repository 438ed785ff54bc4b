#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "rainbow/biclique.hpp"
#include "rainbow/cnf.hpp"
#include "rainbow/instance.hpp"

namespace rainbow {

enum class StageKind { Tovey, SatGadget, LiftColors, DropExtension, DropRequests2, DropRequestsK };

std::string stageName(StageKind kind);
StageKind parseStageName(const std::string& name);

// Correspondences of one stage. "Source" is the stage input, "target" its output.
struct StageTrace {
  StageKind kind = StageKind::Tovey;
  int k = 2;  // colors of the target instance
  int sourceVertices = 0, sourceEdges = 0;
  int targetVertices = 0, targetEdges = 0;
  int sourceVariables = 0, targetVariables = 0;

  std::vector<std::pair<Vertex, Vertex>> vertexMap;
  std::vector<std::pair<EdgeId, EdgeId>> edgeMap;
  // Target edges whose witness color does not depend on the source witness.
  std::vector<std::pair<EdgeId, Color>> fixedEdges;

  // Tovey: copies of each source variable (first = representative) and forced target variables.
  std::vector<std::pair<int, int>> copies;
  std::vector<std::pair<int, bool>> constants;

  // SAT gadget: the two edges of each variable path and the two edges of each literal.
  struct VariableEdges {
    int variable;
    EdgeId up, low;
    bool operator==(const VariableEdges&) const = default;
  };
  struct LiteralEdges {
    Literal literal;
    EdgeId clauseEdge, crossEdge;
    bool operator==(const LiteralEdges&) const = default;
  };
  std::vector<VariableEdges> variableEdges;
  std::vector<LiteralEdges> literalEdges;

  bool operator==(const StageTrace&) const = default;
};

using PipelineTrace = std::vector<StageTrace>;

std::string serializeTrace(const PipelineTrace& trace);
PipelineTrace parseTrace(std::istream& in);
PipelineTrace parseTrace(const std::string& text);

// ---- Tovey normalization ----

std::pair<CnfFormula, StageTrace> toveyNormalize(const CnfFormula& phi);
Assignment toveyLift(const StageTrace& trace, const Assignment& xi);
Assignment toveyRestrict(const StageTrace& trace, const Assignment& xi);

// ---- SAT to Subset Rainbow 2-Coloring Extension ----

inline constexpr Color kTrue = 1;
inline constexpr Color kFalse = 2;

enum class RequestKind { VariablePath, ClausePair, MiddleToA, LiteralToLayer };

struct RequestOrigin {
  RequestKind kind;
  int index;     // variable (0-based) or clause (0-based)
  int position;  // literal position 0..2, or -1
  bool operator==(const RequestOrigin&) const = default;
};

struct SatTrace {
  CnfFormula formula;
  int side = 0;         // ceil(n^{1/3})
  int rowLength = 0;    // side + 3
  int middleCount = 0;  // ceil(n^{2/3}) + 9
  int clusters = 0;
  int edgeCount = 0;

  // Per variable (0-based). All values 1-based.
  std::vector<int> alpha, mid, lay, up, low;
  // Per clause (0-based). All values 1-based.
  std::vector<int> beta, gamma, g;
  std::vector<int> clusterSizes;  // n_i

  std::vector<Vertex> middle;                                 // m_j
  std::vector<std::vector<Vertex>> upper, lower;              // [layer][j]
  std::vector<std::vector<Vertex>> aVertices, cVertices;      // [cluster][j]
  std::vector<std::vector<std::array<Vertex, 3>>> bVertices;  // [cluster][j][k]
  std::vector<std::string> names;                             // per vertex

  std::vector<EdgeId> upEdge, lowEdge;                  // per variable
  std::vector<std::array<EdgeId, 3>> clauseEdges;       // a - b^k per clause
  std::vector<std::array<EdgeId, 3>> crossEdges;        // b^k - mid per clause
  std::vector<RequestOrigin> origins;                   // aligned with the instance's requests

  std::vector<int> fourColoring;  // proper on (V, E u S)
  std::vector<int> cgColoring;    // per edge id, 0 off Dom(c0); proper on the conflict graph
};

int ceilCubeRoot(long long n);
int ceilTwoThirdsPower(long long n);

// Throws UsageError unless phi is in Tovey form.
std::pair<Instance, SatTrace> satToSR2CExt(const CnfFormula& phi);
// Checks P1-P6, injectivity of h, the degree bounds and both colorings; throws std::logic_error.
void auditSatInstance(const Instance& inst, const SatTrace& trace);

// Vertex i is the i-th edge of Dom(c0) in ascending order.
Graph precoloringConflictGraph(const Instance& inst);
// cg is indexed by edge id.
bool isProperConflictColoring(const Instance& inst, const std::vector<int>& cg);

Coloring liftAssignment(const SatTrace& trace, const Assignment& xi);
Assignment extractAssignment(const SatTrace& trace, const Coloring& c);
StageTrace satStageTrace(const Instance& inst, const SatTrace& trace);
Coloring liftAssignment(const StageTrace& trace, const Assignment& xi);
Assignment extractAssignment(const StageTrace& trace, const Coloring& c);

// ---- graph stages ----

// An instance with the proper colorings later stages consume.
struct ColoredInstance {
  Instance inst;
  std::vector<int> requestColoring;   // per vertex, proper on (V, S)
  std::vector<int> combinedColoring;  // per vertex, proper on (V, E u S); may be empty
  std::vector<int> cgColoring;        // per edge id, 0 off Dom(c0)
};

struct StageResult {
  ColoredInstance out;
  StageTrace trace;
};

int colorCount(const std::vector<int>& coloring);

// k >= 3; the input holds a 2-color instance with all three colorings.
StageResult lift2ToK(const ColoredInstance& in, int k);
// k >= 3; uses the CG coloring and the request coloring.
StageResult dropExtension(const ColoredInstance& in);

struct DropResult {
  Instance inst;  // plain Rainbow k-Coloring (all anti-edges requested)
  StageTrace trace;
  BicliqueCover cover;
  bool addedIsolated = false;
  int hubPairs = 0;
};

DropResult dropRequests2(const Instance& inst, const std::vector<int>& requestColoring,
                         const ColoredCoverOptions& opts = {});
DropResult dropRequestsK(const Instance& inst, const std::vector<int>& requestColoring,
                         const ColoredCoverOptions& opts = {});

// Hub pairs for q bicliques: enough bits that no biclique index is all ones; 0 when q <= 1.
int requestHubPairs(int q);

// Source witness to target witness, and target witness restricted back to the source.
Coloring liftColoring(const StageTrace& trace, const Coloring& source);
Coloring restrictColoring(const StageTrace& trace, const Coloring& target);

// ---- end-to-end ----

enum class CompileTarget { SR2CExt, SRkCExt, SRkC, RkC };

std::string targetName(CompileTarget t);
CompileTarget parseTargetName(const std::string& name);

struct CompileOptions {
  int k = 3;
  CompileTarget target = CompileTarget::RkC;
  ColoredCoverOptions cover;
};

struct StageSize {
  std::string stage;
  int vertices = 0, edges = 0, requests = 0, precolored = 0;
  int requestColors = 0, conflictColors = 0;
};

struct SizeCheck {
  std::string stage;
  std::string quantity;
  long long expected = 0;
  long long actual = 0;
  bool upperBound = false;  // actual may fall below expected
  bool holds() const { return upperBound ? actual <= expected : actual == expected; }
};

struct SizeReport {
  std::vector<StageSize> stages;
  std::vector<SizeCheck> checks;
  bool ok() const;
  std::string str() const;
};

struct CompileResult {
  CnfFormula normalized;
  SatTrace sat;
  PipelineTrace trace;
  std::vector<Instance> instances;  // output of every graph stage, in order
  SizeReport report;
  const Instance& final() const { return instances.back(); }
};

// Throws CapabilityError for chains past SR2CExt with k = 2.
CompileResult compile(const CnfFormula& phi, const CompileOptions& opts = {});

// Witness of the target of every graph stage, for a satisfying assignment of the source formula.
std::vector<Coloring> liftThrough(const PipelineTrace& trace, const Assignment& xi);
// Assignment of the source formula from a witness of the last stage.
Assignment pullBack(const PipelineTrace& trace, const Coloring& c);

}  // namespace rainbow
