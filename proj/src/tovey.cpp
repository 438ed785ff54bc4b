#include <algorithm>
#include <cstdlib>

#include "rainbow/errors.hpp"
#include "rainbow/reduction.hpp"

namespace rainbow {

namespace {

inline constexpr int kMaxOccurrences = 4;

// Drops repeated literals; returns false for a tautology.
bool cleanClause(Clause& c) {
  Clause out;
  for (Literal l : c) {
    if (std::find(out.begin(), out.end(), -l) != out.end()) return false;
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  c = std::move(out);
  return true;
}

}  // namespace

std::pair<CnfFormula, StageTrace> toveyNormalize(const CnfFormula& phi) {
  validateFormula(phi);
  StageTrace trace;
  trace.kind = StageKind::Tovey;
  trace.sourceVariables = phi.variables;

  CnfFormula out;
  out.variables = phi.variables;
  for (Clause c : phi.clauses) {
    if (c.size() > 3) throw UsageError("clause with more than three literals");
    if (cleanClause(c)) out.clauses.push_back(std::move(c));
  }

  for (int v = 1; v <= phi.variables; ++v) trace.copies.push_back({v, v});

  // Occurrence splitting: the j-th occurrence of v moves to copy j, copies tied by an implication cycle.
  std::vector<int> occ = occurrences(out);
  std::vector<std::vector<int>> copyOf(phi.variables + 1);
  std::vector<Clause> cycles;
  for (int v = 1; v <= phi.variables; ++v) {
    if (occ[v - 1] <= kMaxOccurrences) continue;
    copyOf[v].push_back(v);
    for (int j = 1; j < occ[v - 1]; ++j) {
      copyOf[v].push_back(++out.variables);
      trace.copies.push_back({v, out.variables});
    }
    const auto& xs = copyOf[v];
    for (std::size_t j = 0; j < xs.size(); ++j) cycles.push_back({xs[j], -xs[(j + 1) % xs.size()]});
  }
  std::vector<int> seen(phi.variables + 1, 0);
  for (Clause& c : out.clauses)
    for (Literal& l : c) {
      int v = std::abs(l);
      if (copyOf[v].empty()) continue;
      int x = copyOf[v][seen[v]++];
      l = l > 0 ? x : -x;
    }
  for (Clause& c : cycles) out.clauses.push_back(std::move(c));

  // Padding: each short clause takes one forced-false variable per missing slot.
  std::vector<Clause> gadgets;
  auto forcedFalse = [&]() {
    int b = ++out.variables, c = ++out.variables, d = ++out.variables, z = ++out.variables;
    gadgets.push_back({d, -z, -c});
    gadgets.push_back({-b, -z, c});
    gadgets.push_back({b, -z, -d});
    gadgets.push_back({-d, -c, -b});
    gadgets.push_back({d, c, b});
    trace.constants.push_back({b, false});
    trace.constants.push_back({c, false});
    trace.constants.push_back({d, true});
    trace.constants.push_back({z, false});
    return z;
  };
  for (Clause& c : out.clauses)
    while (c.size() < 3) c.push_back(forcedFalse());
  for (Clause& c : gadgets) out.clauses.push_back(std::move(c));

  trace.targetVariables = out.variables;
  if (!isToveyForm(out)) throw std::logic_error("Tovey normalization produced a non-conforming formula");
  return {std::move(out), std::move(trace)};
}

Assignment toveyLift(const StageTrace& trace, const Assignment& xi) {
  Assignment out(trace.targetVariables, false);
  for (auto [from, to] : trace.copies) out[to - 1] = xi[from - 1];
  for (auto [v, value] : trace.constants) out[v - 1] = value;
  return out;
}

Assignment toveyRestrict(const StageTrace& trace, const Assignment& xi) {
  Assignment out(trace.sourceVariables, false);
  std::vector<bool> done(trace.sourceVariables + 1, false);
  for (auto [from, to] : trace.copies) {
    if (done[from]) continue;
    done[from] = true;
    out[from - 1] = xi[to - 1];
  }
  return out;
}

}  // namespace rainbow
