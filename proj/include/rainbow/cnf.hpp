#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rainbow {

// Signed DIMACS literal: v or -v for variable v in 1..variables.
using Literal = int;
using Clause = std::vector<Literal>;
// Value of variable v at index v-1.
using Assignment = std::vector<bool>;

struct CnfFormula {
  int variables = 0;
  std::vector<Clause> clauses;
  bool operator==(const CnfFormula&) const = default;
};

// Throws UsageError on an empty clause or an out-of-range literal.
void validateFormula(const CnfFormula& phi);

CnfFormula parseDimacs(std::istream& in);
CnfFormula parseDimacs(const std::string& text);
std::string serializeDimacs(const CnfFormula& phi);

bool literalValue(Literal l, const Assignment& xi);
bool satisfies(const CnfFormula& phi, const Assignment& xi);
// Exhaustive; throws ResourceError above `maxVariables`.
std::optional<Assignment> bruteForceSat(const CnfFormula& phi, int maxVariables = 24);
// DPLL with unit propagation; throws ResourceError past `decisionLimit` decisions (0 = unlimited).
std::optional<Assignment> solveSat(const CnfFormula& phi, long long decisionLimit = 10'000'000);
long long countModels(const CnfFormula& phi, int maxVariables = 24);

// Occurrences per variable (index v-1).
std::vector<int> occurrences(const CnfFormula& phi);
// Every clause holds exactly three distinct variables and every variable occurs at most four times.
bool isToveyForm(const CnfFormula& phi);

}  // namespace rainbow
