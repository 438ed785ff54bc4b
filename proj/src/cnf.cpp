#include "rainbow/cnf.hpp"

#include <cstdlib>
#include <set>
#include <stdexcept>
#include <sstream>

#include "rainbow/errors.hpp"

namespace rainbow {

void validateFormula(const CnfFormula& phi) {
  if (phi.variables < 0) throw UsageError("negative variable count");
  for (const Clause& c : phi.clauses) {
    if (c.empty()) throw UsageError("empty clause");
    for (Literal l : c)
      if (l == 0 || std::abs(l) > phi.variables) throw UsageError("literal " + std::to_string(l) + " out of range");
  }
}

CnfFormula parseDimacs(std::istream& in) {
  CnfFormula phi;
  bool header = false;
  int declared = 0;
  Clause current;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == 'c' || tok[0] == '%') continue;
    if (tok == "p") {
      std::string fmt;
      if (header) throw FormatError(lineNo, "second p-line");
      if (!(ls >> fmt >> phi.variables >> declared) || fmt != "cnf" || phi.variables < 0 || declared < 0)
        throw FormatError(lineNo, "expected 'p cnf <vars> <clauses>'");
      header = true;
      continue;
    }
    if (!header) throw FormatError(lineNo, "clause before p-line");
    do {
      long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoll(tok, &used);
        if (used != tok.size()) throw FormatError(lineNo, "bad literal '" + tok + "'");
      } catch (const std::logic_error&) {
        throw FormatError(lineNo, "bad literal '" + tok + "'");
      }
      if (v == 0) {
        if (current.empty()) throw FormatError(lineNo, "empty clause");
        phi.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::llabs(v) > phi.variables) throw FormatError(lineNo, "literal out of range");
        current.push_back(static_cast<Literal>(v));
      }
    } while (ls >> tok);
  }
  if (!header) throw FormatError(lineNo, "missing p-line");
  if (!current.empty()) phi.clauses.push_back(std::move(current));
  if (static_cast<int>(phi.clauses.size()) != declared)
    throw FormatError(lineNo, "clause count " + std::to_string(phi.clauses.size()) + " differs from header");
  return phi;
}

CnfFormula parseDimacs(const std::string& text) {
  std::istringstream in(text);
  return parseDimacs(in);
}

std::string serializeDimacs(const CnfFormula& phi) {
  std::ostringstream out;
  out << "p cnf " << phi.variables << ' ' << phi.clauses.size() << '\n';
  for (const Clause& c : phi.clauses) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

bool literalValue(Literal l, const Assignment& xi) {
  bool v = xi[std::abs(l) - 1];
  return l > 0 ? v : !v;
}

bool satisfies(const CnfFormula& phi, const Assignment& xi) {
  for (const Clause& c : phi.clauses) {
    bool ok = false;
    for (Literal l : c) ok = ok || literalValue(l, xi);
    if (!ok) return false;
  }
  return true;
}

namespace {

// Calls f on every assignment until it returns false.
template <class F>
void forEachAssignment(const CnfFormula& phi, int maxVariables, F f) {
  if (phi.variables > maxVariables)
    throw ResourceError("brute-force SAT over " + std::to_string(phi.variables) + " variables");
  Assignment xi(phi.variables, false);
  for (unsigned long long mask = 0; mask < (1ULL << phi.variables); ++mask) {
    for (int v = 0; v < phi.variables; ++v) xi[v] = (mask >> v) & 1;
    if (!f(xi)) return;
  }
}

}  // namespace

std::optional<Assignment> bruteForceSat(const CnfFormula& phi, int maxVariables) {
  std::optional<Assignment> found;
  forEachAssignment(phi, maxVariables, [&](const Assignment& xi) {
    if (!satisfies(phi, xi)) return true;
    found = xi;
    return false;
  });
  return found;
}

long long countModels(const CnfFormula& phi, int maxVariables) {
  long long count = 0;
  forEachAssignment(phi, maxVariables, [&](const Assignment& xi) {
    count += satisfies(phi, xi);
    return true;
  });
  return count;
}

namespace {

// Values per variable: 0 unset, 1 true, -1 false.
class Dpll {
 public:
  Dpll(const CnfFormula& phi, long long decisionLimit)
      : phi_(phi), value_(phi.variables + 1, 0), limit_(decisionLimit) {}

  std::optional<Assignment> run() {
    if (!search()) return std::nullopt;
    Assignment xi(phi_.variables);
    for (int v = 1; v <= phi_.variables; ++v) xi[v - 1] = value_[v] > 0;
    return xi;
  }

 private:
  int litValue(Literal l) const { return l > 0 ? value_[l] : -value_[-l]; }

  void assign(Literal l) {
    value_[std::abs(l)] = l > 0 ? 1 : -1;
    trail_.push_back(std::abs(l));
  }

  // Unit propagation to a fixpoint; false on a falsified clause. `branch` is an open
  // literal of a shortest unresolved clause, 0 when every clause is satisfied.
  bool propagate(Literal& branch) {
    for (bool changed = true; changed;) {
      changed = false;
      branch = 0;
      std::size_t bestOpen = 0;
      for (const Clause& c : phi_.clauses) {
        std::size_t open = 0;
        Literal last = 0;
        bool sat = false;
        for (Literal l : c) {
          int v = litValue(l);
          if (v > 0) sat = true;
          if (v == 0) {
            ++open;
            last = l;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          assign(last);
          changed = true;
          continue;
        }
        if (!branch || open < bestOpen) {
          branch = last;
          bestOpen = open;
        }
      }
    }
    return true;
  }

  bool search() {
    const std::size_t mark = trail_.size();
    Literal branch = 0;
    if (propagate(branch)) {
      if (!branch) return true;
      if (limit_ > 0 && ++decisions_ > limit_) throw ResourceError("DPLL exceeded its decision budget");
      for (Literal l : {branch, -branch}) {
        const std::size_t inner = trail_.size();
        assign(l);
        if (search()) return true;
        undo(inner);
      }
    }
    undo(mark);
    return false;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  const CnfFormula& phi_;
  std::vector<int> value_;
  std::vector<int> trail_;
  long long limit_;
  long long decisions_ = 0;
};

}  // namespace

std::optional<Assignment> solveSat(const CnfFormula& phi, long long decisionLimit) {
  validateFormula(phi);
  auto xi = Dpll(phi, decisionLimit).run();
  if (xi && !satisfies(phi, *xi)) throw std::logic_error("DPLL returned a non-model");
  return xi;
}

std::vector<int> occurrences(const CnfFormula& phi) {
  std::vector<int> occ(phi.variables, 0);
  for (const Clause& c : phi.clauses)
    for (Literal l : c) ++occ[std::abs(l) - 1];
  return occ;
}

bool isToveyForm(const CnfFormula& phi) {
  for (const Clause& c : phi.clauses) {
    std::set<int> vars;
    for (Literal l : c) vars.insert(std::abs(l));
    if (c.size() != 3 || vars.size() != 3) return false;
  }
  for (int o : occurrences(phi))
    if (o > 4) return false;
  return true;
}

}  // namespace rainbow
