#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "rainbow/biclique.hpp"
#include "rainbow/cnf.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/exact.hpp"
#include "rainbow/max_rainbow.hpp"
#include "rainbow/reduction.hpp"
#include "rainbow/verify.hpp"

using namespace rainbow;

namespace {

enum Exit { kYes = 0, kNo = 1, kUsage = 2, kBudget = 3 };

struct Config {
  std::string format = "kv";
  bool errorRecords = false;
  std::uint64_t seed = 1;
  int workers = 1;
  int subsetCap = 26;
  double bruteBits = 40;
  int greedyCap = kGreedyCoverCap;
  long long nodeLimit = 50'000'000;
  std::string backend = "findcoloring";
  std::string pick = "constrained";
};

Config cfg;

// One output record per line: key=value, or "key: value" in text mode.
void put(const std::string& key, const std::string& value) {
  if (cfg.format == "text")
    std::cout << key << ": " << value << "\n";
  else
    std::cout << key << "=" << value << "\n";
}
void put(const std::string& key, long long value) { put(key, std::to_string(value)); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    writeFile(path, text);
}

std::string joined(const std::vector<int>& xs, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(xs[i]);
  return s;
}

SolverOptions solverOptions() {
  SolverOptions o;
  o.subsetCap = cfg.subsetCap;
  o.bruteForceBits = cfg.bruteBits;
  o.workers = cfg.workers;
  o.findColoring.nodeLimit = cfg.nodeLimit;
  o.propagation.nodeLimit = cfg.nodeLimit;
  if (cfg.pick == "lex")
    o.findColoring.pick = PickRule::Lexicographic;
  else if (cfg.pick == "walks")
    o.findColoring.pick = PickRule::FewestWalks;
  else
    o.findColoring.pick = PickRule::MostConstrained;
  o.backend = cfg.backend == "propagation" ? ExactBackend::Propagation : ExactBackend::FindColoring;
  return o;
}

ColoredCoverOptions coverOptions(bool randomized) {
  ColoredCoverOptions o;
  o.deterministic = !randomized;
  o.seed = cfg.seed;
  o.greedyCap = cfg.greedyCap;
  o.workers = cfg.workers;
  return o;
}

Instance loadInstance(const std::string& path) { return parseInstance(readFile(path)); }

// Decides the instance with the configured backend; brute force is exhaustive over free edges.
std::optional<Coloring> decide(const Instance& inst, long long* nodes) {
  SolverOptions o = solverOptions();
  if (cfg.backend == "brute") return bruteForceSolve(inst, o);
  FindColoringStats st;
  auto c = solveSubsetRainbow(inst, o, &st);
  if (nodes) *nodes = st.nodes;
  return c;
}

// ---- subcommands ----

int cmdSolve(const std::string& in, const std::string& out) {
  Instance inst = loadInstance(in);
  long long nodes = 0;
  auto c = decide(inst, &nodes);
  put("verdict", c ? "YES" : "NO");
  put("requests", static_cast<long long>(inst.effectiveRequests().size()));
  put("nodes", nodes);
  if (!out.empty())
    writeFile(out, serializeColoring(inst.graph, c));
  else
    put("coloring", c ? joined(*c) : "NULL");
  return c ? kYes : kNo;
}

int cmdCount(const std::string& in) {
  Instance inst = loadInstance(in);
  if (inst.k != 2) throw UsageError("count needs k = 2");
  auto reqs = inst.effectiveRequests();
  ColoringCount n = inst.hasPrecoloring() ? countSatisfying2Extensions(inst.graph, reqs, inst.precoloring, solverOptions())
                                          : countSatisfying2Colorings(inst.graph, reqs, solverOptions());
  put("count", n.str());
  return kYes;
}

int cmdVerify(const std::string& in, const std::string& col) {
  Instance inst = loadInstance(in);
  auto c = parseColoring(inst.graph, readFile(col));
  auto reqs = inst.effectiveRequests();
  put("requests", static_cast<long long>(reqs.size()));
  if (!c) {
    put("satisfied", 0);
    put("verdict", reqs.empty() ? "YES" : "NO");
    return reqs.empty() ? kYes : kNo;
  }
  for (Color x : *c)
    if (x < 1 || x > inst.k) throw UsageError("coloring uses a color outside 1..k");
  bool pre = !inst.hasPrecoloring() || inst.precoloring.extendedBy(*c);
  bool connected = inst.mode == RequestMode::AllPairs && isRainbowConnected(inst.graph, *c, inst.k);
  std::size_t sat = connected ? reqs.size() : verifyRequests(inst.graph, *c, reqs, inst.k).size();
  put("satisfied", static_cast<long long>(sat));
  put("precoloring", pre ? "ok" : "violated");
  if (inst.mode == RequestMode::AllPairs) put("rainbow_connected", connected ? 1 : 0);
  bool yes = pre && sat == reqs.size();
  put("verdict", yes ? "YES" : "NO");
  return yes ? kYes : kNo;
}

int cmdApprox(const std::string& in, const std::string& out) {
  Instance inst = loadInstance(in);
  if (inst.k > kMaxApproxColors) throw UsageError("approx supports k <= " + std::to_string(kMaxApproxColors));
  auto S = inst.effectiveRequests();
  std::vector<VertexPair> feasible;
  for (VertexPair p : S)
    if (!hasInfeasibleRequest(inst.graph, {p}, inst.k)) feasible.push_back(p);
  Coloring c = derandomizedApprox(inst.graph, feasible, inst.k);
  PathPlan plan = choosePaths(inst.graph, feasible, inst.k);
  put("requests", static_cast<long long>(S.size()));
  put("feasible", static_cast<long long>(feasible.size()));
  put("rainbow_plan_paths", countRainbowPaths(inst.graph, c, plan));
  put("satisfied", static_cast<long long>(verifyRequests(inst.graph, c, S, inst.k).size()));
  put("guarantee", approxGuarantee(static_cast<long long>(feasible.size()), inst.k));
  if (!out.empty())
    writeFile(out, serializeColoring(inst.graph, c));
  else
    put("coloring", joined(c));
  return kYes;
}

int cmdKernelize(const std::string& in, int q, const std::string& out) {
  Instance inst = loadInstance(in);
  KernelResult kr = kernelize(inst.graph, inst.k, q);
  put("verdict", kr.verdict == KernelVerdict::YesImmediate ? "yes-immediate" : "reduced");
  put("q", kr.q);
  put("vertices", kr.graph.n());
  put("edges", kr.graph.m());
  put("removed_components", kr.removedComponents);
  if (kr.verdict == KernelVerdict::Reduced) {
    std::vector<int> orig;
    for (Vertex v : kr.original) orig.push_back(v + 1);
    put("original", joined(orig));
    Instance k(kr.graph, inst.k);
    k.mode = RequestMode::AllPairs;
    if (!out.empty()) writeFile(out, serializeInstance(k, "kernel q=" + std::to_string(kr.q)));
  }
  return kYes;
}

int cmdMaxsolve(const std::string& in, int q, const std::string& out) {
  Instance inst = loadInstance(in);
  MaxRainbowOptions o;
  o.solver = solverOptions();
  auto r = solveMaxRainbow(inst.graph, inst.k, q, o);
  put("verdict", r.yes ? "YES" : "NO");
  put("subsets_solved", r.subsetsSolved);
  if (r.coloring)
    put("satisfied", static_cast<long long>(verifyRequests(inst.graph, *r.coloring, feasiblePairs(inst.graph, inst.k), inst.k).size()));
  if (!out.empty()) writeFile(out, serializeColoring(inst.graph, r.coloring));
  return r.yes ? kYes : kNo;
}

std::vector<Vertex> parseVertexList(const std::string& s, int n) {
  std::vector<Vertex> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
      throw UsageError("bad vertex '" + tok + "'");
    }
    if (v < 1 || v > n) throw UsageError("vertex " + tok + " out of range");
    out.push_back(v - 1);
  }
  return out;
}

int cmdCover(const std::string& method, const std::string& in, int n, const std::string& left, const std::string& out) {
  BicliqueCover cover;
  bool valid = true;
  if (method == "complete") {
    if (n < 1) throw UsageError("cover complete needs --n >= 1");
    cover = coverCompleteGraph(n);
    Graph empty = buildGraph(n, {});
    valid = coversComplement(empty, cover);
  } else {
    if (in.empty()) throw UsageError("cover " + method + " needs an instance file");
    Graph g = loadInstance(in).graph;
    if (method == "colored" || method == "colored-random") {
      cover = coverComplementColored(g, greedyProperColoring(g), coverOptions(method == "colored-random"));
      valid = coversComplement(g, cover) && sharesAtMostOneVertex(g, cover);
    } else if (method == "greedy" || method == "random") {
      std::vector<Vertex> v1, v2;
      if (!left.empty()) {
        v1 = parseVertexList(left, g.n());
      } else {
        for (Vertex v = 0; v < g.n() / 2; ++v) v1.push_back(v);
      }
      std::vector<char> inLeft(g.n());
      for (Vertex v : v1) inLeft[v] = 1;
      for (Vertex v = 0; v < g.n(); ++v)
        if (!inLeft[v]) v2.push_back(v);
      BipartiteGraph gb = bipartiteBetween(g, v1, v2);
      cover = method == "greedy" ? juknaCoverGreedy(gb, cfg.greedyCap, cfg.workers) : juknaCoverRandom(gb, cfg.seed);
      valid = coversBipartiteComplement(gb, cover);
    } else {
      throw UsageError("unknown cover method '" + method + "'");
    }
  }
  put("method", method);
  put("bicliques", cover.size());
  put("valid", valid ? 1 : 0);
  if (!out.empty()) writeFile(out, serializeCover(cover));
  return valid ? kYes : kNo;
}

int cmdReduce(const std::string& in, const std::string& to, int k, const std::string& out, const std::string& tracePath,
              bool randomCovers) {
  CnfFormula phi = parseDimacs(readFile(in));
  CompileOptions o;
  o.k = k;
  try {
    o.target = parseTargetName(to);
  } catch (const FormatError&) {
    throw UsageError("unknown target '" + to + "'");
  }
  o.cover = coverOptions(randomCovers);
  CompileResult res = compile(phi, o);
  put("target", targetName(o.target));
  put("k", k);
  put("normalized_variables", res.normalized.variables);
  put("normalized_clauses", static_cast<long long>(res.normalized.clauses.size()));
  for (const StageSize& s : res.report.stages) {
    std::ostringstream v;
    v << "vertices:" << s.vertices << " edges:" << s.edges << " requests:" << s.requests << " precolored:" << s.precolored;
    put("stage." + s.stage, v.str());
  }
  for (const SizeCheck& c : res.report.checks) {
    std::ostringstream v;
    v << (c.upperBound ? "<=" : "") << c.expected << " actual:" << c.actual << (c.holds() ? " ok" : " FAIL");
    put("check." + c.stage + "." + c.quantity, v.str());
  }
  put("report", res.report.ok() ? "ok" : "mismatch");
  if (!out.empty()) writeFile(out, serializeInstance(res.final(), "target " + targetName(o.target)));
  if (!tracePath.empty()) writeFile(tracePath, serializeTrace(res.trace));
  return res.report.ok() ? kYes : kNo;
}

Assignment parseModel(const std::string& text, int variables) {
  Assignment xi(variables, false);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "v" || tok == "s" || tok == "SAT" || tok == "SATISFIABLE") continue;
    long long lit = 0;
    try {
      lit = std::stoll(tok);
    } catch (const std::exception&) {
      throw FormatError(0, "bad model literal '" + tok + "'");
    }
    if (lit == 0) continue;
    if (std::llabs(lit) > variables) throw FormatError(0, "model literal " + tok + " out of range");
    xi[std::llabs(lit) - 1] = lit > 0;
  }
  return xi;
}

int cmdLift(const std::string& tracePath, const std::string& cnfPath, const std::string& modelPath,
            const std::string& instPath, const std::string& coloringPath, const std::string& out) {
  PipelineTrace trace = parseTrace(readFile(tracePath));
  if (trace.empty()) throw UsageError("empty trace");
  if (!coloringPath.empty()) {
    // inward: final witness back to an assignment
    if (instPath.empty()) throw UsageError("lift --coloring needs --instance");
    Instance inst = loadInstance(instPath);
    auto c = parseColoring(inst.graph, readFile(coloringPath));
    if (!c) throw UsageError("NULL coloring has no assignment");
    Assignment xi = pullBack(trace, *c);
    std::vector<int> lits;
    for (std::size_t i = 0; i < xi.size(); ++i) lits.push_back(xi[i] ? static_cast<int>(i + 1) : -static_cast<int>(i + 1));
    put("model", joined(lits, ' '));
    if (!cnfPath.empty()) {
      bool ok = satisfies(parseDimacs(readFile(cnfPath)), xi);
      put("satisfies", ok ? 1 : 0);
      return ok ? kYes : kNo;
    }
    return kYes;
  }
  if (modelPath.empty()) throw UsageError("lift needs --model or --coloring");
  int vars = trace.front().sourceVariables;
  Assignment xi = parseModel(readFile(modelPath), vars);
  if (!cnfPath.empty() && !satisfies(parseDimacs(readFile(cnfPath)), xi)) throw UsageError("model does not satisfy the formula");
  auto cs = liftThrough(trace, xi);
  if (cs.empty()) throw UsageError("trace has no graph stage");
  put("stages", static_cast<long long>(cs.size()));
  bool ok = true;
  if (!instPath.empty()) {
    Instance inst = loadInstance(instPath);
    if (inst.graph.m() != static_cast<int>(cs.back().size())) throw UsageError("instance does not match the trace");
    if (inst.mode == RequestMode::AllPairs) {
      ok = isRainbowConnected(inst.graph, cs.back(), inst.k);
    } else {
      auto reqs = inst.effectiveRequests();
      ok = verifyRequests(inst.graph, cs.back(), reqs, inst.k).size() == reqs.size();
    }
    ok = ok && (!inst.hasPrecoloring() || inst.precoloring.extendedBy(cs.back()));
    put("verified", ok ? 1 : 0);
    if (!out.empty()) writeFile(out, serializeColoring(inst.graph, cs.back()));
  } else {
    put("coloring", joined(cs.back()));
  }
  return ok ? kYes : kNo;
}

int cmdGenGraph(int n, double p, int k, double requestFraction, bool allPairs, const std::string& out) {
  if (n < 1 || p < 0 || p > 1 || k < 1) throw UsageError("gen graph needs n >= 1, 0 <= p <= 1, k >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (u(rng) < p) edges.push_back({a, b});
  Graph g = buildGraph(n, edges);
  Instance inst(g, k);
  if (allPairs) {
    inst.mode = RequestMode::AllPairs;
  } else {
    for (VertexPair q : feasiblePairs(g, k))
      if (u(rng) < requestFraction) inst.requests.push_back(q);
  }
  emit(out, serializeInstance(inst, "gen graph n=" + std::to_string(n) + " seed=" + std::to_string(cfg.seed)));
  return kYes;
}

int cmdGenCnf(int vars, int clauses, int width, const std::string& out) {
  if (vars < 1 || clauses < 0 || width < 1 || width > vars) throw UsageError("gen cnf needs 1 <= width <= vars");
  std::mt19937_64 rng(cfg.seed);
  CnfFormula phi;
  phi.variables = vars;
  std::vector<int> pool(vars);
  for (int i = 0; i < vars; ++i) pool[i] = i + 1;
  for (int c = 0; c < clauses; ++c) {
    std::shuffle(pool.begin(), pool.end(), rng);
    Clause cl;
    for (int i = 0; i < width; ++i) cl.push_back(rng() % 2 ? pool[i] : -pool[i]);
    phi.clauses.push_back(cl);
  }
  emit(out, serializeDimacs(phi));
  return kYes;
}

int cmdBench(const std::string& manifest, bool noTime) {
  std::istringstream in(readFile(manifest));
  std::string line;
  int mismatches = 0, rows = 0;
  const std::filesystem::path base = std::filesystem::path(manifest).parent_path();
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string path, kw, expect;
    if (!(ls >> path) || path[0] == '#') continue;
    if (ls >> kw) {
      if (kw != "expect" || !(ls >> expect) || (expect != "YES" && expect != "NO"))
        throw FormatError(0, "bad manifest line '" + line + "'");
    }
    std::filesystem::path p(path);
    if (p.is_relative() && !std::filesystem::exists(p)) p = base / p;
    Instance inst = loadInstance(p.string());
    auto reqs = inst.effectiveRequests();
    auto t0 = std::chrono::steady_clock::now();
    std::string verdict;
    long long satisfied = 0;
    try {
      auto c = decide(inst, nullptr);
      verdict = c ? "YES" : "NO";
      if (c) satisfied = static_cast<long long>(verifyRequests(inst.graph, *c, reqs, inst.k).size());
    } catch (const ResourceError&) {
      verdict = "BUDGET";
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream row;
    row << "instance=" << path << " verdict=" << verdict << " satisfied=" << satisfied << " requests=" << reqs.size();
    if (!expect.empty()) {
      row << " expect=" << expect << (expect == verdict ? " match=1" : " match=0");
      mismatches += expect != verdict;
    }
    if (!noTime) row << " wall_ms=" << std::fixed << std::setprecision(1) << ms;
    std::cout << row.str() << "\n";
    ++rows;
  }
  put("rows", rows);
  put("mismatches", mismatches);
  return mismatches ? kNo : kYes;
}

int fail(int code, const std::string& kind, const std::string& msg) {
  if (cfg.errorRecords)
    std::cout << "error=" << kind << " message=" << std::quoted(msg) << "\n";
  else
    std::cerr << "rainbow: " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subset rainbow coloring solvers, covers and reductions"};
  app.require_subcommand(1);
  app.add_option("--format", cfg.format, "output records")->check(CLI::IsMember({"kv", "text"}));
  app.add_flag("--error-records", cfg.errorRecords, "report errors as records on stdout");
  app.add_option("--seed", cfg.seed, "seed for every randomized step");
  app.add_option("--workers", cfg.workers, "threads for partitionable searches")->check(CLI::PositiveNumber);
  app.add_option("--subset-cap", cfg.subsetCap, "largest |S| for inclusion-exclusion")->check(CLI::PositiveNumber);
  app.add_option("--brute-bits", cfg.bruteBits, "brute-force cap in bits")->check(CLI::PositiveNumber);
  app.add_option("--greedy-cap", cfg.greedyCap, "largest side for the greedy cover scan")->check(CLI::PositiveNumber);
  app.add_option("--node-limit", cfg.nodeLimit, "search node budget (0 = none)")->check(CLI::NonNegativeNumber);
  app.add_option("--backend", cfg.backend, "exact solver")->check(CLI::IsMember({"findcoloring", "propagation", "brute"}));
  app.add_option("--pick", cfg.pick, "request pick rule")->check(CLI::IsMember({"lex", "constrained", "walks"}));

  std::string input, out, second, method, to = "rc", trace, cnf, model, inst, coloring, left;
  int q = 0, k = 3, n = 0, vars = 3, clauses = 3, width = 3;
  double p = 0.3, fraction = 0.5;
  bool allPairs = false, randomCovers = false, noTime = false;
  std::function<int()> action;

  auto solve = app.add_subcommand("solve", "decide an instance");
  solve->add_option("instance", input)->required();
  solve->add_option("-o,--out", out, "coloring file");
  solve->callback([&] { action = [&] { return cmdSolve(input, out); }; });

  auto count = app.add_subcommand("count", "count satisfying 2-colorings");
  count->add_option("instance", input)->required();
  count->callback([&] { action = [&] { return cmdCount(input); }; });

  auto verify = app.add_subcommand("verify", "check a coloring against an instance");
  verify->add_option("instance", input)->required();
  verify->add_option("coloring", second)->required();
  verify->callback([&] { action = [&] { return cmdVerify(input, second); }; });

  auto approx = app.add_subcommand("approx", "derandomized approximation");
  approx->add_option("instance", input)->required();
  approx->add_option("-o,--out", out);
  approx->callback([&] { action = [&] { return cmdApprox(input, out); }; });

  auto kern = app.add_subcommand("kernelize", "kernel for Maximum Rainbow");
  kern->add_option("instance", input)->required();
  kern->add_option("--q", q)->required();
  kern->add_option("-o,--out", out, "kernel instance file");
  kern->callback([&] { action = [&] { return cmdKernelize(input, q, out); }; });

  auto maxs = app.add_subcommand("maxsolve", "Maximum Rainbow decision");
  maxs->add_option("instance", input)->required();
  maxs->add_option("--q", q)->required();
  maxs->add_option("-o,--out", out);
  maxs->callback([&] { action = [&] { return cmdMaxsolve(input, q, out); }; });

  auto cov = app.add_subcommand("cover", "biclique covers");
  cov->add_option("method", method, "complete | greedy | random | colored | colored-random")->required();
  cov->add_option("instance", input);
  cov->add_option("--n", n, "vertex count for complete");
  cov->add_option("--left", left, "comma-separated 1-based V1 for greedy/random");
  cov->add_option("-o,--out", out);
  cov->callback([&] { action = [&] { return cmdCover(method, input, n, left, out); }; });

  auto red = app.add_subcommand("reduce", "compile a DIMACS formula");
  red->add_option("cnf", input)->required();
  red->add_option("--to", to, "sr2cext | srkcext | srkc | rc");
  red->add_option("--k", k);
  red->add_option("-o,--out", out, "final instance file");
  red->add_option("--trace", trace, "trace file");
  red->add_flag("--random-covers", randomCovers);
  red->callback([&] { action = [&] { return cmdReduce(input, to, k, out, trace, randomCovers); }; });

  auto lift = app.add_subcommand("lift", "move witnesses along a trace");
  lift->add_option("trace", input)->required();
  lift->add_option("--model", model, "assignment file (signed literals)");
  lift->add_option("--coloring", coloring, "final-stage coloring to pull back");
  lift->add_option("--instance", inst, "final-stage instance");
  lift->add_option("--cnf", cnf, "source formula to check against");
  lift->add_option("-o,--out", out);
  lift->callback([&] { action = [&] { return cmdLift(input, cnf, model, inst, coloring, out); }; });

  auto gen = app.add_subcommand("gen", "seeded generators");
  gen->require_subcommand(1);
  auto genGraph = gen->add_subcommand("graph", "G(n,p) instance");
  genGraph->add_option("--n", n)->required();
  genGraph->add_option("--p", p);
  genGraph->add_option("--k", k);
  genGraph->add_option("--requests", fraction, "fraction of feasible anti-edges requested");
  genGraph->add_flag("--all-pairs", allPairs);
  genGraph->add_option("-o,--out", out);
  genGraph->callback([&] { action = [&] { return cmdGenGraph(n, p, k, fraction, allPairs, out); }; });
  auto genCnf = gen->add_subcommand("cnf", "random fixed-width CNF");
  genCnf->add_option("--vars", vars);
  genCnf->add_option("--clauses", clauses);
  genCnf->add_option("--width", width);
  genCnf->add_option("-o,--out", out);
  genCnf->callback([&] { action = [&] { return cmdGenCnf(vars, clauses, width, out); }; });

  auto bench = app.add_subcommand("bench", "run a manifest");
  bench->add_option("manifest", input)->required();
  bench->add_flag("--no-time", noTime, "omit wall times");
  bench->callback([&] { action = [&] { return cmdBench(input, noTime); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action();
  } catch (const ResourceError& e) {
    return fail(kBudget, "budget", e.what());
  } catch (const FormatError& e) {
    return fail(kUsage, "format", e.what());
  } catch (const CapabilityError& e) {
    return fail(kUsage, "capability", e.what());
  } catch (const UsageError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(kUsage, "error", e.what());
  }
}
