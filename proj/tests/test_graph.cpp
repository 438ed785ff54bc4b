#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/instance.hpp"

using namespace rainbow;
using namespace testing_helpers;

TEST_CASE("buildGraph canonicalizes and deduplicates") {
  Graph p3 = buildGraph(3, {{0, 1}, {1, 2}});
  CHECK(p3.m() == 2);
  Graph again = buildGraph(3, {{1, 0}, {0, 1}, {1, 2}});
  CHECK(again.m() == 2);
  CHECK(again == p3);
  CHECK(again.edge(0).u == 0);
  CHECK(again.edge(0).v == 1);
  CHECK_THROWS_AS(buildGraph(2, {{0, 0}}), UsageError);
  CHECK_THROWS_AS(buildGraph(2, {{0, 2}}), UsageError);
}

TEST_CASE("bfsDistances") {
  auto d = bfsDistances(pathGraph(3), 0);
  CHECK(d == std::vector<Distance>{0, 1, 2});
  auto iso = bfsDistances(Graph(2), 0);
  CHECK(iso[0] == 0);
  CHECK_FALSE(iso[1].has_value());
  CHECK(bfsDistances(cycleGraph(4), 0) == std::vector<Distance>{0, 1, 2, 1});
}

TEST_CASE("feasiblePairs") {
  CHECK(feasiblePairs(pathGraph(3), 2) == std::vector<VertexPair>{{0, 2}});
  CHECK(feasiblePairs(pathGraph(4), 2) == std::vector<VertexPair>{{0, 2}, {1, 3}});
  CHECK(feasiblePairs(pathGraph(4), 3) == std::vector<VertexPair>{{0, 2}, {0, 3}, {1, 3}});
}

TEST_CASE("greedyProperColoring") {
  auto edgeless = greedyProperColoring(Graph(5));
  CHECK(edgeless == std::vector<int>(5, 1));
  auto k4 = greedyProperColoring(completeGraph(4));
  CHECK(std::set<int>(k4.begin(), k4.end()).size() == 4);
  Graph c5 = cycleGraph(5);
  auto col = greedyProperColoring(c5);
  CHECK(isProperVertexColoring(c5, col));
  CHECK(*std::max_element(col.begin(), col.end()) <= 3);
}

TEST_CASE("graph invariants on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 12);
    Graph g = randomGraph(n, 0.3, rng);
    std::vector<std::pair<Vertex, Vertex>> rebuilt;
    for (Vertex u = 0; u < n; ++u)
      for (auto [v, e] : g.neighbors(u)) {
        CHECK(g.edge(e).u < g.edge(e).v);
        bool back = false;
        for (auto [w, f] : g.neighbors(v)) back |= (w == u && f == e);
        CHECK(back);
        if (u < v) rebuilt.emplace_back(u, v);
      }
    CHECK(static_cast<int>(rebuilt.size()) == g.m());
    for (int k = 1; k <= 5; ++k) {
      auto a = feasiblePairs(g, k), b = feasiblePairs(g, k + 1);
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
    auto col = greedyProperColoring(g);
    CHECK(isProperVertexColoring(g, col));
    if (n) CHECK(*std::max_element(col.begin(), col.end()) <= g.maxDegree() + 1);
  }
}

TEST_CASE("DisjointSets matches BFS components") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 30);
    DisjointSets ds(n);
    Graph unions(n);
    int ops = static_cast<int>(rng() % (2 * n));
    for (int i = 0; i < ops; ++i) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      ds.unite(a, b);
      if (a != b) unions.addEdge(a, b);
    }
    for (int a = 0; a < n; ++a) {
      auto d = bfsDistances(unions, a);
      for (int b = 0; b < n; ++b) CHECK((ds.find(a) == ds.find(b)) == d[b].has_value());
    }
  }
}

TEST_CASE("instance format") {
  std::string text =
      "c tiny\n"
      "p rbw 3 2 2\n"
      "e 1 2\n"
      "e 2 3\n"
      "r 1 3\n"
      "f 1 2 1\n";
  Instance inst = parseInstance(text);
  CHECK(inst.graph.n() == 3);
  CHECK(inst.graph.m() == 2);
  CHECK(inst.k == 2);
  CHECK(inst.requests == std::vector<VertexPair>{{0, 2}});
  CHECK(inst.precoloring[0] == 1);
  CHECK_FALSE(inst.precoloring.isSet(1));
  CHECK(parseInstance(serializeInstance(inst)) == inst);

  Instance plain = parseInstance("p rbw 3 2 2\ne 1 2\ne 2 3\n");
  CHECK(plain.mode == RequestMode::AllPairs);
  CHECK(plain.effectiveRequests() == std::vector<VertexPair>{{0, 2}});
  CHECK(parseInstance(serializeInstance(plain)) == plain);

  Instance none = parseInstance("p rbw 3 2 2 0\ne 1 2\ne 2 3\n");
  CHECK(none.mode == RequestMode::Explicit);
  CHECK(none.effectiveRequests().empty());

  CHECK_THROWS_AS(parseInstance("e 1 2\np rbw 2 1 2\n"), FormatError);
  CHECK_THROWS_AS(parseInstance("p rbw 2 2 2\ne 1 2\ne 2 1\n"), FormatError);
  CHECK_THROWS_AS(parseInstance("p rbw 3 1 2\ne 1 2\nf 1 3 1\n"), FormatError);
  CHECK_THROWS_AS(parseInstance("p rbw 2 1 2\ne 1 2\nf 1 2 3\n"), FormatError);
  CHECK_THROWS_AS(parseInstance("p rbw 2 1 2\ne 1 5\n"), FormatError);
  CHECK_THROWS_AS(parseInstance("p rbw 2 2 2\ne 1 2\n"), FormatError);
}

TEST_CASE("requests that are edges are dropped") {
  Instance inst(pathGraph(3), 2, {{0, 1}, {0, 2}});
  CHECK(inst.effectiveRequests() == std::vector<VertexPair>{{0, 2}});
}

TEST_CASE("coloring format") {
  Graph g = pathGraph(3);
  Coloring c{1, 2};
  CHECK(serializeColoring(g, c) == "1 2 1\n2 3 2\n");
  CHECK(parseColoring(g, serializeColoring(g, c)) == c);
  CHECK_FALSE(parseColoring(g, serializeColoring(g, std::nullopt)).has_value());
  CHECK_THROWS_AS(parseColoring(g, "1 2 1\n"), FormatError);
}
