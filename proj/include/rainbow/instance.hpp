#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

// Total edge coloring indexed by edge id, values in 1..k.
using Coloring = std::vector<Color>;

class PartialColoring {
 public:
  static constexpr Color kUnset = 0;

  PartialColoring() = default;
  PartialColoring(int m, int k) : k_(k), values_(m, kUnset) {}

  int k() const { return k_; }
  int m() const { return static_cast<int>(values_.size()); }
  bool isSet(EdgeId e) const { return values_[e] != kUnset; }
  Color operator[](EdgeId e) const { return values_[e]; }
  void set(EdgeId e, Color c);
  void unset(EdgeId e) { values_[e] = kUnset; }
  int domainSize() const;
  bool empty() const { return domainSize() == 0; }
  std::vector<EdgeId> domain() const;
  const std::vector<Color>& values() const { return values_; }
  // Unset edges become `fill`.
  Coloring completed(Color fill = 1) const;
  bool extendedBy(const Coloring& c) const;

  bool operator==(const PartialColoring&) const = default;

 private:
  int k_ = 0;
  std::vector<Color> values_;
};

enum class RequestMode {
  Explicit,  // the request set S is given
  AllPairs,  // every anti-edge is requested (plain Rainbow k-Coloring)
};

struct Instance {
  Graph graph;
  int k = 2;
  RequestMode mode = RequestMode::Explicit;
  std::vector<VertexPair> requests;
  PartialColoring precoloring;

  Instance() = default;
  Instance(Graph g, int k, std::vector<VertexPair> requests = {});

  bool hasPrecoloring() const { return !precoloring.empty(); }
  // Requests with edge pairs dropped; AllPairs mode expands to every anti-edge.
  std::vector<VertexPair> effectiveRequests() const;
  bool operator==(const Instance& other) const;
};

// Throws UsageError on out-of-range colors or a mismatched edge count.
void validateInstance(const Instance& inst);

Instance parseInstance(std::istream& in);
Instance parseInstance(const std::string& text);
std::string serializeInstance(const Instance& inst, const std::string& comment = "");

// "u v color" per edge with 1-based vertices, or the single token NULL.
std::string serializeColoring(const Graph& g, const std::optional<Coloring>& c);
std::optional<Coloring> parseColoring(const Graph& g, std::istream& in);
std::optional<Coloring> parseColoring(const Graph& g, const std::string& text);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& text);

}  // namespace rainbow
