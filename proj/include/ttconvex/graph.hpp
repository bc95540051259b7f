#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ttconvex/word.hpp"

namespace ttconvex {

/// Oriented edges reuse the signed Letter encoding: +(e+1) traverses edge e
/// forward, -(e+1) backward.
struct Edge {
  std::string name;
  int from = 0;
  int to = 0;
};

/// Finite connected graph with a positive edge metric.
class MarkedGraph {
 public:
  MarkedGraph() = default;
  MarkedGraph(std::vector<std::string> vertices, std::vector<Edge> edges, std::vector<double> lengths = {});

  /// One vertex, one loop per generator.
  static MarkedGraph rose(const Alphabet& alphabet);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::string& vertex_name(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }

  int origin(Letter l) const { return l > 0 ? edge(symbol_index(l)).from : edge(symbol_index(l)).to; }
  int terminus(Letter l) const { return origin(-l); }

  double length(Letter l) const { return lengths_[static_cast<std::size_t>(symbol_index(l))]; }
  const std::vector<double>& lengths() const noexcept { return lengths_; }
  void set_length(int e, double len);

  /// Edge names as an alphabet (for parsing and printing edge paths).
  const Alphabet& edge_alphabet() const noexcept { return alphabet_; }
  int find_vertex(const std::string& name) const noexcept;

  /// Directions (oriented edges) leaving v.
  std::vector<Letter> directions_at(int v) const;

  /// Sum of all edge lengths.
  double volume() const noexcept;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<double> lengths_;
  Alphabet alphabet_;
};

/// An immersed edge path. `start` pins the base vertex of trivial paths.
struct EdgePath {
  int start = 0;
  std::vector<Letter> edges;

  bool empty() const noexcept { return edges.empty(); }
  std::int64_t edge_count() const noexcept { return static_cast<std::int64_t>(edges.size()); }
  bool operator==(const EdgePath&) const = default;
};

int path_end(const MarkedGraph& g, const EdgePath& p);
double path_length(const MarkedGraph& g, std::span<const Letter> edges);
inline double path_length(const MarkedGraph& g, const EdgePath& p) { return path_length(g, p.edges); }
EdgePath path_inverse(const MarkedGraph& g, const EdgePath& p);

/// True if consecutive edges are incident and no edge is followed by its reverse.
bool is_immersed(const MarkedGraph& g, std::span<const Letter> edges);

/// Throws PathError unless consecutive edges are incident.
void check_incident(const MarkedGraph& g, std::span<const Letter> edges);

/// Leftmost stack cancellation of a raw edge sequence starting at `start`.
EdgePath tighten(const MarkedGraph& g, int start, std::span<const Letter> raw);

/// Concatenate-then-tighten.
EdgePath concat(const MarkedGraph& g, const EdgePath& a, const EdgePath& b);

/// Outcome of tightening with provenance: for each raw index, either its
/// output position (`survivor`) or the raw index it cancelled against.
struct TrackedTightening {
  std::vector<Letter> result;
  std::vector<std::int64_t> position;  // raw index -> output index, or -1
  std::vector<std::int64_t> partner;   // raw index -> cancelling raw index, or -1
};

TrackedTightening tighten_tracked(std::span<const Letter> raw);

/// Immersed circuit stored by its canonical least rotation.
class Circuit {
 public:
  Circuit() = default;
  /// Cyclically tightens a closed path.
  Circuit(const MarkedGraph& g, std::span<const Letter> closed_edges);

  std::span<const Letter> edges() const noexcept { return edges_; }
  std::int64_t edge_count() const noexcept { return static_cast<std::int64_t>(edges_.size()); }
  bool operator==(const Circuit&) const = default;

 private:
  std::vector<Letter> edges_;
};

/// Strips cancelling first/last pairs of a tightened closed path.
std::vector<Letter> cyclically_tighten(std::span<const Letter> tightened_closed);

EdgePath parse_edge_path(const MarkedGraph& g, std::string_view text, int start_vertex = -1);
std::string format_edge_path(const MarkedGraph& g, std::span<const Letter> edges);

}  // namespace ttconvex
