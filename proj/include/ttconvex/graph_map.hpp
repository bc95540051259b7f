#pragma once

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ttconvex/automorphism.hpp"
#include "ttconvex/graph.hpp"

namespace ttconvex {

enum class StratumClass { zero, polynomial, exponential };

const char* to_string(StratumClass c) noexcept;

inline constexpr int kInfiniteH = INT_MAX;

/// One stratum H_r. Strata are numbered from 1; height 0 means "no edges".
struct Stratum {
  std::vector<int> edges;
  /// (i, j) = number of times f(E_j) crosses E_i, either orientation.
  Eigen::MatrixXi transition;
  StratumClass cls = StratumClass::zero;
  /// PF eigenvalue; 0 for zero strata.
  double growth_rate = 0.0;
  /// u_r when H_r = {E_r} and f(E_r) = E_r u_r.
  std::optional<std::vector<Letter>> suffix;
  int h_value = 0;

  bool single_edge() const noexcept { return edges.size() == 1; }
  bool constant() const noexcept { return cls == StratumClass::polynomial && suffix && suffix->empty(); }
};

struct Filtration {
  std::vector<Stratum> strata;
  /// 1-based stratum index of every edge.
  std::vector<int> edge_stratum;
  /// h value -> strata (1-based) in that league; infinite h is excluded.
  std::map<int, std::vector<int>> leagues;
  /// Stable reordering of 1-based strata by h value.
  std::vector<int> h_order;

  const Stratum& stratum(int r) const { return strata.at(static_cast<std::size_t>(r - 1)); }
  int size() const noexcept { return static_cast<int>(strata.size()); }
};

/// Self-map of a marked graph together with a declared filtration. The
/// filtration is classified on construction and exponential strata receive
/// the PF metric.
class GraphMap {
 public:
  GraphMap(MarkedGraph graph, std::vector<std::vector<Letter>> edge_images, std::vector<std::vector<int>> strata);

  const MarkedGraph& graph() const noexcept { return graph_; }
  const Filtration& filtration() const noexcept { return filtration_; }
  const std::vector<int>& vertex_images() const noexcept { return vertex_images_; }
  int map_vertex(int v) const { return vertex_images_.at(static_cast<std::size_t>(v)); }

  /// f(l) for an oriented edge.
  std::vector<Letter> image(Letter l) const;
  const std::vector<Letter>& edge_image(int e) const { return edge_images_.at(static_cast<std::size_t>(e)); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }

  int stratum_of(Letter l) const { return filtration_.edge_stratum[static_cast<std::size_t>(symbol_index(l))]; }
  /// Max stratum index of the crossed edges; 0 for an empty path.
  int height(std::span<const Letter> edges) const;
  /// Total length of the H_r edges of a path.
  double r_length(std::span<const Letter> edges, int r) const;

  /// Max over edges of L(f(E)) / L(E).
  double lipschitz() const;
  std::int64_t max_image_edges() const;

 private:
  MarkedGraph graph_;
  std::vector<std::vector<Letter>> edge_images_;
  std::vector<int> vertex_images_;
  Filtration filtration_;
};

/// Fills transition matrices, classes, growth rates, suffixes, h values and
/// leagues, and returns the PF metric (per edge) for exponential strata.
Filtration classify_strata(const MarkedGraph& g, const std::vector<std::vector<Letter>>& edge_images,
                           const std::vector<std::vector<int>>& strata, std::vector<double>& metric);

/// Finest invariant filtration: strongly connected components of the
/// crossing digraph, lowest first, ties broken by smallest edge index.
std::vector<std::vector<int>> suggest_filtration(const MarkedGraph& g,
                                                 const std::vector<std::vector<Letter>>& edge_images);

/// f^k_#(rho).
EdgePath map_path(const GraphMap& f, const EdgePath& rho, int k = 1, const ResourceLimits& limits = {});
/// Raw f(rho) before tightening.
std::vector<Letter> map_raw(const GraphMap& f, std::span<const Letter> edges);
Circuit map_circuit(const GraphMap& f, const Circuit& c, int k = 1, const ResourceLimits& limits = {});

/// The rose representative of an automorphism. Uses `strata` if given,
/// otherwise the suggested filtration.
GraphMap rose_map(const Automorphism& phi, std::optional<std::vector<std::vector<int>>> strata = std::nullopt);
/// The rose representative of the supplied inverse (suggested filtration).
GraphMap rose_inverse_map(const Automorphism& phi);

/// Parses the `[graph]` / `[map]` / `[filtration]` text format.
GraphMap parse_graph_map(std::string_view text);
/// Parses an automorphism file and its optional `[filtration]` section.
GraphMap parse_rose_map(std::string_view text);
/// Dispatches on the presence of a `[graph]` section.
GraphMap parse_any_map(std::string_view text);
std::string format_graph_map(const GraphMap& f);

}  // namespace ttconvex
