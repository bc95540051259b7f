#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttconvex/graph_map.hpp"

namespace ttconvex {

/// Unordered pair of directions at a common vertex, stored with a <= b.
struct Turn {
  Letter a = 0;
  Letter b = 0;

  static Turn make(Letter x, Letter y) noexcept { return x <= y ? Turn{x, y} : Turn{y, x}; }
  bool degenerate() const noexcept { return a == b; }
  bool operator==(const Turn&) const = default;
};

/// Exact legal/illegal classification of every turn.
class LegalityTable {
 public:
  explicit LegalityTable(const GraphMap& f);

  /// First edge of f(d).
  Letter df(Letter d) const { return df_[index(d)]; }
  Turn df(Turn t) const { return Turn::make(df(t.a), df(t.b)); }

  bool illegal(Letter x, Letter y) const { return illegal_[index(x) * dirs_ + index(y)] != 0; }
  bool illegal(Turn t) const { return illegal(t.a, t.b); }
  /// The turn (prev^-1, next) crossed between consecutive path edges.
  bool illegal_junction(Letter prev, Letter next) const { return illegal(-prev, next); }

  /// Every turn, including degenerate ones.
  std::vector<Turn> turns() const;
  int nondegenerate_illegal_count() const;

 private:
  static std::size_t index(Letter l) noexcept {
    return 2 * static_cast<std::size_t>(symbol_index(l)) + (l < 0 ? 1 : 0);
  }
  const MarkedGraph* graph_;
  std::size_t dirs_ = 0;
  std::vector<Letter> df_;
  std::vector<char> illegal_;
};

/// Junction positions i (turn between edges[i] and edges[i+1]) that are
/// illegal and involve an H_r edge. With `closed`, the wrap-around turn has
/// position size-1.
std::vector<std::size_t> r_illegal_turns(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges,
                                         int r, bool closed = false);

struct RStats {
  double r_length = 0.0;
  int legal_segments = 0;
  bool r_legal = true;
};

RStats r_stats(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges, int r, bool closed = false);

/// Maximal r-legal segment [begin, end) with its r-length.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  double r_length = 0.0;
};

std::vector<Segment> legal_segments(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges, int r);

// ---------------------------------------------------------------------------
// Nielsen paths

struct NielsenBounds {
  int max_edges = 24;
  int max_period = 6;
  /// Only search paths in G_max_height; 0 searches the whole graph.
  int max_height = 0;
  std::int64_t node_budget = 2000000;
};

struct NielsenPath {
  EdgePath path;
  int period = 1;
  int height = 0;
  bool closed = false;
};

struct NielsenCatalog {
  std::vector<NielsenPath> paths;
  NielsenBounds bounds;
  /// False when the edge bound or node budget cut a live branch.
  bool complete = true;
  /// Every edge is itself Nielsen (for example the identity map).
  bool saturated = false;
  /// Prefix pruning relies on an estimated cancellation slack.
  bool heuristic = true;
  std::vector<std::int64_t> slack;  // per period, in edges
  std::int64_t nodes = 0;

  std::vector<const NielsenPath*> of_height(int r) const;
  bool has_closed(int r) const;
};

/// Smallest p <= max_period with f^p_#(rho) = rho and fixed endpoints, or 0.
int nielsen_period(const GraphMap& f, const EdgePath& rho, int max_period, const ResourceLimits& limits = {});

/// Bounded search for indivisible periodic Nielsen paths with vertex endpoints.
NielsenCatalog find_nielsen(const GraphMap& f, const NielsenBounds& bounds = {}, const ResourceLimits& limits = {});

struct NCount {
  int value = 0;
  /// False when the catalog is incomplete for height r; value is then an upper bound.
  bool exact = true;
};

/// Legal segments of rho (split at r-illegal turns) that do not overlap a
/// catalogued Nielsen subpath of height r.
/// True if `edges` splits into catalogued height-r Nielsen paths (or their
/// inverses) and edges of G_{r-1}.
bool is_nielsen_concatenation(const GraphMap& f, std::span<const Letter> edges, int r, const NielsenCatalog& catalog);

NCount N_count(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges, int r,
               const NielsenCatalog& catalog);

// ---------------------------------------------------------------------------
// Trichotomy

enum class TrichotomyCase { long_legal, fewer_segments, pre_nielsen, unknown };
const char* to_string(TrichotomyCase c) noexcept;

struct TrichotomyResult {
  TrichotomyCase which = TrichotomyCase::unknown;
  int M = 0;
  /// long_legal: the segment of f^M_#(rho).
  std::optional<Segment> segment;
  int n_before = 0;
  int n_after = 0;
  /// pre_nielsen: rho = rho[0, cut_begin) . rho' . rho[cut_end, n).
  std::size_t cut_begin = 0;
  std::size_t cut_end = 0;
};

TrichotomyResult trichotomy(const GraphMap& f, const LegalityTable& t, const EdgePath& rho, int r, double L, int M,
                            const NielsenCatalog& catalog, const ResourceLimits& limits = {});

struct MSelection {
  int M = 0;  // 0 when no M <= max_M worked
  bool heuristic = true;
  std::size_t corpus_size = 0;
  std::size_t unknown_at_max = 0;
};

/// Smallest M <= max_M such that the trichotomy is certified for every
/// corpus path.
MSelection select_M(const GraphMap& f, const LegalityTable& t, int r, double L, const std::vector<EdgePath>& corpus,
                    const NielsenCatalog& catalog, int max_M = 32, const ResourceLimits& limits = {});

/// Seeded random immersed paths of height exactly r with 1..max_edges edges.
std::vector<EdgePath> random_height_paths(const GraphMap& f, int r, std::size_t count, int max_edges,
                                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fast polynomial strata

struct FastPolyResult {
  bool applicable = false;
  std::optional<int> k0;
};

/// Smallest k such that f^k_#(E) has an s-legal subpath of height s with
/// s-length above critical[s] for some exponential s below E, for every
/// listed fast edge. `critical` is indexed by stratum (1-based; 0 unused).
FastPolyResult fastpoly_exponent(const GraphMap& f, const LegalityTable& t, const std::vector<int>& fast_edges,
                                 const std::vector<double>& critical, const ResourceLimits& limits = {});

}  // namespace ttconvex
