#pragma once

#include <string>
#include <vector>

#include "ttconvex/graph_map.hpp"
#include "ttconvex/legality.hpp"

namespace ttconvex {

// ---------------------------------------------------------------------------
// Improved relative train track validation

enum class CheckStatus { pass, fail, bounded_pass };
const char* to_string(CheckStatus s) noexcept;

struct PropertyCheck {
  std::string name;  // rtt1..rtt3, ttimproved1..ttimproved4
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct ValidationBounds {
  /// Edge bound for the quantified properties (rtt2, rtt3).
  int path_edges = 5;
  NielsenBounds nielsen{};
};

struct ValidationReport {
  std::vector<PropertyCheck> checks;
  bool ok() const noexcept;
};

ValidationReport validate_improved(const GraphMap& f, const ValidationBounds& bounds = {},
                                   const NielsenCatalog* catalog = nullptr);

// ---------------------------------------------------------------------------
// Polynomial strata

enum class PieceKind { basic, lower };

struct Piece {
  PieceKind kind = PieceKind::lower;
  EdgePath path;
};

/// Cuts rho (of height <= r, H_r = {E_r}) before every E_r and after every E_r^-1.
std::vector<Piece> split_poly_path(const GraphMap& f, const EdgePath& rho, int r);

struct Eigenray {
  /// Blocks u, f_#(u), f^2_#(u), ...
  std::vector<std::vector<Letter>> blocks;
  std::vector<Letter> edges;
  /// Start offsets of the blocks in `edges`.
  std::vector<std::size_t> boundaries;
  bool cancellation_free = true;
};

Eigenray eigenray(const GraphMap& f, int edge, int n_blocks, const ResourceLimits& limits = {});

enum class GrowthKind { polynomial, fast, exponential };

struct GrowthDegree {
  GrowthKind kind = GrowthKind::polynomial;
  int degree = 0;  // polynomial only
  /// False when the answer depends on a Nielsen catalog that was incomplete.
  bool certain = true;
};

/// Degree of growth of every edge, lowest stratum first. Nielsen subpaths of
/// the catalog count as degree 0 pieces of u_r.
std::vector<GrowthDegree> growth_degrees(const GraphMap& f, const NielsenCatalog& catalog);
std::string format_growth(const GrowthDegree& g);

}  // namespace ttconvex
