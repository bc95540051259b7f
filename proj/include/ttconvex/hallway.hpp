#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttconvex/graph_map.hpp"
#include "ttconvex/structure.hpp"

namespace ttconvex {

/// A hallway of duration k: slices rho_0..rho_k with
/// rho_i = [mu_i f(rho_{i-1}) nu_i] for 0 < i < k and rho_k = f_#(rho_{k-1}).
struct Hallway {
  std::vector<EdgePath> slices;
  /// mu[i-1] and nu[i-1] are the notches of step i, 0 < i < k.
  std::vector<EdgePath> mu, nu;

  double visible_length = 0.0;
  /// Max notch length.
  double quasi_smooth_bound = 0.0;
  double max_slice_length = 0.0;
  std::size_t argmax = 0;

  int duration() const noexcept { return static_cast<int>(slices.size()) - 1; }
  const EdgePath& rho0() const { return slices.front(); }
  bool smooth() const noexcept;
};

/// Slices rho_i = f^i_#(rho0), i <= N.
Hallway smooth_hallway(const GraphMap& f, const EdgePath& rho0, int N, const ResourceLimits& limits = {});

/// `mu` and `nu` are either empty (all trivial) or hold k-1 paths each.
/// Trivial notches are re-based to the vertex the chain requires.
Hallway build_hallway(const GraphMap& f, const EdgePath& rho0, int k, std::vector<EdgePath> mu = {},
                      std::vector<EdgePath> nu = {}, const ResourceLimits& limits = {});

/// Group form t^-1 u_{k-1} ... t^-1 u_1 t^-1 w_0 t v_1 t ... v_{k-1} t w_k^-1
/// over a rose map; the word must be trivial in the mapping torus.
Hallway parse_group_hallway(const GraphMap& rose, std::string_view word, const std::string& stable = "t",
                            const ResourceLimits& limits = {});

/// `[hallway]` section: `rho0 = ...`, `duration = k`, optional `mu_i`/`nu_i`,
/// or `word = ...` for the group form.
Hallway parse_hallway(const GraphMap& f, std::string_view text, const ResourceLimits& limits = {});

// ---------------------------------------------------------------------------
// Markings

struct Marking {
  /// marks[i][j]: stratum marking edge j of slice i.
  std::vector<std::vector<int>> marks;
};

Marking propagate_markings(const GraphMap& f, const Hallway& h);

enum class MarkClass { constant, linear, superlinear, exponential, zero, unknown };
const char* to_string(MarkClass c) noexcept;

/// Class of every stratum, indexed 1..n (entry 0 unused). Polynomial strata
/// with an uncertain degree <= 2 are `unknown`.
std::vector<MarkClass> stratum_classes(const GraphMap& f, const std::vector<GrowthDegree>& growth);

/// Per-slice counts by class, indexed by MarkClass.
std::vector<std::array<std::int64_t, 6>> class_counts(const Marking& m, const std::vector<MarkClass>& classes);

/// Edges of slice i not marked by a linear stratum; nullopt if any marking
/// in the slice has unknown class.
std::optional<std::int64_t> nonlin_count(const Marking& m, std::size_t slice, const std::vector<MarkClass>& classes);

// ---------------------------------------------------------------------------
// Trajectories, cutting and the sawtooth construction

struct Trajectory {
  std::size_t start = 0;  // position in rho_0
  /// Position in each slice while it survives.
  std::vector<std::int64_t> positions;
  bool survives = false;  // reaches rho_k
};

/// Point between edges p-1 and p of rho_0 (0 <= p <= |rho_0|).
Trajectory point_trajectory(const GraphMap& f, const Hallway& h, std::size_t p);

/// Edge p of rho_0, followed through the copy of itself at the front of f(E)
/// (or the back of f(E^-1)). Dies when the edge has no such copy.
Trajectory edge_trajectory(const GraphMap& f, const Hallway& h, std::size_t p);

/// Pieces between surviving point trajectories, left to right. mu goes to
/// the first piece and nu to the last.
std::vector<Hallway> split_hallway(const GraphMap& f, const Hallway& h, std::vector<std::size_t> points,
                                   const ResourceLimits& limits = {});

struct Cut {
  Hallway left;   // alpha t^k
  Hallway right;  // t^-k E beta E^-1
  int length = 0;
};

Cut cut(const GraphMap& f, const Hallway& h, std::size_t edge, const ResourceLimits& limits = {});

/// No edge of rho_0 admits a cut of length D.
bool is_indecomposable(const GraphMap& f, const Hallway& h);

/// Cuts along every surviving trajectory of the polynomial edge e and pushes
/// e out of the pieces, turning u_e into notches.
std::vector<Hallway> sawtooth(const GraphMap& f, const Hallway& h, int e, const ResourceLimits& limits = {});

// ---------------------------------------------------------------------------
// Subhallways in G_{r-1}

struct FanElement {
  Hallway hallway;
  /// Parent slice hosting rho_0 of the element.
  std::size_t start_slice = 0;
  /// Length of final-step notch material that falls outside the closed hallway.
  double clipped = 0.0;
};

struct Fan {
  std::vector<FanElement> smooth;  // M_1
  std::vector<FanElement> cut;     // M_2
  bool heuristic = false;
};

/// Follows maximal G_{r-1} segments through the slices of h. Elements are cut
/// at interior slices shorter than S.
Fan carve_subhallways(const GraphMap& f, const Hallway& h, int r, double S, bool heuristic_thresholds = false,
                      const ResourceLimits& limits = {});

}  // namespace ttconvex
