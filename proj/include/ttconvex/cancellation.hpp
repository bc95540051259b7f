#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ttconvex/graph_map.hpp"
#include "ttconvex/legality.hpp"

namespace ttconvex {

/// Largest cancellation in f_#(alpha) f_#(beta) over immersed alpha.beta with
/// alpha, beta of 1..B edges, where f is given by raw edge images.
struct MaxCancellation {
  double length = 0.0;        // metric length cancelled, both sides together
  std::int64_t edges = 0;     // edges cancelled, both sides together
  EdgePath alpha;
  EdgePath beta;
  std::int64_t paths = 0;     // gamma paths enumerated
};

MaxCancellation max_cancellation(const MarkedGraph& g, const std::vector<std::vector<Letter>>& images, int B,
                                 std::int64_t path_cap = 5'000'000);

struct BccEstimate {
  double lower_bound = 0.0;
  std::optional<double> upper_bound;
  bool certified = false;
  int B = 0;
  EdgePath alpha;
  EdgePath beta;
  /// Constant used downstream: the upper bound when certified, else twice
  /// the lower bound.
  double selected = 0.0;
  bool heuristic = true;
};

enum class BccMode { exhaustive, certified };

/// Exhaustive lower bound at depth B; with an inverse, also the certified
/// bound Lip(f) (1 + 2 Lip(g) V_G).
BccEstimate bcc_constant(const GraphMap& f, int B, BccMode mode = BccMode::exhaustive,
                         const GraphMap* inverse = nullptr, std::int64_t path_cap = 5'000'000);

/// 2 C / (lambda_r - 1).
double critical_length(const GraphMap& f, double bcc, int r);

struct ThresholdCheck {
  std::int64_t exhaustive = 0;
  std::int64_t sampled = 0;
  int exhaustive_edges = 0;
};

struct Thresholds {
  double T = 0.0;
  double S = 0.0;
  bool heuristic = true;
  ThresholdCheck check;
};

/// T_r is the longest run of G_{r-1} edges in an image of an H_r edge.
double longest_lower_run(const GraphMap& f, int r);

/// T_r and S_r for an exponential stratum, followed by a bounded verification
/// over paths in G_{r-1}; a violation throws ThresholdError.
Thresholds thresholds(const GraphMap& f, double bcc, int r, const GraphMap* inverse = nullptr,
                      int exhaustive_edges = 5, std::size_t samples = 2000, std::uint64_t seed = 1,
                      const ResourceLimits& limits = {});

struct DeltaReport {
  double delta = 0.0;
  bool within_bound = true;     // |delta| <= L(mu)
  std::vector<int> identity_failures;  // k in 0..k_max where the length identity fails
};

/// Delta = L([mu nu]) - L(nu) for a period-one Nielsen path mu.
DeltaReport delta_nielsen(const GraphMap& f, const EdgePath& mu, const EdgePath& nu, int k_max = 6,
                          const ResourceLimits& limits = {});

/// E u f_#(u) f^2_#(u) ... split into n blocks (E is block 0).
std::vector<std::vector<Letter>> eigenray_blocks(const GraphMap& f, int edge, int n,
                                                 const ResourceLimits& limits = {});

struct SublemmaStep {
  int k = 0;
  int lost_i = 0;  // whole blocks of S_i cancelled at the junction
  int lost_j = 0;
};

struct SublemmaReport {
  std::vector<SublemmaStep> steps;
  bool both_sides = false;  // some k loses whole blocks on both sides
  bool violation = false;   // both_sides while E_i is superlinear
};

/// Iterates f_# on S_i . S_j^-1 (S = first blocks of E R) and records how
/// many whole blocks of R_i and R_j cancel at each step.
SublemmaReport sublemma_check(const GraphMap& f, int edge_i, int edge_j, int blocks_i, int blocks_j, int k_max,
                              bool superlinear, const ResourceLimits& limits = {});

}  // namespace ttconvex
