#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttconvex/automorphism.hpp"
#include "ttconvex/graph_map.hpp"
#include "ttconvex/legality.hpp"
#include "ttconvex/structure.hpp"

namespace ttconvex {

// ---------------------------------------------------------------------------
// Corpora

struct CorpusSpec {
  enum class Kind { ball, sphere, random, fixture } kind = Kind::ball;
  int radius = 0;
  int count = 0;
  int length = 0;
  std::uint64_t seed = 0;
  std::string name;  // fixture
  int param = 5;     // fixture family parameter
  /// Restrict letters to these generators (empty: all).
  std::vector<std::string> generators;
};

/// "ball(4)", "sphere(2)", "random(100,12,7)", "fixture(expex,5)", with an
/// optional "@a,b,c" generator restriction.
CorpusSpec parse_corpus_spec(std::string_view text);
std::string format_corpus_spec(const CorpusSpec& spec);

struct Corpus {
  std::vector<ReducedWord> words;
  /// Group-form hallway words (fixture "bulgeex").
  std::vector<std::string> hallways;
};

/// Deterministic for a fixed spec. Fixtures needing phi^-1 require an inverse.
Corpus make_corpus(const Automorphism& phi, const CorpusSpec& spec);

// ---------------------------------------------------------------------------
// Empirical K

enum class ConvexityMode { word, cyclic, path, circuit };
const char* to_string(ConvexityMode m) noexcept;

struct ConvexityWitness {
  std::size_t index = 0;
  std::string text;
  int i = 0;
  int N = 0;
  double ratio = 0.0;
};

struct ConvexityReport {
  ConvexityMode mode = ConvexityMode::word;
  std::string corpus;
  int N_max = 0;
  /// max over corpus and 0 <= i <= N <= N_max of len_i / (len_0 + len_N).
  double raw_K = 0.0;
  /// max(1, raw_K).
  double empirical_K = 1.0;
  std::optional<ConvexityWitness> witness;
  /// series[N] = max over the corpus and i <= N at that N.
  std::vector<double> series;
  /// Same with i = N only.
  std::vector<double> diagonal;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::vector<std::string> flags;

  /// raw K restricted to N <= n.
  double raw_K_at(int n) const;
};

/// Threads from TTCONVEX_THREADS, else hardware concurrency.
unsigned thread_count();

ConvexityReport empirical_K(const Automorphism& phi, const std::vector<ReducedWord>& corpus, int N_max, LengthMode mode,
                            const ResourceLimits& limits = {}, std::string corpus_name = {});

/// Path or circuit mode over a graph map; lengths are metric lengths.
ConvexityReport empirical_K(const GraphMap& f, const std::vector<EdgePath>& corpus, int N_max, bool circuits,
                            const ResourceLimits& limits = {}, std::string corpus_name = {});

// ---------------------------------------------------------------------------
// Lower bounds for orbit growth

struct LowerBoundFit {
  int r = 0;
  bool exponential = false;
  int degree = 0;
  /// C for polynomial strata, lambda for exponential or fast ones.
  double value = 0.0;
  std::optional<std::size_t> witness;
  int witness_k = 0;
  std::size_t used = 0;
  std::size_t excluded = 0;
  bool heuristic = false;
};

/// Polynomial H_r of degree d > 1: largest C with L(g) + L(f^k g) >= C k^d.
/// Exponential or fast H_r: largest lambda with L(s) + L(f^k s) >= lambda^k,
/// skipping concatenations of height-r Nielsen paths and G_{r-1} paths.
/// Elements of other heights are excluded. k runs over 1..k_max.
LowerBoundFit lowerbound_fit(const GraphMap& f, const std::vector<EdgePath>& corpus, int r, int k_max,
                             const NielsenCatalog& catalog, const std::vector<GrowthDegree>& growth,
                             bool circuits = false, const ResourceLimits& limits = {});

// ---------------------------------------------------------------------------
// Constant ledger

/// Ordered from strongest to weakest.
enum class Provenance { recurrence, measured, heuristic, empirical_only };
const char* to_string(Provenance p) noexcept;

struct LedgerValue {
  double value = 0.0;
  Provenance provenance = Provenance::measured;
};

struct LedgerInputs {
  std::optional<int> degree;  // q
  std::optional<LedgerValue> K;  // nonlinear count constant
  std::optional<LedgerValue> M;
  std::optional<LedgerValue> C;
  /// Overrides K'_q(C) when given.
  std::optional<LedgerValue> K_prime;
  std::optional<LedgerValue> L;
  std::optional<int> power;  // k
  bool exponential_strata = false;
};

struct LedgerEntry {
  std::string name;
  double value = 0.0;
  Provenance provenance = Provenance::recurrence;
};

struct ConstantLedger {
  std::vector<LedgerEntry> entries;
  const LedgerEntry* find(std::string_view name) const;
};

/// K_1 = 1, K_{d+1} = K + K_d + M.
double ledger_K(int d, double K, double M);
/// K'_1(C) = 4C^2, K'_{d+1}(C) = 4C^2 K_d + 2C K'_d(2C).
double ledger_K_prime(int d, double C, double K, double M);

ConstantLedger ledger(const LedgerInputs& in);

}  // namespace ttconvex
