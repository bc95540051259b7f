#pragma once

// Small seeded generators shared by the property tests.

#include <random>
#include <vector>

#include "ttconvex/word.hpp"

namespace testgen {

using ttconvex::Letter;

inline Letter random_letter(std::mt19937_64& rng, int rank) {
  std::uniform_int_distribution<int> d(0, 2 * rank - 1);
  const int v = d(rng);
  return v < rank ? ttconvex::positive_letter(v) : -ttconvex::positive_letter(v - rank);
}

inline std::vector<Letter> random_raw(std::mt19937_64& rng, int rank, std::size_t len) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(random_letter(rng, rank));
  return out;
}

/// Uniform reduced word of exact length `len`.
inline std::vector<Letter> random_reduced(std::mt19937_64& rng, int rank, std::size_t len) {
  std::vector<Letter> out;
  while (out.size() < len) {
    const Letter l = random_letter(rng, rank);
    if (!out.empty() && out.back() == -l) continue;
    out.push_back(l);
  }
  return out;
}

/// Naive oracle: repeatedly delete the first cancelling pair until none remain.
inline std::vector<Letter> naive_reduce(std::vector<Letter> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

}  // namespace testgen
