#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttconvex/word.hpp"

namespace ttconvex {

/// Hard caps on symbolic growth. Exceeding either is an error, never a
/// silent truncation.
struct ResourceLimits {
  std::int64_t max_word_length = 10'000'000;
  int max_iterations = 64;

  void validate() const;
};

enum class LengthMode { word, cyclic };

/// Endomorphism of a free group given by generator images, with an optional
/// inverse. A supplied inverse is checked on construction.
class Automorphism {
 public:
  Automorphism(Alphabet alphabet, std::vector<ReducedWord> images,
               std::optional<std::vector<ReducedWord>> inverse_images = std::nullopt);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t rank() const noexcept { return alphabet_.rank(); }
  const std::vector<ReducedWord>& images() const noexcept { return images_; }
  const std::optional<std::vector<ReducedWord>>& inverse_images() const noexcept { return inverse_; }
  bool has_inverse() const noexcept { return inverse_.has_value(); }

  /// L = max |φ(x_i)|.
  std::int64_t max_image_length() const noexcept { return max_image_length_; }

  /// The supplied inverse as an automorphism of its own.
  Automorphism inverse() const;

  /// Identity automorphism on `alphabet`.
  static Automorphism identity(const Alphabet& alphabet);

 private:
  Alphabet alphabet_;
  std::vector<ReducedWord> images_;
  std::optional<std::vector<ReducedWord>> inverse_;
  std::int64_t max_image_length_ = 0;
};

/// Freely reduced image of `w` under the letter-wise substitution `images`.
ReducedWord substitute(const std::vector<ReducedWord>& images, std::span<const Letter> w,
                       const ResourceLimits& limits);

ReducedWord apply(const Automorphism& phi, const ReducedWord& w, const ResourceLimits& limits = {});

/// k-fold application with reduction after each step; negative k uses the
/// supplied inverse and throws MissingInverseError without one.
ReducedWord iterate(const Automorphism& phi, const ReducedWord& w, int k, const ResourceLimits& limits = {});

/// Entry i is |φ^i(w)| (word mode) or ||φ^i(w)|| (cyclic mode), i = 0..N.
std::vector<std::int64_t> orbit_lengths(const Automorphism& phi, const ReducedWord& w, int N, LengthMode mode,
                                        const ResourceLimits& limits = {});

/// ψ on one extra generator with ψ(x_i) = φ(x_i) and ψ(a) = a. A colliding
/// name is renamed (`a_1`, `a_2`, ...) unless `auto_rename` is false.
Automorphism stabilize(const Automorphism& phi, const std::string& fresh = "a", bool auto_rename = true);

/// Composition (φ∘ψ)(x) = φ(ψ(x)); both must share an alphabet.
Automorphism compose(const Automorphism& phi, const Automorphism& psi, const ResourceLimits& limits = {});

/// Parses the line-oriented `[automorphism]` / `[inverse]` text format.
Automorphism parse_automorphism(std::string_view text);
std::string format_automorphism(const Automorphism& phi);

}  // namespace ttconvex
