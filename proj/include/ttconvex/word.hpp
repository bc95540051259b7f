#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ttconvex {

/// A signed generator (or oriented edge) index: +(i+1) is the i-th symbol,
/// -(i+1) its inverse. Zero is never a valid letter.
using Letter = std::int32_t;

inline constexpr Letter inverse(Letter l) noexcept { return -l; }
inline constexpr int symbol_index(Letter l) noexcept { return (l < 0 ? -l : l) - 1; }
inline constexpr Letter positive_letter(int index) noexcept { return index + 1; }

/// Inverse of a letter sequence: reversed, each letter inverted.
std::vector<Letter> inverse(std::span<const Letter> letters);

/// Ordered generator names. Each generator has a formal inverse written
/// with a trailing apostrophe.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t rank() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(int index) const { return names_.at(index); }

  /// Index of a generator name, or -1.
  int find(std::string_view name) const noexcept;

  /// Renders a letter as `name` or `name'`.
  std::string token(Letter l) const;

  /// Returns a copy with one more generator appended.
  Alphabet extended(std::string name) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Freely reduced word. Construction always reduces; the invariant that no
/// letter is adjacent to its inverse holds for every instance.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Leftmost-first stack reduction of an arbitrary letter sequence.
  static ReducedWord reduce(std::span<const Letter> letters);
  /// Wraps letters the caller guarantees are already reduced (checked in debug builds).
  static ReducedWord from_reduced(std::vector<Letter> letters);

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::int64_t length() const noexcept { return static_cast<std::int64_t>(letters_.size()); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  ReducedWord inverse() const;
  /// Reduced product this·other.
  ReducedWord operator*(const ReducedWord& other) const;

  bool operator==(const ReducedWord&) const = default;
  auto operator<=>(const ReducedWord&) const = default;

 private:
  std::vector<Letter> letters_;
};

/// Reduces `letters` in place (leftmost-first) and returns the new size.
std::size_t reduce_in_place(std::vector<Letter>& letters);

/// Cyclically reduced word; equality is up to rotation.
class CyclicWord {
 public:
  CyclicWord() = default;
  /// `core` must be cyclically reduced.
  explicit CyclicWord(std::vector<Letter> core);

  std::span<const Letter> letters() const noexcept { return core_; }
  std::int64_t length() const noexcept { return static_cast<std::int64_t>(core_.size()); }

  /// Least rotation, used as the canonical representative.
  std::vector<Letter> canonical() const;

  bool operator==(const CyclicWord& other) const { return canonical() == other.canonical(); }

 private:
  std::vector<Letter> core_;
};

struct CyclicReduction {
  CyclicWord core;
  ReducedWord conjugator;  // w = conjugator · core · conjugator⁻¹
};

CyclicReduction cyclic_reduce(const ReducedWord& w);

/// Length of the cyclic reduction of a reduced letter sequence.
std::int64_t cyclic_length(std::span<const Letter> reduced);

/// Index of the lexicographically least rotation (Booth's algorithm).
std::size_t least_rotation(std::span<const Letter> s);

/// Parses whitespace-separated or juxtaposed tokens `x`, `x'`, `x^k`, `x'^k`
/// (k may be negative) into a raw letter sequence. Throws AlphabetError on
/// unknown symbols.
std::vector<Letter> parse_letters(const Alphabet& alphabet, std::string_view text);

ReducedWord parse_word(const Alphabet& alphabet, std::string_view text);
std::string format_letters(const Alphabet& alphabet, std::span<const Letter> letters);
inline std::string format_word(const Alphabet& alphabet, const ReducedWord& w) {
  return format_letters(alphabet, w.letters());
}

}  // namespace ttconvex
