#include "ttconvex/word.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <unordered_set>

#include "ttconvex/error.hpp"
#include "ttconvex/symbols.hpp"

namespace ttconvex {

std::vector<Letter> inverse(std::span<const Letter> letters) {
  std::vector<Letter> out(letters.rbegin(), letters.rend());
  for (auto& l : out) l = -l;
  return out;
}

namespace {

bool valid_symbol_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '\'' || c == '^' || c == '#' ||
        c == '=' || c == '>') {
      return false;
    }
  }
  return true;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw AlphabetError("alphabet must contain at least one generator");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!valid_symbol_name(n)) throw AlphabetError("invalid generator name '" + n + "'");
    if (!seen.insert(n).second) throw AlphabetError("duplicate generator name '" + n + "'");
  }
}

int Alphabet::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

std::string Alphabet::token(Letter l) const {
  std::string s = names_.at(symbol_index(l));
  if (l < 0) s += '\'';
  return s;
}

Alphabet Alphabet::extended(std::string name) const {
  auto names = names_;
  names.push_back(std::move(name));
  return Alphabet(std::move(names));
}

std::size_t reduce_in_place(std::vector<Letter>& letters) {
  std::size_t top = 0;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const Letter l = letters[i];
    if (top > 0 && letters[top - 1] == -l) {
      --top;
    } else {
      letters[top++] = l;
    }
  }
  letters.resize(top);
  return top;
}

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
  ReducedWord w;
  w.letters_.assign(letters.begin(), letters.end());
  reduce_in_place(w.letters_);
  return w;
}

ReducedWord ReducedWord::from_reduced(std::vector<Letter> letters) {
  ReducedWord w;
  w.letters_ = std::move(letters);
#ifndef NDEBUG
  for (std::size_t i = 1; i < w.letters_.size(); ++i) assert(w.letters_[i] != -w.letters_[i - 1]);
#endif
  return w;
}

ReducedWord ReducedWord::inverse() const {
  return from_reduced(ttconvex::inverse(letters_));
}

ReducedWord ReducedWord::operator*(const ReducedWord& other) const {
  std::vector<Letter> raw;
  raw.reserve(letters_.size() + other.letters_.size());
  raw.insert(raw.end(), letters_.begin(), letters_.end());
  raw.insert(raw.end(), other.letters_.begin(), other.letters_.end());
  reduce_in_place(raw);
  return from_reduced(std::move(raw));
}

CyclicWord::CyclicWord(std::vector<Letter> core) : core_(std::move(core)) {
  assert(core_.size() < 2 || core_.front() != -core_.back());
}

std::vector<Letter> CyclicWord::canonical() const {
  const std::size_t k = least_rotation(core_);
  std::vector<Letter> out;
  out.reserve(core_.size());
  out.insert(out.end(), core_.begin() + static_cast<std::ptrdiff_t>(k), core_.end());
  out.insert(out.end(), core_.begin(), core_.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

CyclicReduction cyclic_reduce(const ReducedWord& w) {
  const auto s = w.letters();
  std::size_t lo = 0, hi = s.size();
  while (hi - lo >= 2 && s[lo] == -s[hi - 1]) {
    ++lo;
    --hi;
  }
  CyclicReduction out;
  out.core = CyclicWord(std::vector<Letter>(s.begin() + static_cast<std::ptrdiff_t>(lo),
                                            s.begin() + static_cast<std::ptrdiff_t>(hi)));
  out.conjugator = ReducedWord::from_reduced(
      std::vector<Letter>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(lo)));
  return out;
}

std::int64_t cyclic_length(std::span<const Letter> s) {
  std::size_t lo = 0, hi = s.size();
  while (hi - lo >= 2 && s[lo] == -s[hi - 1]) {
    ++lo;
    --hi;
  }
  return static_cast<std::int64_t>(hi - lo);
}

std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = s[(i + k) % n];
    const Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return n == 0 ? 0 : std::min(i, j);
}

std::vector<SymbolToken> tokenize_symbols(const std::vector<std::string>& names, std::string_view text) {
  std::vector<SymbolToken> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '*' || c == ',') {
      ++pos;
      continue;
    }
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& n = names[i];
      if (n.size() > best_len && text.substr(pos, n.size()) == n) {
        best = static_cast<int>(i);
        best_len = n.size();
      }
    }
    if (best < 0) {
      std::size_t end = pos;
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
      throw AlphabetError("unknown symbol at '" + std::string(text.substr(pos, end - pos)) + "'");
    }
    pos += best_len;
    std::int64_t exponent = 1;
    while (pos < text.size() && text[pos] == '\'') {
      exponent = -exponent;
      ++pos;
    }
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::size_t end = pos;
      if (end < text.size() && (text[end] == '-' || text[end] == '+')) ++end;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      std::string num(text.substr(pos, end - pos));
      if (!num.empty() && num[0] == '+') num.erase(0, 1);
      std::int64_t e = 0;
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), e);
      if (ec != std::errc() || p != num.data() + num.size() || num.empty())
        throw AlphabetError("malformed exponent after '" + names[static_cast<std::size_t>(best)] + "'");
      exponent *= e;
      pos = end;
    }
    out.push_back({best, exponent});
  }
  return out;
}

std::vector<Letter> parse_letters(const Alphabet& alphabet, std::string_view text) {
  std::vector<Letter> out;
  for (const auto& tok : tokenize_symbols(alphabet.names(), text)) {
    const Letter l = tok.exponent >= 0 ? positive_letter(tok.index) : -positive_letter(tok.index);
    const std::int64_t n = tok.exponent >= 0 ? tok.exponent : -tok.exponent;
    out.insert(out.end(), static_cast<std::size_t>(n), l);
  }
  return out;
}

ReducedWord parse_word(const Alphabet& alphabet, std::string_view text) {
  return ReducedWord::reduce(parse_letters(alphabet, text));
}

std::string format_letters(const Alphabet& alphabet, std::span<const Letter> letters) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    out += alphabet.token(letters[i]);
  }
  return out;
}

}  // namespace ttconvex
