#include "ttconvex/automorphism.hpp"

#include <algorithm>
#include <sstream>

#include "ttconvex/error.hpp"
#include "ttconvex/text_format.hpp"

namespace ttconvex {

void ResourceLimits::validate() const {
  if (max_word_length <= 0 || max_iterations <= 0)
    throw ConfigError("resource limits must be strictly positive");
}

ReducedWord substitute(const std::vector<ReducedWord>& images, std::span<const Letter> w,
                       const ResourceLimits& limits) {
  std::vector<Letter> stack;
  const auto cap = static_cast<std::size_t>(limits.max_word_length);
  auto push = [&](Letter l) {
    if (!stack.empty() && stack.back() == -l) {
      stack.pop_back();
    } else {
      stack.push_back(l);
      if (stack.size() > cap)
        throw ResourceLimitError("word length exceeds max_word_length=" + std::to_string(limits.max_word_length));
    }
  };
  for (const Letter l : w) {
    const auto img = images.at(static_cast<std::size_t>(symbol_index(l))).letters();
    if (l > 0) {
      for (const Letter x : img) push(x);
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) push(-*it);
    }
  }
  return ReducedWord::from_reduced(std::move(stack));
}

Automorphism::Automorphism(Alphabet alphabet, std::vector<ReducedWord> images,
                           std::optional<std::vector<ReducedWord>> inverse_images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)), inverse_(std::move(inverse_images)) {
  const auto n = alphabet_.rank();
  auto check_letters = [n](const std::vector<ReducedWord>& imgs, const char* what) {
    if (imgs.size() != n)
      throw AlphabetError(std::string(what) + ": expected " + std::to_string(n) + " images, got " +
                          std::to_string(imgs.size()));
    for (const auto& w : imgs)
      for (const Letter l : w.letters())
        if (l == 0 || static_cast<std::size_t>(symbol_index(l)) >= n)
          throw AlphabetError(std::string(what) + ": letter outside the alphabet");
  };
  check_letters(images_, "images");
  for (const auto& w : images_) max_image_length_ = std::max(max_image_length_, w.length());
  if (inverse_) {
    check_letters(*inverse_, "inverse images");
    const ResourceLimits limits;
    for (std::size_t i = 0; i < n; ++i) {
      const Letter x = positive_letter(static_cast<int>(i));
      const auto a = substitute(images_, substitute(*inverse_, std::span(&x, 1), limits).letters(), limits);
      const auto b = substitute(*inverse_, images_[i].letters(), limits);
      if (a.length() != 1 || a[0] != x || b.length() != 1 || b[0] != x)
        throw MissingInverseError("supplied inverse does not invert generator '" + alphabet_.name(static_cast<int>(i)) +
                                  "'");
    }
  }
}

Automorphism Automorphism::inverse() const {
  if (!inverse_) throw MissingInverseError("automorphism has no supplied inverse");
  return Automorphism(alphabet_, *inverse_, images_);
}

Automorphism Automorphism::identity(const Alphabet& alphabet) {
  std::vector<ReducedWord> imgs;
  for (std::size_t i = 0; i < alphabet.rank(); ++i) {
    imgs.push_back(ReducedWord::from_reduced({positive_letter(static_cast<int>(i))}));
  }
  auto inv = imgs;
  return Automorphism(alphabet, std::move(imgs), std::move(inv));
}

ReducedWord apply(const Automorphism& phi, const ReducedWord& w, const ResourceLimits& limits) {
  return substitute(phi.images(), w.letters(), limits);
}

ReducedWord iterate(const Automorphism& phi, const ReducedWord& w, int k, const ResourceLimits& limits) {
  limits.validate();
  if (k > limits.max_iterations || -k > limits.max_iterations)
    throw ResourceLimitError("|k|=" + std::to_string(k < 0 ? -k : k) + " exceeds max_iterations=" +
                             std::to_string(limits.max_iterations));
  if (k < 0 && !phi.has_inverse())
    throw MissingInverseError("negative iteration requires a supplied inverse");
  const auto& images = k >= 0 ? phi.images() : *phi.inverse_images();
  ReducedWord cur = w;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) cur = substitute(images, cur.letters(), limits);
  return cur;
}

std::vector<std::int64_t> orbit_lengths(const Automorphism& phi, const ReducedWord& w, int N, LengthMode mode,
                                        const ResourceLimits& limits) {
  limits.validate();
  if (N < 0 || N > limits.max_iterations)
    throw ResourceLimitError("N=" + std::to_string(N) + " outside [0, max_iterations]");
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  ReducedWord cur = w;
  for (int i = 0;; ++i) {
    out.push_back(mode == LengthMode::word ? cur.length() : cyclic_length(cur.letters()));
    if (i == N) break;
    cur = apply(phi, cur, limits);
  }
  return out;
}

Automorphism stabilize(const Automorphism& phi, const std::string& fresh, bool auto_rename) {
  std::string name = fresh;
  if (phi.alphabet().find(name) >= 0) {
    if (!auto_rename) throw AlphabetError("fresh generator '" + fresh + "' collides with an existing generator");
    for (int i = 1;; ++i) {
      name = fresh + "_" + std::to_string(i);
      if (phi.alphabet().find(name) < 0) break;
    }
  }
  auto alphabet = phi.alphabet().extended(name);
  const Letter a = positive_letter(static_cast<int>(phi.rank()));
  auto images = phi.images();
  images.push_back(ReducedWord::from_reduced({a}));
  std::optional<std::vector<ReducedWord>> inv;
  if (phi.has_inverse()) {
    inv = *phi.inverse_images();
    inv->push_back(ReducedWord::from_reduced({a}));
  }
  return Automorphism(std::move(alphabet), std::move(images), std::move(inv));
}

Automorphism compose(const Automorphism& phi, const Automorphism& psi, const ResourceLimits& limits) {
  if (!(phi.alphabet() == psi.alphabet())) throw AlphabetError("composition requires a common alphabet");
  std::vector<ReducedWord> images;
  for (const auto& w : psi.images()) images.push_back(substitute(phi.images(), w.letters(), limits));
  std::optional<std::vector<ReducedWord>> inv;
  if (phi.has_inverse() && psi.has_inverse()) {
    inv.emplace();
    for (const auto& w : *phi.inverse_images())
      inv->push_back(substitute(*psi.inverse_images(), w.letters(), limits));
  }
  return Automorphism(phi.alphabet(), std::move(images), std::move(inv));
}

namespace {

std::vector<ReducedWord> parse_image_lines(const Alphabet& alphabet, const TextSection& section,
                                           bool skip_generators_line) {
  std::vector<std::optional<ReducedWord>> images(alphabet.rank());
  for (const auto& line : section.lines) {
    std::string lhs, rhs;
    if (skip_generators_line && split_pair(line.text, "=", lhs, rhs) && lhs == "generators") continue;
    if (!split_pair(line.text, "->", lhs, rhs))
      throw ParseError(located(section, line, "expected 'x -> word'"));
    const int idx = alphabet.find(lhs);
    if (idx < 0) throw ParseError(located(section, line, "unknown generator '" + lhs + "'"));
    if (images[static_cast<std::size_t>(idx)])
      throw ParseError(located(section, line, "duplicate image for '" + lhs + "'"));
    try {
      images[static_cast<std::size_t>(idx)] = parse_word(alphabet, rhs);
    } catch (const AlphabetError& e) {
      throw ParseError(located(section, line, e.what()));
    }
  }
  std::vector<ReducedWord> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i])
      throw ParseError("section [" + section.name + "] (line " + std::to_string(section.header_line) +
                       "): missing image for '" + alphabet.name(static_cast<int>(i)) + "'");
    out.push_back(*images[i]);
  }
  return out;
}

}  // namespace

Automorphism parse_automorphism(std::string_view text) {
  const auto sections = split_sections(text);
  const TextSection* aut = find_section(sections, "automorphism");
  if (!aut) throw ParseError("missing [automorphism] section");
  std::optional<Alphabet> alphabet;
  for (const auto& line : aut->lines) {
    std::string lhs, rhs;
    if (split_pair(line.text, "=", lhs, rhs) && lhs == "generators") {
      try {
        alphabet = Alphabet(split_ws(rhs));
      } catch (const AlphabetError& e) {
        throw ParseError(located(*aut, line, e.what()));
      }
    }
  }
  if (!alphabet) throw ParseError("[automorphism] section (line " + std::to_string(aut->header_line) +
                                  "): missing 'generators = ...' line");
  auto images = parse_image_lines(*alphabet, *aut, true);
  std::optional<std::vector<ReducedWord>> inv;
  if (const TextSection* s = find_section(sections, "inverse")) inv = parse_image_lines(*alphabet, *s, true);
  try {
    return Automorphism(*alphabet, std::move(images), std::move(inv));
  } catch (const MissingInverseError& e) {
    throw ParseError(std::string("[inverse]: ") + e.what());
  }
}

std::string format_automorphism(const Automorphism& phi) {
  std::ostringstream out;
  const auto& a = phi.alphabet();
  auto section = [&](const char* name, const std::vector<ReducedWord>& imgs) {
    out << '[' << name << "]\n" << "generators =";
    for (const auto& n : a.names()) out << ' ' << n;
    out << '\n';
    for (std::size_t i = 0; i < imgs.size(); ++i)
      out << a.name(static_cast<int>(i)) << " -> " << format_word(a, imgs[i]) << '\n';
  };
  section("automorphism", phi.images());
  if (phi.has_inverse()) {
    out << '\n';
    section("inverse", *phi.inverse_images());
  }
  return out.str();
}

}  // namespace ttconvex
