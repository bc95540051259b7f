#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ttconvex {

/// One parsed `name^exponent` token.
struct SymbolToken {
  int index;
  std::int64_t exponent;
};

/// Longest-match tokenizer shared by word, edge-path and hallway parsing.
std::vector<SymbolToken> tokenize_symbols(const std::vector<std::string>& names, std::string_view text);

}  // namespace ttconvex
