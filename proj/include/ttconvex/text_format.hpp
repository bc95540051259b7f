#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ttconvex {

/// A `[name]` section of a line-oriented input file; comments (`#`) and
/// blank lines are already stripped.
struct TextSection {
  struct Line {
    int number;
    std::string text;
  };
  std::string name;
  int header_line = 0;
  std::vector<Line> lines;
};

std::vector<TextSection> split_sections(std::string_view text);

const TextSection* find_section(const std::vector<TextSection>& sections, std::string_view name);

/// "line N [section]: message"
std::string located(const TextSection& section, const TextSection::Line& line, const std::string& message);

std::string trim(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);

/// Splits `lhs <sep> rhs` at the first occurrence of `sep`; false if absent.
bool split_pair(std::string_view s, std::string_view sep, std::string& lhs, std::string& rhs);

std::string read_file(const std::string& path);

}  // namespace ttconvex
