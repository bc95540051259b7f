#include "ttconvex/text_format.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ttconvex/error.hpp"

namespace ttconvex {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool split_pair(std::string_view s, std::string_view sep, std::string& lhs, std::string& rhs) {
  const auto pos = s.find(sep);
  if (pos == std::string_view::npos) return false;
  lhs = trim(s.substr(0, pos));
  rhs = trim(s.substr(pos + sep.size()));
  return true;
}

std::vector<TextSection> split_sections(std::string_view text) {
  std::vector<TextSection> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("line " + std::to_string(number) + ": unterminated section header");
      out.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), number, {}});
      continue;
    }
    if (out.empty()) throw ParseError("line " + std::to_string(number) + ": content before any [section] header");
    out.back().lines.push_back({number, std::move(line)});
  }
  return out;
}

const TextSection* find_section(const std::vector<TextSection>& sections, std::string_view name) {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::string located(const TextSection& section, const TextSection::Line& line, const std::string& message) {
  return "line " + std::to_string(line.number) + " [" + section.name + "]: " + message;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ttconvex
