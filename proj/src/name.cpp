#include "andbench/name.hpp"

#include <algorithm>

#include "andbench/error.hpp"
#include "andbench/utf8.hpp"

namespace andbench {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_four_digits(std::string_view token) {
  return token.size() == 4 &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string strip_periods(std::string folded) {
  while (!folded.empty() && folded.back() == '.') folded.pop_back();
  return folded;
}

// Non-ASCII code points treated as punctuation, symbols or spaces.
bool is_non_ascii_separator(char32_t cp) {
  return (cp >= 0x0080 && cp <= 0x00BF && cp != 0x00AA && cp != 0x00B2 && cp != 0x00B3 &&
          cp != 0x00B5 && cp != 0x00B9 && cp != 0x00BA) ||
         cp == 0x00D7 || cp == 0x00F7 || (cp >= 0x02B9 && cp <= 0x036F) ||
         (cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFE00 && cp <= 0xFE6F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
         (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65) || cp == 0xFEFF || (cp >= 0x1F000 && cp <= 0x1FAFF);
}

bool tokens_match(const std::string& a, const std::string& b) {
  if (a == b) return true;
  if (utf8::length(a) == 1) return utf8::first_char(b) == a;
  if (utf8::length(b) == 1) return utf8::first_char(a) == b;
  return false;
}

std::vector<std::string> sorted_normalized(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(strip_periods(utf8::fold(t)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ParsedName parse_name(std::string_view raw_name) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < raw_name.size()) {
    while (i < raw_name.size() && is_ascii_space(raw_name[i])) ++i;
    std::size_t start = i;
    while (i < raw_name.size() && !is_ascii_space(raw_name[i])) ++i;
    if (i > start) tokens.emplace_back(raw_name.substr(start, i - start));
  }
  if (tokens.empty()) throw NameError("empty author name");

  ParsedName parsed;
  if (tokens.size() >= 2 && is_four_digits(tokens.back())) {
    parsed.homonym_suffix = std::move(tokens.back());
    tokens.pop_back();
  }
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (t) parsed.display_name.push_back(' ');
    parsed.display_name += tokens[t];
  }
  parsed.surname = std::move(tokens.back());
  tokens.pop_back();
  parsed.forenames = std::move(tokens);
  return parsed;
}

std::string normalize_name_part(std::string_view part) { return utf8::fold(part); }

bool is_initial(std::string_view token) {
  return utf8::length(strip_periods(utf8::fold(token))) == 1;
}

BlockKey blocking_key(const ParsedName& name) {
  std::string key;
  if (!name.forenames.empty()) key = utf8::first_char(utf8::fold(name.forenames.front()));
  key.push_back('|');
  key += utf8::fold(name.surname);
  return BlockKey{std::move(key)};
}

InitialsKey all_initials_key(const ParsedName& name) {
  std::string key;
  for (const auto& f : name.forenames) key += utf8::first_char(utf8::fold(f));
  key.push_back('|');
  key += utf8::fold(name.surname);
  return InitialsKey{std::move(key)};
}

std::string normalize_title(std::string_view title) {
  const std::string folded = utf8::fold(title);
  std::string out;
  out.reserve(folded.size());
  std::size_t pos = 0;
  while (pos < folded.size()) {
    auto c = static_cast<unsigned char>(folded[pos]);
    if (c < 0x80) {
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) out.push_back(static_cast<char>(c));
      ++pos;
      continue;
    }
    std::size_t start = pos;
    char32_t cp = utf8::decode(folded, pos);
    if (!is_non_ascii_separator(cp)) out.append(folded, start, pos - start);
  }
  return out;
}

bool names_compatible(const ParsedName& a, const ParsedName& b) {
  if (utf8::fold(a.surname) != utf8::fold(b.surname)) return false;
  auto left = sorted_normalized(a.forenames);
  auto right = sorted_normalized(b.forenames);
  if (left.size() > right.size()) std::swap(left, right);
  // Greedy leftmost embedding is complete for subsequence matching under
  // any pairwise predicate.
  std::size_t j = 0;
  for (const auto& token : left) {
    while (j < right.size() && !tokens_match(token, right[j])) ++j;
    if (j == right.size()) return false;
    ++j;
  }
  return true;
}

}  // namespace andbench
