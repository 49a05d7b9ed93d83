#include "andbench/utf8.hpp"

#include <algorithm>
#include <array>
#include <iterator>

namespace andbench::utf8 {

namespace {

struct FoldEntry {
  char32_t cp;
  const char* folded;
};

constexpr FoldEntry kFoldTable[] = {
#include "fold_table.inc"
};

bool is_combining_mark(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x1AB0 && cp <= 0x1AFF) ||
         (cp >= 0x1DC0 && cp <= 0x1DFF) || (cp >= 0x20D0 && cp <= 0x20FF) ||
         (cp >= 0xFE20 && cp <= 0xFE2F);
}

const char* lookup_fold(char32_t cp) {
  auto it = std::lower_bound(std::begin(kFoldTable), std::end(kFoldTable), cp,
                             [](const FoldEntry& e, char32_t v) { return e.cp < v; });
  if (it != std::end(kFoldTable) && it->cp == cp) return it->folded;
  return nullptr;
}

}  // namespace

std::optional<std::uint64_t> StreamValidator::feed(std::string_view chunk) {
  for (unsigned char c : chunk) {
    if (needed_ == 0) {
      seq_start_ = offset_;
      if (c < 0x80) {
        // ascii
      } else if (c >= 0xC2 && c <= 0xDF) {
        needed_ = 1;
        cp_ = c & 0x1F;
        min_ = 0x80;
      } else if (c >= 0xE0 && c <= 0xEF) {
        needed_ = 2;
        cp_ = c & 0x0F;
        min_ = 0x800;
      } else if (c >= 0xF0 && c <= 0xF4) {
        needed_ = 3;
        cp_ = c & 0x07;
        min_ = 0x10000;
      } else {
        return offset_;
      }
    } else {
      if ((c & 0xC0) != 0x80) return seq_start_;
      cp_ = (cp_ << 6) | (c & 0x3F);
      if (--needed_ == 0) {
        if (cp_ < min_ || cp_ > 0x10FFFF || (cp_ >= 0xD800 && cp_ <= 0xDFFF)) {
          return seq_start_;
        }
      }
    }
    ++offset_;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> StreamValidator::finish() const {
  if (needed_ != 0) return seq_start_;
  return std::nullopt;
}

std::optional<std::size_t> find_invalid(std::string_view text) {
  StreamValidator v;
  if (auto bad = v.feed(text)) return static_cast<std::size_t>(*bad);
  if (auto bad = v.finish()) return static_cast<std::size_t>(*bad);
  return std::nullopt;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t decode(std::string_view text, std::size_t& pos) {
  auto c = static_cast<unsigned char>(text[pos++]);
  if (c < 0x80) return c;
  int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : 1;
  char32_t cp = c & (0x3F >> extra);
  for (int i = 0; i < extra && pos < text.size(); ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(text[pos++]) & 0x3F);
  }
  return cp;
}

std::string fold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto c = static_cast<unsigned char>(text[pos]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + ('a' - 'A') : c));
      ++pos;
      continue;
    }
    char32_t cp = decode(text, pos);
    if (is_combining_mark(cp)) continue;
    if (const char* f = lookup_fold(cp)) {
      out += f;
    } else {
      append(out, cp);
    }
  }
  return out;
}

std::string first_char(std::string_view text) {
  if (text.empty()) return {};
  std::size_t pos = 0;
  decode(text, pos);
  return std::string(text.substr(0, pos));
}

std::size_t length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace andbench::utf8
