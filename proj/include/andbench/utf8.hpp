#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace andbench::utf8 {

/// Returns the byte index of the first invalid sequence, or nullopt if
/// `text` is well-formed UTF-8 (no overlongs, surrogates or values past
/// U+10FFFF).
std::optional<std::size_t> find_invalid(std::string_view text);

inline bool valid(std::string_view text) { return !find_invalid(text); }

void append(std::string& out, char32_t cp);

/// Decodes one code point starting at `pos` and advances `pos`. Input must be
/// valid UTF-8.
char32_t decode(std::string_view text, std::size_t& pos);

/// Lowercases and strips diacritics (canonical decomposition followed by
/// removal of combining marks). Used for keys, never for display strings.
std::string fold(std::string_view text);

/// First code point of `text` as a UTF-8 string, empty if `text` is empty.
std::string first_char(std::string_view text);

/// Number of code points.
std::size_t length(std::string_view text);

/// Incremental validator for chunked input. Feed bytes in order; `feed`
/// returns the absolute offset of the first invalid byte, if any.
class StreamValidator {
 public:
  std::optional<std::uint64_t> feed(std::string_view chunk);
  /// Call at end of input; reports a truncated trailing sequence.
  std::optional<std::uint64_t> finish() const;

 private:
  std::uint64_t offset_ = 0;
  std::uint64_t seq_start_ = 0;
  int needed_ = 0;
  char32_t cp_ = 0;
  char32_t min_ = 0;
};

}  // namespace andbench::utf8
