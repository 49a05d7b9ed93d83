#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace andbench::csv {

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Writes one comma-separated row terminated by LF.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Fixed-precision decimal, or the empty string for an absent value.
std::string format_value(std::optional<double> value);

/// Splits one line on tabs; a trailing CR is removed first.
std::vector<std::string> split_tabs(std::string_view line);

/// Parses a comma-separated line with RFC 4180 quoting. Returns nullopt if a
/// quoted field is unterminated.
std::optional<std::vector<std::string>> parse_row(std::string_view line);

/// Reads lines (LF or CRLF) one at a time and tracks the line number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& line);
  std::size_t line_number() const { return line_; }
  /// Byte offset of the start of the current line.
  std::uint64_t line_offset() const { return line_offset_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::uint64_t line_offset_ = 0;
  std::uint64_t next_offset_ = 0;
};

}  // namespace andbench::csv
