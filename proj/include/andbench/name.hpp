#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace andbench {

using MentionId = std::uint32_t;

/// One author-name occurrence on one publication record.
struct AuthorMention {
  MentionId id = 0;
  std::uint32_t record = 0;    // index into CorpusStore::records()
  std::uint32_t position = 0;  // 1-based author position on the record
  std::string raw_name;        // may carry a homonym suffix
};

struct ParsedName {
  std::vector<std::string> forenames;
  std::string surname;
  std::optional<std::string> homonym_suffix;  // exactly four digits
  std::string display_name;                   // tokens without the suffix

  bool operator==(const ParsedName&) const = default;
};

/// First forename initial + surname, e.g. "m|newman".
struct BlockKey {
  std::string value;
  auto operator<=>(const BlockKey&) const = default;
};

/// All forename initials + surname, e.g. "me|newman".
struct InitialsKey {
  std::string value;
  auto operator<=>(const InitialsKey&) const = default;
};

/// Splits on whitespace runs. The last token is the surname unless it is a
/// four-digit homonym suffix ("Bin Liu 0002"). Throws NameError for names
/// that are empty after trimming.
ParsedName parse_name(std::string_view raw_name);

/// Case- and accent-insensitive form of a name part.
std::string normalize_name_part(std::string_view part);

/// A forename token that is a single letter, optionally followed by periods.
bool is_initial(std::string_view token);

BlockKey blocking_key(const ParsedName& name);
InitialsKey all_initials_key(const ParsedName& name);

/// Lowercases and removes everything that is not a letter or digit.
std::string normalize_title(std::string_view title);

/// Surnames must agree. Forename tokens are sorted alphabetically on both
/// sides; the shorter list must then match a subsequence of the longer one,
/// each pair agreeing on the full token or on an initial.
bool names_compatible(const ParsedName& a, const ParsedName& b);

}  // namespace andbench
