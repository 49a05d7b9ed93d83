#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace andbench {

/// Unrecoverable input error. `offset` is the byte offset within the
/// (decompressed) source where the problem was detected.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class NameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by metric functions when their inputs violate a precondition
/// (unlabeled mention in a block, pair spanning two blocks, ...).
class InconsistentInput : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A recoverable, per-line problem in a tabular source. The line is skipped.
struct LineDiagnostic {
  std::size_t line = 0;
  std::string message;
};

}  // namespace andbench
