#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <string>

namespace andbench {

/// Opens a file for reading, transparently inflating gzip content when the
/// file starts with the gzip magic bytes. Throws std::runtime_error when the
/// file cannot be opened.
std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

/// Reads an entire stream into a string.
std::string slurp(std::istream& in);

}  // namespace andbench
