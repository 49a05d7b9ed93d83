#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "andbench/utf8.hpp"

namespace andbench {

/// Named character entities available to the XML reader beyond the five
/// predefined ones. DBLP dumps reference DTD-declared Latin-1 entities
/// (&uuml;, &eacute;, ...), so a table is always required.
class EntityTable {
 public:
  /// The ISO 8859-1 entity set declared by the public DBLP DTD.
  static EntityTable latin1();

  /// Reads `<!ENTITY name "value">` declarations from DTD text. Character
  /// references inside values are expanded; parameter entities are ignored.
  static EntityTable from_dtd(std::string_view dtd_text);

  void declare(std::string name, std::string value);
  const std::string* find(std::string_view name) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, std::string> map_;
};

struct XmlAttribute {
  std::string name;
  std::string value;
};

struct XmlEvent {
  enum class Kind { start_element, end_element, text, end_of_document };
  Kind kind = Kind::end_of_document;
  std::string name;                   // element events
  std::vector<XmlAttribute> attributes;  // start_element only
  std::string text;                   // text only, entities expanded
  std::uint64_t offset = 0;           // byte offset of the event's first byte

  const std::string* attribute(std::string_view attr) const {
    for (const auto& a : attributes) {
      if (a.name == attr) return &a.value;
    }
    return nullptr;
  }
};

/// Single-pass pull parser over a byte stream. Holds one read buffer and
/// the open-element stack, so memory does not grow with document size.
/// Throws IngestError on malformed markup, undeclared entities or invalid
/// UTF-8. Internal DOCTYPE subsets may declare additional entities.
class XmlReader {
 public:
  XmlReader(std::istream& in, EntityTable entities);

  /// Advances to the next event. Returns false once end_of_document has been
  /// delivered.
  bool next(XmlEvent& event);

  std::uint64_t offset() const { return consumed_; }
  std::size_t depth() const { return stack_.size(); }

 private:
  int peek();
  int get();
  bool refill();
  void expect(char c);
  bool consume_literal(std::string_view lit);
  void skip_whitespace();
  [[noreturn]] void fail(const std::string& message, std::uint64_t at) const;

  std::string read_name();
  void read_reference(std::string& out);
  void read_start_tag(XmlEvent& event);
  void read_end_tag(XmlEvent& event);
  void read_text(XmlEvent& event);
  void read_cdata(XmlEvent& event);
  void skip_until(std::string_view terminator);
  void read_doctype();
  void read_internal_subset();

  std::istream& in_;
  EntityTable entities_;
  std::vector<char> buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  std::uint64_t consumed_ = 0;
  bool eof_ = false;
  utf8::StreamValidator validator_;

  std::vector<std::string> stack_;
  bool seen_root_ = false;
  bool pending_end_ = false;
  bool finished_ = false;
};

}  // namespace andbench
