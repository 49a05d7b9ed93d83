#include "andbench/xml_reader.hpp"

#include <charconv>
#include <regex>

#include "andbench/error.hpp"

namespace andbench {

namespace {

struct Latin1Entity {
  const char* name;
  char32_t cp;
};

constexpr Latin1Entity kLatin1[] = {
#include "latin1_entities.inc"
};

constexpr std::size_t kBufferSize = 1 << 16;
constexpr std::size_t kMaxEntityName = 64;

bool is_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_char(int c) {
  return c >= 0 && !is_space(c) && c != '/' && c != '>' && c != '<' && c != '=' &&
         c != '"' && c != '\'' && c != '&' && c != ';' && c != '[' && c != ']';
}

const std::string* predefined_entity(std::string_view name) {
  static const std::string amp = "&", lt = "<", gt = ">", quot = "\"", apos = "'";
  if (name == "amp") return &amp;
  if (name == "lt") return &lt;
  if (name == "gt") return &gt;
  if (name == "quot") return &quot;
  if (name == "apos") return &apos;
  return nullptr;
}

// Parses the body of a numeric character reference ("#123" or "#x7B").
bool parse_char_ref(std::string_view body, char32_t& cp) {
  if (body.size() < 2 || body[0] != '#') return false;
  int base = 10;
  std::string_view digits = body.substr(1);
  if (digits[0] == 'x' || digits[0] == 'X') {
    base = 16;
    digits = digits.substr(1);
  }
  if (digits.empty()) return false;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
  if (value == 0 || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) return false;
  cp = value;
  return true;
}

std::string expand_char_refs(std::string_view value) {
  std::string out;
  std::size_t i = 0;
  while (i < value.size()) {
    if (value[i] == '&') {
      auto semi = value.find(';', i);
      char32_t cp = 0;
      if (semi != std::string_view::npos && parse_char_ref(value.substr(i + 1, semi - i - 1), cp)) {
        utf8::append(out, cp);
        i = semi + 1;
        continue;
      }
    }
    out.push_back(value[i++]);
  }
  return out;
}

}  // namespace

EntityTable EntityTable::latin1() {
  EntityTable table;
  for (const auto& e : kLatin1) {
    std::string value;
    utf8::append(value, e.cp);
    table.declare(e.name, std::move(value));
  }
  return table;
}

EntityTable EntityTable::from_dtd(std::string_view dtd_text) {
  static const std::regex decl(R"re(<!ENTITY\s+([^\s%]+)\s+(?:"([^"]*)"|'([^']*)')\s*>)re");
  EntityTable table;
  const std::string text(dtd_text);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), decl);
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    std::string value = m[2].matched ? m[2].str() : m[3].str();
    table.declare(m[1].str(), expand_char_refs(value));
  }
  return table;
}

void EntityTable::declare(std::string name, std::string value) {
  // First declaration wins, as in XML.
  map_.try_emplace(std::move(name), std::move(value));
}

const std::string* EntityTable::find(std::string_view name) const {
  auto it = map_.find(std::string(name));
  return it == map_.end() ? nullptr : &it->second;
}

XmlReader::XmlReader(std::istream& in, EntityTable entities)
    : in_(in), entities_(std::move(entities)), buffer_(kBufferSize) {}

bool XmlReader::refill() {
  if (eof_) return false;
  in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  end_ = static_cast<std::size_t>(in_.gcount());
  pos_ = 0;
  if (end_ == 0) {
    eof_ = true;
    if (auto bad = validator_.finish()) fail("invalid UTF-8 sequence", *bad);
    return false;
  }
  if (auto bad = validator_.feed(std::string_view(buffer_.data(), end_))) {
    fail("invalid UTF-8 sequence", *bad);
  }
  return true;
}

int XmlReader::peek() {
  if (pos_ == end_ && !refill()) return -1;
  return static_cast<unsigned char>(buffer_[pos_]);
}

int XmlReader::get() {
  if (pos_ == end_ && !refill()) return -1;
  ++consumed_;
  return static_cast<unsigned char>(buffer_[pos_++]);
}

void XmlReader::fail(const std::string& message, std::uint64_t at) const {
  throw IngestError("malformed XML: " + message, at);
}

void XmlReader::expect(char c) {
  std::uint64_t at = consumed_;
  int got = get();
  if (got != static_cast<unsigned char>(c)) {
    fail(std::string("expected '") + c + "'", at);
  }
}

bool XmlReader::consume_literal(std::string_view lit) {
  // Callers only use this where a mismatch after the first byte is an error,
  // so partial consumption is acceptable.
  std::uint64_t at = consumed_;
  for (char c : lit) {
    if (get() != static_cast<unsigned char>(c)) {
      fail("expected \"" + std::string(lit) + "\"", at);
    }
  }
  return true;
}

void XmlReader::skip_whitespace() {
  while (is_space(peek())) get();
}

std::string XmlReader::read_name() {
  std::string name;
  while (is_name_char(peek())) name.push_back(static_cast<char>(get()));
  if (name.empty()) fail("expected a name", consumed_);
  return name;
}

void XmlReader::read_reference(std::string& out) {
  std::uint64_t at = consumed_;
  get();  // '&'
  std::string body;
  for (;;) {
    int c = get();
    if (c == ';') break;
    if (c < 0 || is_space(c) || c == '<' || c == '&' || body.size() > kMaxEntityName) {
      fail("unterminated entity reference", at);
    }
    body.push_back(static_cast<char>(c));
  }
  if (body.empty()) fail("empty entity reference", at);
  if (body[0] == '#') {
    char32_t cp = 0;
    if (!parse_char_ref(body, cp)) fail("invalid character reference &" + body + ";", at);
    utf8::append(out, cp);
    return;
  }
  if (const auto* v = predefined_entity(body)) {
    out += *v;
    return;
  }
  if (const auto* v = entities_.find(body)) {
    out += *v;
    return;
  }
  throw IngestError("undeclared entity '" + body + "'", at);
}

void XmlReader::read_start_tag(XmlEvent& event) {
  event.kind = XmlEvent::Kind::start_element;
  event.name = read_name();
  event.attributes.clear();
  for (;;) {
    skip_whitespace();
    int c = peek();
    if (c == '/') {
      get();
      expect('>');
      pending_end_ = true;
      break;
    }
    if (c == '>') {
      get();
      break;
    }
    if (c < 0) fail("unexpected end of input in tag <" + event.name + ">", consumed_);
    XmlAttribute attr;
    attr.name = read_name();
    skip_whitespace();
    expect('=');
    skip_whitespace();
    std::uint64_t quote_at = consumed_;
    int quote = get();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value", quote_at);
    for (;;) {
      int v = peek();
      if (v < 0) fail("unterminated attribute value", quote_at);
      if (v == quote) {
        get();
        break;
      }
      if (v == '<') fail("'<' in attribute value", consumed_);
      if (v == '&') {
        read_reference(attr.value);
      } else {
        attr.value.push_back(static_cast<char>(get()));
      }
    }
    for (const auto& existing : event.attributes) {
      if (existing.name == attr.name) fail("duplicate attribute " + attr.name, quote_at);
    }
    event.attributes.push_back(std::move(attr));
  }
  if (stack_.empty()) {
    if (seen_root_) fail("content after the root element", event.offset);
    seen_root_ = true;
  }
  stack_.push_back(event.name);
}

void XmlReader::read_end_tag(XmlEvent& event) {
  event.kind = XmlEvent::Kind::end_element;
  event.name = read_name();
  skip_whitespace();
  expect('>');
  if (stack_.empty() || stack_.back() != event.name) {
    fail("mismatched end tag </" + event.name + ">" +
             (stack_.empty() ? std::string() : " (open element <" + stack_.back() + ">)"),
         event.offset);
  }
  stack_.pop_back();
}

void XmlReader::read_text(XmlEvent& event) {
  event.kind = XmlEvent::Kind::text;
  event.text.clear();
  for (;;) {
    int c = peek();
    if (c < 0 || c == '<') break;
    if (c == '&') {
      read_reference(event.text);
    } else {
      event.text.push_back(static_cast<char>(get()));
    }
  }
}

void XmlReader::read_cdata(XmlEvent& event) {
  event.kind = XmlEvent::Kind::text;
  event.text.clear();
  for (;;) {
    int c = get();
    if (c < 0) fail("unterminated CDATA section", event.offset);
    event.text.push_back(static_cast<char>(c));
    if (event.text.size() >= 3 && event.text.compare(event.text.size() - 3, 3, "]]>") == 0) {
      event.text.resize(event.text.size() - 3);
      return;
    }
  }
}

void XmlReader::skip_until(std::string_view terminator) {
  std::uint64_t at = consumed_;
  std::size_t matched = 0;
  while (matched < terminator.size()) {
    int c = get();
    if (c < 0) fail("unterminated markup (expected \"" + std::string(terminator) + "\")", at);
    if (c == static_cast<unsigned char>(terminator[matched])) {
      ++matched;
    } else {
      matched = (c == static_cast<unsigned char>(terminator[0])) ? 1 : 0;
    }
  }
}

void XmlReader::read_internal_subset() {
  std::uint64_t at = consumed_;
  for (;;) {
    skip_whitespace();
    int c = peek();
    if (c < 0) fail("unterminated DOCTYPE internal subset", at);
    if (c == ']') {
      get();
      return;
    }
    if (c == '%') {  // parameter entity reference
      skip_until(";");
      continue;
    }
    std::uint64_t decl_at = consumed_;
    expect('<');
    if (peek() == '?') {
      skip_until("?>");
      continue;
    }
    expect('!');
    if (peek() == '-') {
      consume_literal("--");
      skip_until("-->");
      continue;
    }
    std::string keyword = read_name();
    if (keyword == "ENTITY") {
      skip_whitespace();
      bool parameter = false;
      if (peek() == '%') {
        get();
        parameter = true;
        skip_whitespace();
      }
      std::string name = read_name();
      skip_whitespace();
      int quote = get();
      if (quote == '"' || quote == '\'') {
        std::string value;
        for (int v = get(); v != quote; v = get()) {
          if (v < 0) fail("unterminated entity value", decl_at);
          value.push_back(static_cast<char>(v));
        }
        if (!parameter) entities_.declare(std::move(name), expand_char_refs(value));
      }
      skip_until(">");
      continue;
    }
    // ELEMENT, ATTLIST, NOTATION: skip, honouring quoted strings.
    for (;;) {
      int v = get();
      if (v < 0) fail("unterminated declaration", decl_at);
      if (v == '"' || v == '\'') {
        for (int q = get(); q != v; q = get()) {
          if (q < 0) fail("unterminated literal in declaration", decl_at);
        }
      } else if (v == '>') {
        break;
      }
    }
  }
}

void XmlReader::read_doctype() {
  std::uint64_t at = consumed_;
  consume_literal("DOCTYPE");
  for (;;) {
    int c = get();
    if (c < 0) fail("unterminated DOCTYPE", at);
    if (c == '"' || c == '\'') {
      for (int q = get(); q != c; q = get()) {
        if (q < 0) fail("unterminated literal in DOCTYPE", at);
      }
    } else if (c == '[') {
      read_internal_subset();
    } else if (c == '>') {
      return;
    }
  }
}

bool XmlReader::next(XmlEvent& event) {
  if (finished_) return false;
  if (pending_end_) {
    pending_end_ = false;
    event.kind = XmlEvent::Kind::end_element;
    event.name = stack_.back();
    event.attributes.clear();
    stack_.pop_back();
    return true;
  }
  for (;;) {
    event.offset = consumed_;
    int c = peek();
    if (c < 0) {
      if (!stack_.empty()) {
        fail("unexpected end of input inside <" + stack_.back() + ">", consumed_);
      }
      if (!seen_root_) fail("no root element", consumed_);
      event.kind = XmlEvent::Kind::end_of_document;
      finished_ = true;
      return true;
    }
    if (c != '<') {
      read_text(event);
      if (stack_.empty()) {
        for (char t : event.text) {
          if (!is_space(static_cast<unsigned char>(t))) {
            fail("text outside the root element", event.offset);
          }
        }
        continue;
      }
      if (event.text.empty()) continue;
      return true;
    }
    get();  // '<'
    int d = peek();
    if (d == '/') {
      get();
      read_end_tag(event);
      return true;
    }
    if (d == '?') {
      skip_until("?>");
      continue;
    }
    if (d == '!') {
      get();
      int e = peek();
      if (e == '-') {
        consume_literal("--");
        skip_until("-->");
        continue;
      }
      if (e == '[') {
        consume_literal("[CDATA[");
        if (stack_.empty()) fail("CDATA outside the root element", event.offset);
        read_cdata(event);
        if (event.text.empty()) continue;
        return true;
      }
      if (seen_root_) fail("DOCTYPE after the root element", event.offset);
      read_doctype();
      continue;
    }
    read_start_tag(event);
    return true;
  }
}

}  // namespace andbench
