#include "xml_dom.hpp"

#include <cctype>

#include "kinoplan/errors.hpp"

namespace kinoplan::xml {

namespace {

constexpr int kMaxDepth = 64;

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '.';
}

class Scanner {
public:
  explicit Scanner(const std::string& text) : text_(text) {}

  Element parse() {
    // UTF-8 BOM
    if (text_.rfind("\xEF\xBB\xBF", 0) == 0) {
      pos_ = 3;
    }
    skip_misc(true);
    if (eof() || peek() != '<') {
      fail("expected a root element");
    }
    Element root = parse_element(0);
    skip_misc(false);
    if (!eof()) {
      fail("content after the root element");
    }
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, message); }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
    }
    return c;
  }

  bool starts_with(const char* s) const { return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0; }

  void skip_whitespace() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  void skip_until(const char* terminator, const char* what) {
    while (!eof()) {
      if (starts_with(terminator)) {
        for (const char* p = terminator; *p != '\0'; ++p) {
          advance();
        }
        return;
      }
      advance();
    }
    fail(std::string("unterminated ") + what);
  }

  // Whitespace, comments and (before the root) one optional XML declaration.
  void skip_misc(bool allow_prolog) {
    for (;;) {
      skip_whitespace();
      if (starts_with("<?")) {
        if (!allow_prolog) {
          fail("processing instruction after the root element");
        }
        skip_until("?>", "processing instruction");
        continue;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
        continue;
      }
      if (starts_with("<!")) {
        fail("unsupported markup declaration");
      }
      return;
    }
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) {
      fail("expected a name");
    }
    std::string name;
    while (!eof() && is_name_char(peek())) {
      name.push_back(advance());
    }
    return name;
  }

  std::string decode_entity() {
    // caller consumed '&'
    std::string entity;
    while (!eof() && peek() != ';') {
      if (entity.size() > 8) {
        fail("unterminated entity reference");
      }
      entity.push_back(advance());
    }
    if (eof()) {
      fail("unterminated entity reference");
    }
    advance();  // ';'
    if (entity == "amp") return "&";
    if (entity == "lt") return "<";
    if (entity == "gt") return ">";
    if (entity == "quot") return "\"";
    if (entity == "apos") return "'";
    if (!entity.empty() && entity[0] == '#') {
      int code = 0;
      for (std::size_t i = 1; i < entity.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(entity[i]))) {
          fail("invalid character reference '&" + entity + ";'");
        }
        code = code * 10 + (entity[i] - '0');
        if (code > 0x10FFFF) {
          fail("character reference out of range");
        }
      }
      if (code == 0 || code > 127) {
        fail("only ASCII character references are supported");
      }
      return std::string(1, static_cast<char>(code));
    }
    fail("unknown entity '&" + entity + ";'");
  }

  std::string parse_attribute_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') {
      fail("expected a quoted attribute value");
    }
    advance();
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '<') {
        fail("'<' inside an attribute value");
      }
      if (peek() == '&') {
        advance();
        value += decode_entity();
      } else {
        value.push_back(advance());
      }
    }
    if (eof()) {
      fail("unterminated attribute value");
    }
    advance();  // closing quote
    return value;
  }

  Element parse_element(int depth) {
    if (depth > kMaxDepth) {
      fail("document nested too deeply");
    }
    advance();  // '<'
    Element element;
    element.line = line_;
    element.name = parse_name();

    for (;;) {
      skip_whitespace();
      if (eof()) {
        fail("unterminated start tag for <" + element.name + ">");
      }
      if (peek() == '/') {
        advance();
        if (eof() || peek() != '>') {
          fail("expected '>' after '/'");
        }
        advance();
        return element;  // self-closing
      }
      if (peek() == '>') {
        advance();
        break;
      }
      Attribute attr;
      attr.line = line_;
      attr.name = parse_name();
      skip_whitespace();
      if (eof() || peek() != '=') {
        fail("expected '=' after attribute '" + attr.name + "'");
      }
      advance();
      skip_whitespace();
      attr.value = parse_attribute_value();
      for (const Attribute& existing : element.attributes) {
        if (existing.name == attr.name) {
          fail("duplicate attribute '" + attr.name + "' on <" + element.name + ">");
        }
      }
      element.attributes.push_back(std::move(attr));
    }

    // content
    for (;;) {
      if (eof()) {
        fail("missing closing tag for <" + element.name + ">");
      }
      if (peek() != '<') {
        if (peek() == '&') {
          advance();
          decode_entity();
        } else {
          advance();  // ignorable character data
        }
        continue;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
        continue;
      }
      if (starts_with("</")) {
        advance();
        advance();
        const std::string closing = parse_name();
        if (closing != element.name) {
          fail("closing tag </" + closing + "> does not match <" + element.name + ">");
        }
        skip_whitespace();
        if (eof() || peek() != '>') {
          fail("expected '>' in closing tag");
        }
        advance();
        return element;
      }
      if (starts_with("<?") || starts_with("<!")) {
        fail("unsupported markup inside <" + element.name + ">");
      }
      element.children.push_back(parse_element(depth + 1));
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

const Element* Element::child(const std::string& tag) const {
  for (const Element& c : children) {
    if (c.name == tag) {
      return &c;
    }
  }
  return nullptr;
}

int Element::child_count(const std::string& tag) const {
  int count = 0;
  for (const Element& c : children) {
    if (c.name == tag) {
      ++count;
    }
  }
  return count;
}

const Attribute* Element::attribute(const std::string& attr) const {
  for (const Attribute& a : attributes) {
    if (a.name == attr) {
      return &a;
    }
  }
  return nullptr;
}

Element parse_document(const std::string& text) { return Scanner(text).parse(); }

std::string escape_attribute(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace kinoplan::xml
