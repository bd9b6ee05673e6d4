#ifndef SEPL_XML_HPP
#define SEPL_XML_HPP

// Minimal XML reader: elements, attributes, character data, comments,
// processing instructions/declarations, and the five predefined entities.
// Tracks line:column per node for error reporting. Element and attribute
// name lookups are case-insensitive (the input vocabulary is inconsistent
// about case); text and attribute values keep their case.

#include <cctype>
#include <string>
#include <vector>

#include "sepl/error.hpp"

namespace sepl {

struct XmlAttr {
  std::string name, value;
  int line = 0, col = 0;
};

struct XmlNode {
  std::string name;
  std::vector<XmlAttr> attrs;
  std::vector<XmlNode> children;
  std::string text;  // concatenated character data, entity-decoded
  int line = 0, col = 0;
};

inline bool ci_equal(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

inline const XmlAttr* xml_attr(const XmlNode& node, const std::string& name) {
  for (const XmlAttr& a : node.attrs)
    if (ci_equal(a.name, name)) return &a;
  return nullptr;
}

namespace detail {

class XmlReader {
 public:
  XmlReader(const std::string& text, std::string filename)
      : text_(text), filename_(std::move(filename)) {}

  XmlNode parse() {
    skip_misc();
    if (eof()) fail(line_, col_, "no root element");
    XmlNode root = element();
    skip_misc();
    if (!eof()) fail(line_, col_, "content after the root element");
    return root;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  bool starts_with(const char* s) const {
    return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n && !eof(); ++i) advance();
  }

  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw Error(filename_, line, col, msg);
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  // Whitespace, comments, declarations, processing instructions, doctype.
  void skip_misc() {
    while (true) {
      skip_ws();
      if (starts_with("<!--")) {
        int l = line_, c = col_;
        skip(4);
        while (!eof() && !starts_with("-->")) advance();
        if (eof()) fail(l, c, "unterminated comment");
        skip(3);
      } else if (starts_with("<?")) {
        int l = line_, c = col_;
        skip(2);
        while (!eof() && !starts_with("?>")) advance();
        if (eof()) fail(l, c, "unterminated processing instruction");
        skip(2);
      } else if (starts_with("<!")) {
        int l = line_, c = col_;
        while (!eof() && peek() != '>') advance();
        if (eof()) fail(l, c, "unterminated declaration");
        advance();
      } else {
        return;
      }
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.' || c == ':';
  }

  std::string name() {
    if (eof() || !name_char(peek()))
      fail(line_, col_, "expected a name");
    std::string n;
    while (!eof() && name_char(peek())) {
      n += peek();
      advance();
    }
    return n;
  }

  std::string decode_entities(const std::string& raw, int line, int col) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string::npos) fail(line, col, "unterminated entity");
      std::string ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "amp") out += '&';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else fail(line, col, "unknown entity '&" + ent + ";'");
      i = semi;
    }
    return out;
  }

  XmlNode element() {
    int l = line_, c = col_;
    if (eof() || peek() != '<') fail(l, c, "expected '<'");
    advance();
    XmlNode node;
    node.line = l;
    node.col = c;
    node.name = name();
    // Attributes.
    while (true) {
      skip_ws();
      if (eof()) fail(l, c, "unterminated start tag");
      if (peek() == '/' || peek() == '>') break;
      XmlAttr attr;
      attr.line = line_;
      attr.col = col_;
      attr.name = name();
      skip_ws();
      if (eof() || peek() != '=')
        fail(attr.line, attr.col, "expected '=' after attribute name");
      advance();
      skip_ws();
      if (eof() || (peek() != '"' && peek() != '\''))
        fail(line_, col_, "expected a quoted attribute value");
      char quote = peek();
      advance();
      std::string raw;
      while (!eof() && peek() != quote) {
        raw += peek();
        advance();
      }
      if (eof()) fail(attr.line, attr.col, "unterminated attribute value");
      advance();
      attr.value = decode_entities(raw, attr.line, attr.col);
      node.attrs.push_back(std::move(attr));
    }
    if (peek() == '/') {
      advance();
      if (eof() || peek() != '>') fail(line_, col_, "expected '>'");
      advance();
      return node;
    }
    advance();  // '>'
    // Content.
    while (true) {
      std::string raw;
      int tl = line_, tc = col_;
      while (!eof() && peek() != '<') {
        raw += peek();
        advance();
      }
      if (!raw.empty()) node.text += decode_entities(raw, tl, tc);
      if (eof()) fail(l, c, "unterminated element '" + node.name + "'");
      if (starts_with("<!--") || starts_with("<?") ||
          (starts_with("<!") && !starts_with("</"))) {
        skip_misc();
        continue;
      }
      if (starts_with("</")) {
        skip(2);
        int el = line_, ec = col_;
        std::string close = name();
        if (!ci_equal(close, node.name))
          fail(el, ec, "mismatched closing tag '" + close + "' for '" +
                           node.name + "'");
        skip_ws();
        if (eof() || peek() != '>') fail(el, ec, "expected '>'");
        advance();
        return node;
      }
      node.children.push_back(element());
    }
  }

  const std::string& text_;
  std::string filename_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace detail

inline XmlNode parse_xml(const std::string& text,
                         const std::string& filename = "<xml>") {
  detail::XmlReader reader(text, filename);
  return reader.parse();
}

}  // namespace sepl

#endif  // SEPL_XML_HPP
