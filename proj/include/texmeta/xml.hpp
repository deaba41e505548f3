#ifndef TEXMETA_XML_HPP
#define TEXMETA_XML_HPP

// Minimal XML tree for the emitters: build, then serialize deterministically.
// Elements whose children are all elements are indented; an element with any
// text child is written inline so mixed content is not altered.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "texmeta/utf8.hpp"

namespace texmeta::xml {

/// Drops characters XML 1.0 cannot carry (C0 controls other than TAB/LF/CR,
/// U+FFFE, U+FFFF).
inline std::string sanitize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const auto cp = utf8::decode(s, pos);
    if (!cp) {
      ++pos;
      continue;
    }
    if ((*cp < 0x20 && *cp != 0x09 && *cp != 0x0A && *cp != 0x0D) || *cp == 0xFFFE || *cp == 0xFFFF) continue;
    out.append(s.substr(start, pos - start));
  }
  return out;
}

inline std::string escape_text(std::string_view s) {
  std::string out;
  for (char c : sanitize(s)) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string escape_attr(std::string_view s) {
  std::string out;
  for (char c : sanitize(s)) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

/// An element, or a text node when `name` is empty.
struct Element {
  std::string name;
  std::string text;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<Element> children;

  explicit Element(std::string n = {}) : name(std::move(n)) {}

  Element& attr(std::string key, std::string value) {
    attrs.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  Element& add(std::string child_name) {
    children.emplace_back(std::move(child_name));
    return children.back();
  }

  Element& add(Element child) {
    children.push_back(std::move(child));
    return children.back();
  }

  Element& add_text(std::string s) {
    Element t;
    t.text = std::move(s);
    children.push_back(std::move(t));
    return *this;
  }

  /// `<name>text</name>`; returns the new child.
  Element& leaf(std::string child_name, std::string s) {
    auto& c = add(std::move(child_name));
    c.add_text(std::move(s));
    return c;
  }

  bool is_text() const { return name.empty(); }
};

namespace detail {
inline void write(const Element& e, std::string& out, int depth, bool pretty) {
  if (e.is_text()) {
    out += escape_text(e.text);
    return;
  }
  const std::string indent = pretty ? std::string(static_cast<std::size_t>(depth) * 2, ' ') : std::string();
  out += indent;
  out += '<';
  out += e.name;
  for (const auto& [k, v] : e.attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_attr(v);
    out += '"';
  }
  if (e.children.empty()) {
    out += "/>";
    if (pretty) out += '\n';
    return;
  }
  out += '>';
  bool mixed = false;
  for (const auto& c : e.children) mixed = mixed || c.is_text();
  if (mixed || !pretty) {
    for (const auto& c : e.children) write(c, out, 0, false);
  } else {
    out += '\n';
    for (const auto& c : e.children) write(c, out, depth + 1, true);
    out += indent;
  }
  out += "</";
  out += e.name;
  out += '>';
  if (pretty) out += '\n';
}
}  // namespace detail

inline constexpr std::string_view declaration = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

/// Serializes `root` with two-space indentation and LF line endings.
inline std::string serialize(const Element& root, std::string_view prolog = declaration) {
  std::string out(prolog);
  detail::write(root, out, 0, true);
  return out;
}

}  // namespace texmeta::xml

#endif
