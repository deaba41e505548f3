#ifndef TEXMETA_TEXTEX_HPP
#define TEXMETA_TEXTEX_HPP

// Conversion of TeX residue, as written by \protected@write, into clean UTF-8
// text with inline math preserved verbatim.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "texmeta/diagnostic.hpp"
#include "texmeta/utf8.hpp"

namespace texmeta::textex {

struct Text {
  std::string value;
  bool operator==(const Text&) const = default;
};

/// Inline math, stored without its delimiters.
struct Math {
  std::string tex;
  bool operator==(const Math&) const = default;
};

using Segment = std::variant<Text, Math>;

/// UTF-8 text interleaved with inline math. Appending keeps the canonical
/// form: no empty segments and no two adjacent segments of the same kind.
class RichText {
 public:
  RichText() = default;

  static RichText text(std::string s) {
    RichText rt;
    rt.append_text(std::move(s));
    return rt;
  }

  void append_text(std::string s) {
    if (s.empty()) return;
    if (!segments_.empty()) {
      if (auto* t = std::get_if<Text>(&segments_.back())) {
        t->value += s;
        return;
      }
    }
    segments_.emplace_back(Text{std::move(s)});
  }

  void append_math(std::string tex) {
    if (tex.empty()) return;
    if (!segments_.empty()) {
      if (auto* m = std::get_if<Math>(&segments_.back())) {
        m->tex += ' ';
        m->tex += tex;
        return;
      }
    }
    segments_.emplace_back(Math{std::move(tex)});
  }

  void append(const Segment& s) {
    if (const auto* t = std::get_if<Text>(&s)) {
      append_text(t->value);
    } else {
      append_math(std::get<Math>(s).tex);
    }
  }

  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<Segment>& mutable_segments() { return segments_; }
  bool empty() const { return segments_.empty(); }

  bool has_math() const {
    return std::any_of(segments_.begin(), segments_.end(),
                       [](const Segment& s) { return std::holds_alternative<Math>(s); });
  }

  bool operator==(const RichText&) const = default;

 private:
  std::vector<Segment> segments_;
};

struct DroppedMacro {
  std::string name;
  int count = 0;
  bool operator==(const DroppedMacro&) const = default;
};

struct NormalizeReport {
  std::vector<DroppedMacro> dropped_macros;
  Diagnostics diagnostics;

  void record_drop(std::string_view name) {
    for (auto& d : dropped_macros) {
      if (d.name == name) {
        ++d.count;
        return;
      }
    }
    dropped_macros.push_back({std::string(name), 1});
  }

  bool has_errors() const { return texmeta::has_errors(diagnostics); }
};

/// The translation tables shipped with the library. data/texmap.tsv is a
/// byte-identical copy that journals can edit and load with --macro-table.
inline constexpr std::string_view builtin_table_tsv = R"(# texmeta macro translation table, version 1
#
# Format: one entry per line, `macro<TAB>codepoint(s)`, code points in hex
# separated by single spaces. Lines starting with `#` are comments.
# Entries under [accents] give the combining mark the accent applies to the
# following character; entries under [glyphs] give the replacement text.
[accents]
\"	0308
\'	0301
\`	0300
\^	0302
\~	0303
\=	0304
\.	0307
\u	0306
\v	030C
\H	030B
\c	0327
\k	0328
\b	0331
\d	0323
\r	030A
\t	0361
[glyphs]
\ss	00DF
\o	00F8
\O	00D8
\ae	00E6
\AE	00C6
\oe	0153
\OE	0152
\aa	00E5
\AA	00C5
\l	0142
\L	0141
\dj	0111
\DJ	0110
\ng	014B
\NG	014A
\th	00FE
\TH	00DE
\dh	00F0
\DH	00D0
\dag	2020
\ddag	2021
\S	00A7
\P	00B6
\copyright	00A9
\pounds	00A3
\textendash	2013
\textemdash	2014
\textquotedblleft	201C
\textquotedblright	201D
\ldots	2026
\LaTeX	004C 0061 0054 0065 0058
\TeX	0054 0065 0058
\i	0131
\j	0237
)";

class MacroTables {
 public:
  /// Parses the table format above. Throws Error(E-CONFIG) with the line number.
  static MacroTables parse(std::string_view tsv) {
    MacroTables t;
    enum class Section { none, accents, glyphs } section = Section::none;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= tsv.size()) {
      std::size_t end = tsv.find('\n', start);
      if (end == std::string_view::npos) end = tsv.size();
      std::string_view line = tsv.substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') {
        if (end == tsv.size()) break;
        continue;
      }
      if (line == "[accents]") {
        section = Section::accents;
      } else if (line == "[glyphs]") {
        section = Section::glyphs;
      } else {
        const auto tab = line.find('\t');
        if (section == Section::none || tab == std::string_view::npos || line.front() != '\\' || tab < 2) {
          throw Error(code::config, "malformed macro table entry", line_no);
        }
        const std::string name(line.substr(1, tab - 1));
        const std::string value = decode_codepoints(line.substr(tab + 1), line_no);
        if (section == Section::accents) {
          std::size_t p = 0;
          const auto mark = utf8::decode(value, p);
          if (!mark || p != value.size()) throw Error(code::config, "accent entry needs exactly one code point", line_no);
          t.accents_[name] = *mark;
        } else {
          t.glyphs_[name] = value;
        }
      }
      if (end == tsv.size()) break;
    }
    return t;
  }

  static MacroTables load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(code::io, "cannot read macro table " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static const MacroTables& builtin() {
    static const MacroTables tables = parse(builtin_table_tsv);
    return tables;
  }

  /// Entries of `other` override entries of the same name.
  void merge(const MacroTables& other) {
    for (const auto& [k, v] : other.accents_) accents_[k] = v;
    for (const auto& [k, v] : other.glyphs_) glyphs_[k] = v;
  }

  /// Names are given without the leading backslash.
  std::optional<char32_t> accent_mark(std::string_view name) const {
    const auto it = accents_.find(std::string(name));
    if (it == accents_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string> glyph(std::string_view name) const {
    const auto it = glyphs_.find(std::string(name));
    if (it == glyphs_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, char32_t>& accents() const { return accents_; }
  const std::map<std::string, std::string>& glyphs() const { return glyphs_; }

 private:
  static std::string decode_codepoints(std::string_view field, int line_no) {
    std::string out;
    std::size_t i = 0;
    while (i < field.size()) {
      const std::size_t sp = std::min(field.find(' ', i), field.size());
      const std::string_view hex = field.substr(i, sp - i);
      unsigned long cp = 0;
      const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), cp, 16);
      if (hex.empty() || ec != std::errc() || ptr != hex.data() + hex.size() || cp > 0x10FFFF ||
          (cp >= 0xD800 && cp <= 0xDFFF)) {
        throw Error(code::config, "bad code point '" + std::string(hex) + "'", line_no);
      }
      utf8::append(out, static_cast<char32_t>(cp));
      i = sp + 1;
    }
    if (out.empty()) throw Error(code::config, "empty code point list", line_no);
    return out;
  }

  std::map<std::string, char32_t> accents_;
  std::map<std::string, std::string> glyphs_;
};

namespace detail {
inline std::string_view strip_backslash(std::string_view s) {
  if (!s.empty() && s.front() == '\\') s.remove_prefix(1);
  return s;
}

inline bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '@'; }
inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
}  // namespace detail

/// Applies a TeX accent to `base` (one character, or the dotless `\i` / `\j`).
/// Returns the precomposed character when Unicode has one, otherwise the base
/// followed by the combining mark. Throws Error(E-UNSUPPORTED-ACCENT).
inline std::string expand_accent(std::string_view accent, std::string_view base,
                                 const MacroTables& tables = MacroTables::builtin()) {
  const auto name = detail::strip_backslash(accent);
  const auto mark = tables.accent_mark(name);
  if (!mark) throw Error(code::unsupported_accent, "unsupported accent \\" + std::string(name));
  std::string b;
  if (base == "\\i" || base == "i") {
    b = "i";
  } else if (base == "\\j" || base == "j") {
    b = "j";
  } else {
    std::string glyph;
    if (!base.empty() && base.front() == '\\') {
      if (auto g = tables.glyph(base.substr(1))) {
        glyph = *g;
        base = glyph;
      }
    }
    std::size_t p = 0;
    if (!utf8::decode(base, p)) throw Error(code::unsupported_accent, "accent needs a base character");
    b = std::string(base.substr(0, p));
    // A two-character base (tie accent) keeps its second character after the mark.
    std::string rest(base.substr(p));
    std::string out = b;
    utf8::append(out, *mark);
    return utf8::nfc(out + rest);
  }
  utf8::append(b, *mark);
  return utf8::nfc(b);
}

/// Throws Error(E-UNKNOWN-GLYPH) for names outside the glyph table.
inline std::string expand_glyph(std::string_view name, const MacroTables& tables = MacroTables::builtin()) {
  const auto n = detail::strip_backslash(name);
  if (auto g = tables.glyph(n)) return *g;
  throw Error(code::unknown_glyph, "unknown glyph \\" + std::string(n));
}

namespace detail {

inline constexpr std::string_view face_markup[] = {"textbf", "textit", "texttt", "emph", "textsc", "textrm", "textsf"};

inline bool is_face_markup(std::string_view n) {
  return std::find(std::begin(face_markup), std::end(face_markup), n) != std::end(face_markup);
}

class Normalizer {
 public:
  Normalizer(std::string_view in, const MacroTables& tables, NormalizeReport& report)
      : in_(in), tables_(tables), report_(report) {}

  RichText run() {
    std::string text;
    int depth = 0;
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if (c == '\\') {
        text_macro(text);
      } else if (c == '{') {
        ++depth;
        ++pos_;
      } else if (c == '}') {
        if (depth == 0) {
          error("unmatched '}'");
        } else {
          --depth;
        }
        ++pos_;
      } else if (c == '~') {
        text += "\xC2\xA0";  // U+00A0
        ++pos_;
      } else if (c == '$') {
        flush(text);
        if (pos_ + 1 < in_.size() && in_[pos_ + 1] == '$') {
          pos_ += 2;
          math_until("$$");
        } else {
          ++pos_;
          math_until("$");
        }
      } else if (is_space(c)) {
        text += ' ';
        ++pos_;
      } else if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
        ++pos_;
      } else {
        const std::size_t n = utf8::char_length(in_, pos_);
        text.append(in_.substr(pos_, n));
        pos_ += n;
      }
    }
    if (depth != 0) error("unbalanced '{'");
    flush(text);
    return std::move(out_);
  }

 private:
  void error(std::string msg) { report_.diagnostics.push_back(make_error(code::unbalanced, std::move(msg))); }

  void flush(std::string& text) {
    out_.append_text(std::move(text));
    text.clear();
  }

  void skip_spaces() {
    while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
  }

  // Reads the control sequence at pos_ (which is a backslash). Returns its name
  // and whether it is a control word.
  std::pair<std::string, bool> read_control() {
    ++pos_;
    if (pos_ >= in_.size()) return {"", false};
    if (is_letter(in_[pos_])) {
      const std::size_t start = pos_;
      while (pos_ < in_.size() && is_letter(in_[pos_])) ++pos_;
      return {std::string(in_.substr(start, pos_ - start)), true};
    }
    const std::size_t n = utf8::char_length(in_, pos_);
    std::string name(in_.substr(pos_, n));
    pos_ += n;
    return {name, false};
  }

  bool try_control(std::string_view name) {
    if (pos_ >= in_.size() || in_[pos_] != '\\') return false;
    const std::size_t save = pos_;
    auto [n, word] = read_control();
    if (n == name) return true;
    pos_ = save;
    return false;
  }

  // \unhbox \voidb@x [\protect] \penalty \@M \ [{}]  is how `~` comes out of \write.
  bool try_tilde_tail() {
    const std::size_t save = pos_;
    skip_spaces();
    if (try_control("voidb@x")) {
      skip_spaces();
      if (try_control("protect")) skip_spaces();
      if (try_control("penalty")) {
        skip_spaces();
        if (try_control("@M")) {
          skip_spaces();
          if (try_control(" ")) {
            if (in_.substr(pos_, 2) == "{}") pos_ += 2;
            return true;
          }
        }
      }
    }
    pos_ = save;
    return false;
  }

  // `\ss {}x`: spaces followed by an empty group only terminate the word.
  void eat_terminator() {
    std::size_t p = pos_;
    while (p < in_.size() && is_space(in_[p])) ++p;
    if (in_.substr(p, 2) == "{}") pos_ = p + 2;
  }

  void skip_penalty_amount() {
    const std::size_t save = pos_;
    skip_spaces();
    if (try_control("@M") || try_control("@m")) return;
    std::size_t p = pos_;
    if (p < in_.size() && (in_[p] == '-' || in_[p] == '+')) ++p;
    const std::size_t digits = p;
    while (p < in_.size() && std::isdigit(static_cast<unsigned char>(in_[p]))) ++p;
    if (p > digits) {
      pos_ = p;
      return;
    }
    pos_ = save;
  }

  // Returns the raw accent base, or nullopt if there is none.
  std::optional<std::string> read_accent_base(std::string& remainder) {
    skip_spaces();
    if (pos_ >= in_.size()) return std::nullopt;
    const char c = in_[pos_];
    if (c == '{') {
      std::size_t p = pos_ + 1;
      int depth = 1;
      while (p < in_.size() && depth > 0) {
        if (in_[p] == '\\' && p + 1 < in_.size()) {
          p += 2;
          continue;
        }
        if (in_[p] == '{') ++depth;
        if (in_[p] == '}') --depth;
        ++p;
      }
      if (depth != 0) return std::nullopt;
      std::string_view inner = in_.substr(pos_ + 1, p - pos_ - 2);
      while (!inner.empty() && is_space(inner.front())) inner.remove_prefix(1);
      if (inner.empty()) {
        pos_ = p;
        return std::nullopt;
      }
      if (inner.front() == '\\') {
        std::size_t q = 1;
        while (q < inner.size() && is_letter(inner[q])) ++q;
        const std::string_view name = inner.substr(1, q - 1);
        // Only dotless i/j and glyphs can carry an accent; anything else is
        // left in place so the group is read as ordinary text.
        if (q == 1 || !(name == "i" || name == "j" || tables_.glyph(name))) return std::nullopt;
        pos_ = p;
        remainder = std::string(inner.substr(q));
        return std::string(inner.substr(0, q));
      }
      pos_ = p;
      const std::size_t n = utf8::char_length(inner, 0);
      remainder = std::string(inner.substr(n));
      return std::string(inner.substr(0, n));
    }
    if (c == '\\') {
      const std::size_t save = pos_;
      auto [name, word] = read_control();
      if (word && (name == "i" || name == "j" || tables_.glyph(name))) return "\\" + name;
      pos_ = save;
      return std::nullopt;
    }
    if (c == '}' || c == '$' || c == '~') return std::nullopt;
    const std::size_t n = utf8::char_length(in_, pos_);
    std::string base(in_.substr(pos_, n));
    pos_ += n;
    return base;
  }

  void text_macro(std::string& text) {
    auto [name, word] = read_control();
    if (name.empty()) {
      report_.record_drop("\\");
      return;
    }
    if (name == "protect") {
      skip_spaces();
    } else if (name == "(") {
      flush(text);
      math_until("\\)");
    } else if (name == ")") {
      error("unmatched '\\)'");
    } else if (name == "unhbox") {
      if (try_tilde_tail()) {
        text += "\xC2\xA0";  // U+00A0
      } else {
        report_.record_drop(name);
      }
    } else if (name == "penalty") {
      skip_penalty_amount();
      report_.record_drop(name);
    } else if (tables_.accent_mark(name)) {
      std::string remainder;
      if (auto base = read_accent_base(remainder)) {
        text += expand_accent(name, *base, tables_);
        if (!remainder.empty()) {
          // the rest of an accent group such as \"{ab}; process as ordinary text
          Normalizer inner(remainder, tables_, report_);
          for (const auto& seg : inner.run().segments()) {
            if (const auto* t = std::get_if<Text>(&seg)) {
              text += t->value;
            } else {
              flush(text);
              out_.append(seg);
            }
          }
        }
      } else {
        report_.record_drop(name);
      }
    } else if (auto g = tables_.glyph(name)) {
      text += *g;
      eat_terminator();
    } else if (is_face_markup(name)) {
      skip_spaces();
    } else if (!word && name.size() == 1 && std::string_view("%&#_${}").find(name[0]) != std::string_view::npos) {
      text += name;
    } else if (name == "textbackslash") {
      text += '\\';
      eat_terminator();
    } else if (name == "textasciitilde") {
      text += '~';
      eat_terminator();
    } else if (name == " ") {
      text += ' ';
    } else {
      report_.record_drop(name);
      if (word) eat_terminator();
    }
  }

  // Scans math content up to `close`; pos_ is just past the opening delimiter.
  void math_until(std::string_view close) {
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < in_.size()) {
      if (in_.substr(pos_, close.size()) == close) {
        const std::string_view raw = in_.substr(start, pos_ - start);
        pos_ += close.size();
        if (depth != 0) error("unbalanced braces in math");
        out_.append_math(clean_math(raw));
        return;
      }
      const char c = in_[pos_];
      if (c == '\\') {
        pos_ += 1 + (pos_ + 1 < in_.size() ? utf8::char_length(in_, pos_ + 1) : 0);
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}') --depth;
      if (depth < 0) {
        error("unmatched '}' in math");
        depth = 0;
      }
      ++pos_;
    }
    error("unterminated math");
    out_.append_math(clean_math(in_.substr(start)));
  }

  static std::string clean_math(std::string_view raw) {
    std::string out;
    std::size_t p = 0;
    while (p < raw.size()) {
      const char c = raw[p];
      if (c == '\\' && p + 1 < raw.size() && is_letter(raw[p + 1])) {
        std::size_t q = p + 1;
        while (q < raw.size() && is_letter(raw[q])) ++q;
        const std::string_view name = raw.substr(p + 1, q - p - 1);
        std::size_t after = q;
        while (after < raw.size() && is_space(raw[after])) ++after;
        if (name == "protect") {
          p = after;
          continue;
        }
        out.append(raw.substr(p, q - p));
        if (after > q && after < raw.size() && is_letter(raw[after])) out += ' ';
        p = after;
      } else if (c == '\\' && p + 1 < raw.size()) {
        const std::size_t n = 1 + utf8::char_length(raw, p + 1);
        out.append(raw.substr(p, n));
        p += n;
      } else {
        out += is_space(c) ? ' ' : c;
        ++p;
      }
    }
    std::size_t b = 0;
    while (b < out.size() && out[b] == ' ') ++b;
    std::size_t e = out.size();
    while (e > b && out[e - 1] == ' ') {
      // keep a control space `\ ` intact
      std::size_t slashes = 0;
      while (e - 1 - slashes > b && out[e - 2 - slashes] == '\\') ++slashes;
      if (slashes % 2 == 1) break;
      --e;
    }
    return out.substr(b, e - b);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  const MacroTables& tables_;
  NormalizeReport& report_;
  RichText out_;
};

inline std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool prev_space = false;
  for (char c : s) {
    if (c == ' ') {
      if (!prev_space) out += ' ';
      prev_space = true;
    } else {
      out += c;
      prev_space = false;
    }
  }
  return out;
}

}  // namespace detail

/// Normalizes one field value. Errors (E-UNBALANCED, E-BADUTF8) are reported
/// in the returned report alongside a best-effort result.
inline std::pair<RichText, NormalizeReport> normalize(std::string_view input,
                                                      const MacroTables& tables = MacroTables::builtin()) {
  NormalizeReport report;
  if (auto bad = utf8::first_invalid(input)) {
    report.diagnostics.push_back(make_error(code::bad_utf8, "invalid UTF-8 at byte " + std::to_string(*bad)));
    return {RichText{}, std::move(report)};
  }
  detail::Normalizer n(input, tables, report);
  RichText raw = n.run();

  RichText out;
  auto& segs = raw.mutable_segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (auto* t = std::get_if<Text>(&segs[i])) {
      std::string v = detail::collapse_spaces(t->value);
      if (i == 0 && !v.empty() && v.front() == ' ') v.erase(0, 1);
      if (i + 1 == segs.size() && !v.empty() && v.back() == ' ') v.pop_back();
      out.append_text(utf8::nfc(v));
    } else {
      out.append(segs[i]);
    }
  }
  for (const auto& d : report.dropped_macros) {
    report.diagnostics.push_back(make_warning(code::dropped_macro, "dropped unknown macro \\" + d.name + " (" +
                                                                       std::to_string(d.count) + "x)"));
  }
  return {std::move(out), std::move(report)};
}

/// Flattens to a single string with math wrapped in `$...$`. Characters that
/// are special to normalize() are escaped, so normalize(to_plain(rt)) == rt
/// for any normalized rt.
inline std::string to_plain(const RichText& rt) {
  std::string out;
  for (const auto& seg : rt.segments()) {
    if (const auto* t = std::get_if<Text>(&seg)) {
      for (char c : t->value) {
        switch (c) {
          case '$': out += "\\$"; break;
          case '{': out += "\\{"; break;
          case '}': out += "\\}"; break;
          case '\\': out += "\\textbackslash{}"; break;
          case '~': out += "\\textasciitilde{}"; break;
          default: out += c;
        }
      }
    } else {
      out += '$';
      out += std::get<Math>(seg).tex;
      out += '$';
    }
  }
  return out;
}

/// Text-only rendering: math content without delimiters. For consumers that
/// must not see TeX at all (e.g. XML element text of a name).
inline std::string to_text(const RichText& rt) {
  std::string out;
  for (const auto& seg : rt.segments()) {
    if (const auto* t = std::get_if<Text>(&seg)) {
      out += t->value;
    } else {
      out += std::get<Math>(seg).tex;
    }
  }
  return out;
}

}  // namespace texmeta::textex

#endif
