#ifndef TEXMETA_METAFILE_HPP
#define TEXMETA_METAFILE_HPP

// The `.meta` file: a line-oriented record format written by the document
// class during compilation.
//
//   meta:                      <- record opener, column 0, first record
//     title: Some title        <- field, indented exactly two spaces
//   author:
//     name: A. Author
//
// Blank lines are ignored. A value runs to the end of the line (a trailing CR
// is stripped) and may contain TeX residue. Input must be UTF-8 without BOM.

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "texmeta/diagnostic.hpp"
#include "texmeta/model.hpp"
#include "texmeta/textex.hpp"
#include "texmeta/utf8.hpp"

namespace texmeta::metafile {

enum class RecordKind { header, author, affiliation, funding, citation };

inline std::string_view kind_name(RecordKind k) {
  switch (k) {
    case RecordKind::header: return "meta";
    case RecordKind::author: return "author";
    case RecordKind::affiliation: return "affiliation";
    case RecordKind::funding: return "funding";
    case RecordKind::citation: return "citation";
  }
  return "";
}

inline std::optional<RecordKind> kind_from_name(std::string_view s) {
  for (auto k : {RecordKind::header, RecordKind::author, RecordKind::affiliation, RecordKind::funding,
                 RecordKind::citation}) {
    if (kind_name(k) == s) return k;
  }
  return std::nullopt;
}

/// Keys each record kind understands. Others are kept and warned about.
inline const std::vector<std::string_view>& known_keys(RecordKind k) {
  static const std::array<std::vector<std::string_view>, 5> keys = {{
      {"title", "plaintext", "subtitle", "running", "onclick", "abstract", "keywords", "doi", "license", "received",
       "accepted", "published", "multicorresponding"},
      {"name", "surname", "orcid", "inst", "email", "footnote", "onclick", "corresponding", "roles"},
      {"name", "ror", "department", "street", "city", "country"},
      {"name", "crossref", "fundref", "grantid", "country"},
      {"key", "type", "authors", "title", "year", "venue", "volume", "number", "pages", "doi", "url", "raw"},
  }};
  return keys[static_cast<std::size_t>(k)];
}

inline bool is_known_key(RecordKind k, std::string_view key) {
  const auto& ks = known_keys(k);
  return std::find(ks.begin(), ks.end(), key) != ks.end();
}

struct Field {
  std::string key;
  std::string value;
  SourceLine line;
  bool operator==(const Field&) const = default;
};

struct Record {
  RecordKind kind = RecordKind::header;
  std::vector<Field> fields;
  SourceLine line;

  bool operator==(const Record&) const = default;

  const Field* find(std::string_view key) const {
    for (const auto& f : fields) {
      if (f.key == key) return &f;
    }
    return nullptr;
  }
};

struct MetaDocument {
  std::vector<Record> records;
  std::string source_name;
  bool operator==(const MetaDocument&) const = default;

  const Record* header() const {
    return (!records.empty() && records.front().kind == RecordKind::header) ? &records.front() : nullptr;
  }
};

namespace detail {
inline bool is_key(std::string_view s) {
  if (s.empty()) return false;
  const auto head = [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; };
  const auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  return head(s.front()) && std::all_of(s.begin() + 1, s.end(), tail);
}

// The funder identifier may be spelled either way; both mean the same field.
inline std::string_view canonical_key(RecordKind k, std::string_view key) {
  if (k == RecordKind::funding && (key == "crossref" || key == "fundref")) return "funder_id";
  return key;
}

inline int line_of_offset(std::string_view text, std::size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}
}  // namespace detail

/// Never throws on malformed input; every problem becomes a diagnostic and the
/// document holds whatever could be recovered.
inline std::pair<MetaDocument, Diagnostics> parse_meta(std::string_view text, std::string source_name = {}) {
  MetaDocument doc;
  doc.source_name = std::move(source_name);
  Diagnostics diags;

  if (text.substr(0, 3) == "\xEF\xBB\xBF") {
    diags.push_back(make_error(code::encoding, "byte order mark is not allowed", 1));
    return {std::move(doc), std::move(diags)};
  }
  if (auto bad = utf8::first_invalid(text)) {
    diags.push_back(make_error(code::encoding, "invalid UTF-8 at byte " + std::to_string(*bad),
                               detail::line_of_offset(text, *bad)));
    return {std::move(doc), std::move(diags)};
  }

  Record* open = nullptr;
  bool skipping = false;  // fields of a rejected record opener
  bool saw_header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (std::all_of(line.begin(), line.end(), [](char c) { return c == ' '; })) continue;

    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    if (indent < line.size() && line[indent] == '\t') {
      diags.push_back(make_error(code::bad_indent, "tab in indentation", line_no));
      continue;
    }

    if (indent == 0) {
      skipping = false;
      open = nullptr;
      const bool opener = line.size() >= 2 && line.back() == ':' && detail::is_key(line.substr(0, line.size() - 1));
      const auto kind = opener ? kind_from_name(line.substr(0, line.size() - 1)) : std::nullopt;
      if (!kind) {
        diags.push_back(make_error(code::bad_record, "expected a record opener such as 'author:'", line_no));
        skipping = true;
        continue;
      }
      if (*kind == RecordKind::header) {
        if (saw_header) {
          diags.push_back(make_error(code::dup_header, "only one 'meta:' record is allowed", line_no));
          skipping = true;
          continue;
        }
        if (!doc.records.empty()) {
          diags.push_back(make_error(code::no_header, "'meta:' must be the first record", line_no));
        }
        saw_header = true;
      } else if (doc.records.empty() && !saw_header) {
        diags.push_back(make_error(code::no_header, "first record must be 'meta:'", line_no));
      }
      doc.records.push_back(Record{*kind, {}, SourceLine{line_no}});
      open = &doc.records.back();
    } else if (indent == 2) {
      if (skipping) continue;
      if (open == nullptr) {
        diags.push_back(make_error(code::orphan_field, "field outside of any record", line_no));
        continue;
      }
      const std::string_view body = line.substr(2);
      const auto colon = body.find(':');
      if (colon == std::string_view::npos || !detail::is_key(body.substr(0, colon)) ||
          (colon + 1 < body.size() && body[colon + 1] != ' ')) {
        diags.push_back(make_error(code::bad_field, "expected 'key: value'", line_no));
        continue;
      }
      const std::string key(body.substr(0, colon));
      std::string_view value = body.substr(colon + 1);
      if (!value.empty()) value.remove_prefix(1);
      const auto canon = detail::canonical_key(open->kind, key);
      const bool dup = std::any_of(open->fields.begin(), open->fields.end(), [&](const Field& f) {
        return detail::canonical_key(open->kind, f.key) == canon;
      });
      if (dup) {
        diags.push_back(make_error(code::dup_key, "duplicate key '" + key + "' in " +
                                                      std::string(kind_name(open->kind)) + " record",
                                   line_no));
        continue;
      }
      if (!is_known_key(open->kind, key)) {
        diags.push_back(make_warning(code::unknown_key, "unknown key '" + key + "' in " +
                                                            std::string(kind_name(open->kind)) + " record (kept)",
                                     line_no));
      }
      open->fields.push_back(Field{key, std::string(value), SourceLine{line_no}});
    } else {
      diags.push_back(make_error(code::bad_indent, "indentation must be 0 or 2 spaces, found " + std::to_string(indent),
                                 line_no));
    }
  }

  if (!saw_header && !has_code(diags, code::no_header)) {
    diags.push_back(make_error(code::no_header, "missing 'meta:' record", 1));
  }
  return {std::move(doc), std::move(diags)};
}

/// Writes a document back out in canonical layout (no blank lines).
/// Throws std::invalid_argument for values that cannot be represented.
inline std::string serialize_meta(const MetaDocument& doc) {
  std::string out;
  for (const auto& r : doc.records) {
    out += kind_name(r.kind);
    out += ":\n";
    for (const auto& f : r.fields) {
      if (!detail::is_key(f.key)) throw std::invalid_argument("bad key '" + f.key + "'");
      if (f.value.find('\n') != std::string::npos || (!f.value.empty() && f.value.back() == '\r')) {
        throw std::invalid_argument("value of '" + f.key + "' spans lines");
      }
      out += "  ";
      out += f.key;
      out += ':';
      if (!f.value.empty()) {
        out += ' ';
        out += f.value;
      }
      out += '\n';
    }
  }
  return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

// Splits on `sep` only at brace depth 0.
inline std::vector<std::string> split_top(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '{') ++depth;
    if (s[i] == '}') --depth;
    if (depth == 0 && s.substr(i, sep.size()) == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + sep.size();
      i = start - 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

class Lowering {
 public:
  Lowering(const MetaDocument& doc, const textex::MacroTables& tables) : doc_(doc), tables_(tables) {}

  std::pair<PaperMeta, Diagnostics> run() {
    PaperMeta pm;
    const int n_affil = static_cast<int>(std::count_if(doc_.records.begin(), doc_.records.end(), [](const Record& r) {
      return r.kind == RecordKind::affiliation;
    }));
    for (const auto& r : doc_.records) {
      switch (r.kind) {
        case RecordKind::header: header(r, pm); break;
        case RecordKind::author: pm.authors.push_back(author(r, n_affil)); break;
        case RecordKind::affiliation:
          pm.affiliations.push_back(affiliation(r, static_cast<int>(pm.affiliations.size()) + 1));
          break;
        case RecordKind::funding: pm.funders.push_back(funding(r)); break;
        case RecordKind::citation: pm.citations.push_back(citation(r)); break;
      }
    }
    return {std::move(pm), std::move(diags_)};
  }

 private:
  textex::RichText rich(const Field& f) {
    auto [rt, report] = textex::normalize(f.value, tables_);
    for (auto d : report.diagnostics) {
      d.line = f.line.value;
      d.message = f.key + ": " + d.message;
      diags_.push_back(std::move(d));
    }
    return rt;
  }

  std::string text(const Field& f) { return textex::to_plain(rich(f)); }

  // Identifiers, URLs, e-mail addresses, dates and numbers are not prose: only
  // write artifacts and escaped specials are undone, `~` stays a tilde.
  static std::string verbatim(std::string_view raw) {
    std::string out;
    std::size_t p = 0;
    while (p < raw.size()) {
      if (raw[p] == '\\' && p + 1 < raw.size()) {
        std::size_t q = p + 1;
        while (q < raw.size() && is_letter(raw[q])) ++q;
        const std::string_view name = raw.substr(p + 1, q - p - 1);
        if (name == "protect") {
          while (q < raw.size() && raw[q] == ' ') ++q;
          p = q;
          continue;
        }
        if (name == "unhbox") {
          // the written form of `~`: \unhbox \voidb@x \protect \penalty \@M \ {}
          const auto tail = raw.find("\\ {}", q);
          if (tail != std::string_view::npos) {
            out += '~';
            p = tail + 4;
            continue;
          }
        }
        if (name == "textasciitilde") {
          out += '~';
          p = q;
          if (raw.substr(p, 2) == "{}") p += 2;
          continue;
        }
        if (name.empty() && std::string_view("%&#_$~{}").find(raw[p + 1]) != std::string_view::npos) {
          out += raw[p + 1];
          p += 2;
          continue;
        }
      }
      out += raw[p];
      ++p;
    }
    return trim(out);
  }

  static bool is_letter(char c) { return textex::detail::is_letter(c); }

  template <class T>
  void set_text(const Record& r, std::string_view key, std::optional<T>& slot) {
    if (const auto* f = r.find(key)) slot = text(*f);
  }

  void set_rich(const Record& r, std::string_view key, std::optional<textex::RichText>& slot) {
    if (const auto* f = r.find(key)) slot = rich(*f);
  }

  void set_verbatim(const Record& r, std::string_view key, std::optional<std::string>& slot) {
    if (const auto* f = r.find(key)) {
      auto v = verbatim(f->value);
      if (!v.empty()) slot = std::move(v);
    }
  }

  std::optional<Identifier> identifier(const Field* f, Namespace ns) {
    if (f == nullptr) return std::nullopt;
    const auto v = verbatim(f->value);
    if (auto id = Identifier::try_make(ns, v)) return id;
    diags_.push_back(make_error(Identifier::error_code(ns),
                                "invalid " + Identifier::namespace_name(ns) + " '" + v + "'", f->line.value));
    return std::nullopt;
  }

  std::optional<bool> boolean(const Field* f) {
    if (f == nullptr) return std::nullopt;
    const auto v = verbatim(f->value);
    if (v == "true" || v == "yes") return true;
    if (v == "false" || v == "no") return false;
    diags_.push_back(make_error(code::bad_bool, f->key + ": expected true or false, got '" + v + "'", f->line.value));
    return std::nullopt;
  }

  std::optional<Date> date(const Field* f) {
    if (f == nullptr) return std::nullopt;
    const auto v = verbatim(f->value);
    if (auto d = Date::parse(v)) return d;
    diags_.push_back(make_error(code::bad_date, f->key + ": expected YYYY-MM-DD, got '" + v + "'", f->line.value));
    return std::nullopt;
  }

  void extras(const Record& r, Extras& into) {
    for (const auto& f : r.fields) {
      if (!is_known_key(r.kind, f.key)) into[f.key] = f.value;
    }
  }

  // Normalizes a piece of a field value, reporting against the field's line.
  std::string part_text(std::string_view raw, const Field& f) {
    return textex::to_plain(rich(Field{f.key, std::string(raw), f.line}));
  }

  std::vector<std::string> list(const Field* f, std::string_view sep) {
    std::vector<std::string> out;
    if (f == nullptr) return out;
    for (const auto& part : split_top(f->value, sep)) {
      auto s = part_text(part, *f);
      if (!s.empty()) out.push_back(std::move(s));
    }
    return out;
  }

  void header(const Record& r, PaperMeta& pm) {
    pm.line = r.line;
    if (const auto* f = r.find("title")) {
      pm.title.main = rich(*f);
    }
    if (pm.title.main.empty()) diags_.push_back(make_error(code::no_title, "article has no title", r.line.value));
    if (const auto* f = r.find("plaintext")) {
      auto rt = rich(*f);
      if (rt.has_math() || textex::to_text(rt).find('\\') != std::string::npos) {
        diags_.push_back(make_error(code::bad_plaintext, "plaintext title must not contain TeX", f->line.value));
      } else {
        pm.title.plaintext = textex::to_text(rt);
      }
    }
    set_rich(r, "subtitle", pm.title.subtitle);
    set_text(r, "running", pm.title.running);
    set_verbatim(r, "onclick", pm.title.onclick);
    set_rich(r, "abstract", pm.abstract);
    pm.keywords = list(r.find("keywords"), ",");
    pm.doi = identifier(r.find("doi"), Namespace::doi);
    set_verbatim(r, "license", pm.license);
    pm.dates.received = date(r.find("received"));
    pm.dates.accepted = date(r.find("accepted"));
    pm.dates.published = date(r.find("published"));
    pm.multi_corresponding = boolean(r.find("multicorresponding")).value_or(false);
    extras(r, pm.extras);
  }

  Author author(const Record& r, int n_affil) {
    Author a;
    a.line = r.line;
    if (const auto* f = r.find("name")) a.name = text(*f);
    if (a.name.empty()) diags_.push_back(make_error(code::missing_name, "author record without a name", r.line.value));
    set_text(r, "surname", a.surname);
    a.orcid = identifier(r.find("orcid"), Namespace::orcid);
    set_verbatim(r, "email", a.email);
    if (a.email && !is_plausible_email(*a.email)) {
      diags_.push_back(make_warning(code::bad_email, "suspicious e-mail address '" + *a.email + "'",
                                    r.find("email")->line.value));
    }
    if (const auto* f = r.find("inst")) {
      for (const auto& part : split(verbatim(f->value), ',')) {
        int idx = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), idx);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
          diags_.push_back(make_error(code::bad_inst, "affiliation index '" + part + "' is not an integer", f->line.value));
        } else if (idx < 1 || idx > n_affil) {
          diags_.push_back(make_error(code::bad_inst,
                                      "affiliation index " + part + " out of range 1.." + std::to_string(n_affil),
                                      f->line.value));
        } else {
          a.affiliations.push_back(idx);
        }
      }
    }
    set_rich(r, "footnote", a.footnote);
    set_verbatim(r, "onclick", a.onclick);
    a.corresponding = boolean(r.find("corresponding")).value_or(false);
    a.roles = list(r.find("roles"), ",");
    extras(r, a.extras);
    return a;
  }

  Affiliation affiliation(const Record& r, int index) {
    Affiliation a;
    a.index = index;
    a.line = r.line;
    if (const auto* f = r.find("name")) a.name = text(*f);
    if (a.name.empty()) {
      diags_.push_back(make_error(code::missing_name, "affiliation record without a name", r.line.value));
    }
    a.ror = identifier(r.find("ror"), Namespace::ror);
    set_text(r, "department", a.department);
    set_text(r, "street", a.street);
    set_text(r, "city", a.city);
    set_text(r, "country", a.country);
    extras(r, a.extras);
    return a;
  }

  Funding funding(const Record& r) {
    Funding fu;
    fu.line = r.line;
    if (const auto* f = r.find("name")) fu.name = text(*f);
    if (fu.name.empty()) diags_.push_back(make_error(code::missing_name, "funding record without a name", r.line.value));
    const Field* id = r.find("crossref");
    if (id == nullptr) id = r.find("fundref");
    fu.funder_id = identifier(id, Namespace::fundref);
    set_text(r, "grantid", fu.grantid);
    set_text(r, "country", fu.country);
    extras(r, fu.extras);
    return fu;
  }

  Citation citation(const Record& r) {
    Citation c;
    c.line = r.line;
    if (const auto* f = r.find("key")) c.key = verbatim(f->value);
    if (c.key.empty()) diags_.push_back(make_error(code::missing_name, "citation record without a key", r.line.value));
    if (const auto* f = r.find("type")) c.entry_type = verbatim(f->value);
    if (const auto* f = r.find("authors")) {
      for (const auto& part : split_top(f->value, " and ")) {
        if (part.empty()) continue;
        const auto parts = split_top(part, ",");
        CitationAuthor ca;
        auto norm = [&](const std::string& s) { return part_text(s, *f); };
        if (parts.size() >= 2) {
          const auto surname = norm(parts[0]);
          const auto given = norm(parts[1]);
          ca.surname = surname;
          ca.name = given.empty() ? surname : given + " " + surname;
        } else {
          ca.name = norm(part);
        }
        if (!ca.name.empty()) c.authors.push_back(std::move(ca));
      }
    }
    if (const auto* f = r.find("title")) c.title = rich(*f);
    if (const auto* f = r.find("year")) {
      const auto v = verbatim(f->value);
      int y = 0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), y);
      if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || y < 0) {
        diags_.push_back(make_error(code::bad_year, "citation year '" + v + "' is not a number", f->line.value));
      } else {
        c.year = y;
      }
    }
    set_text(r, "venue", c.venue);
    set_text(r, "volume", c.volume);
    set_text(r, "number", c.number);
    set_text(r, "pages", c.pages);
    c.doi = identifier(r.find("doi"), Namespace::doi);
    set_verbatim(r, "url", c.url);
    set_text(r, "raw", c.raw);
    extras(r, c.extras);
    return c;
  }

  const MetaDocument& doc_;
  const textex::MacroTables& tables_;
  Diagnostics diags_;
};

}  // namespace detail

/// Maps records onto the model, normalizing every text value. Affiliations are
/// numbered from 1 in order of appearance; `inst: 1,2` refers to them.
inline std::pair<PaperMeta, Diagnostics> lower_to_paper_meta(
    const MetaDocument& doc, const textex::MacroTables& tables = textex::MacroTables::builtin()) {
  return detail::Lowering(doc, tables).run();
}

}  // namespace texmeta::metafile

#endif
