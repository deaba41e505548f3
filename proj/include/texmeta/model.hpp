#ifndef TEXMETA_MODEL_HPP
#define TEXMETA_MODEL_HPP

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "texmeta/diagnostic.hpp"
#include "texmeta/textex.hpp"

namespace texmeta {

using textex::RichText;

// ---------------------------------------------------------------------------
// Identifier validators
// ---------------------------------------------------------------------------

/// ISO 7064 MOD 11-2 check character over 15 decimal digits ('0'-'9' or 'X').
inline char orcid_check_char(std::string_view digits) {
  int total = 0;
  for (char c : digits) total = (total + (c - '0')) * 2;
  const int check = (12 - total % 11) % 11;
  return check == 10 ? 'X' : static_cast<char>('0' + check);
}

/// `dddd-dddd-dddd-ddd[dX]` with a valid MOD 11-2 check character.
inline bool validate_orcid(std::string_view v) {
  if (v.size() != 19) return false;
  std::string digits;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const char c = v[i];
    if (i == 4 || i == 9 || i == 14) {
      if (c != '-') return false;
    } else if (i == 18) {
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == 'X')) return false;
    } else {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      digits += c;
    }
  }
  return orcid_check_char(digits) == v[18];
}

namespace detail {
inline constexpr std::string_view crockford_lower = "0123456789abcdefghjkmnpqrstvwxyz";
}

/// ROR id: leading `0`, six Crockford base32 characters, two-digit MOD 97-10 checksum.
inline bool validate_ror(std::string_view v) {
  if (v.size() != 9 || v[0] != '0') return false;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    const auto idx = detail::crockford_lower.find(v[i]);
    if (idx == std::string_view::npos) return false;
    n = n * 32 + idx;
  }
  if (!std::isdigit(static_cast<unsigned char>(v[7])) || !std::isdigit(static_cast<unsigned char>(v[8]))) return false;
  const auto expected = 98 - static_cast<int>((n * 100) % 97);
  return expected == (v[7] - '0') * 10 + (v[8] - '0');
}

inline bool is_doi_prefix(std::string_view v) {
  if (v.size() < 7 || v.substr(0, 3) != "10.") return false;
  const auto digits = v.substr(3);
  if (digits.size() < 4 || digits.size() > 9) return false;
  return std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// `10.<4-9 digits>/<non-whitespace suffix>`.
inline bool validate_doi(std::string_view v) {
  const auto slash = v.find('/');
  if (slash == std::string_view::npos || !is_doi_prefix(v.substr(0, slash))) return false;
  const auto suffix = v.substr(slash + 1);
  if (suffix.empty()) return false;
  return std::none_of(suffix.begin(), suffix.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

/// Crossref funder registry ids are all digits.
inline bool validate_funder_id(std::string_view v) {
  return !v.empty() &&
         std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// New-style `YYMM.NNNN[N][vN]` or old-style `archive[.XX]/YYMMNNN`.
inline bool validate_arxiv(std::string_view v) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  auto strip_version = [&](std::string_view s) {
    const auto p = s.rfind('v');
    if (p != std::string_view::npos && p > 0 && digits(s.substr(p + 1))) return s.substr(0, p);
    return s;
  };
  if (const auto slash = v.find('/'); slash != std::string_view::npos) {
    const auto archive = v.substr(0, slash);
    const auto num = strip_version(v.substr(slash + 1));
    if (archive.empty() || num.size() != 7 || !digits(num)) return false;
    return std::all_of(archive.begin(), archive.end(),
                       [](char c) { return std::islower(static_cast<unsigned char>(c)) || c == '-' || c == '.' || std::isupper(static_cast<unsigned char>(c)); });
  }
  const auto id = strip_version(v);
  const auto dot = id.find('.');
  if (dot != 4) return false;
  const auto tail = id.substr(5);
  return digits(id.substr(0, 4)) && digits(tail) && (tail.size() == 4 || tail.size() == 5);
}

inline bool is_plausible_email(std::string_view v) {
  const auto at = v.find('@');
  if (at == std::string_view::npos || at == 0 || v.find('@', at + 1) != std::string_view::npos) return false;
  const auto domain = v.substr(at + 1);
  const auto dot = domain.find('.');
  return dot != std::string_view::npos && dot > 0 && dot + 1 < domain.size() &&
         std::none_of(v.begin(), v.end(), [](char c) { return c == ' '; });
}

// ---------------------------------------------------------------------------
// Identifier
// ---------------------------------------------------------------------------

enum class Namespace { doi, orcid, ror, fundref, arxiv, custom };

/// A (namespace, value) pair. Only constructible with a value that passes the
/// namespace's syntax rule.
class Identifier {
 public:
  static std::optional<Identifier> try_make(Namespace ns, std::string value, std::string custom_name = {}) {
    if (!valid(ns, value, custom_name)) return std::nullopt;
    return Identifier(ns, std::move(value), std::move(custom_name));
  }

  /// Throws Error with the namespace's E-BAD* code.
  static Identifier make(Namespace ns, std::string value, std::string custom_name = {}) {
    if (!valid(ns, value, custom_name)) {
      throw Error(error_code(ns), "invalid " + namespace_name(ns, custom_name) + " '" + value + "'");
    }
    return Identifier(ns, std::move(value), std::move(custom_name));
  }

  static Identifier doi(std::string v) { return make(Namespace::doi, std::move(v)); }
  static Identifier orcid(std::string v) { return make(Namespace::orcid, std::move(v)); }
  static Identifier ror(std::string v) { return make(Namespace::ror, std::move(v)); }
  static Identifier fundref(std::string v) { return make(Namespace::fundref, std::move(v)); }

  static bool valid(Namespace ns, std::string_view value, std::string_view custom_name = {}) {
    switch (ns) {
      case Namespace::doi: return validate_doi(value);
      case Namespace::orcid: return validate_orcid(value);
      case Namespace::ror: return validate_ror(value);
      case Namespace::fundref: return validate_funder_id(value);
      case Namespace::arxiv: return validate_arxiv(value);
      case Namespace::custom: return !custom_name.empty() && !value.empty();
    }
    return false;
  }

  static std::string_view error_code(Namespace ns) {
    switch (ns) {
      case Namespace::doi: return code::bad_doi;
      case Namespace::orcid: return code::bad_orcid;
      case Namespace::ror: return code::bad_ror;
      case Namespace::fundref: return code::bad_funder_id;
      case Namespace::arxiv: return code::bad_arxiv;
      case Namespace::custom: break;
    }
    return code::bad_identifier;
  }

  static std::string namespace_name(Namespace ns, std::string_view custom_name = {}) {
    switch (ns) {
      case Namespace::doi: return "doi";
      case Namespace::orcid: return "orcid";
      case Namespace::ror: return "ror";
      case Namespace::fundref: return "fundref";
      case Namespace::arxiv: return "arxiv";
      case Namespace::custom: break;
    }
    return std::string(custom_name);
  }

  Namespace ns() const { return ns_; }
  const std::string& value() const { return value_; }
  std::string namespace_name() const { return namespace_name(ns_, custom_name_); }

  /// Resolvable URI form; funder ids resolve as DOIs under 10.13039.
  std::string uri() const {
    switch (ns_) {
      case Namespace::doi: return "https://doi.org/" + value_;
      case Namespace::orcid: return "https://orcid.org/" + value_;
      case Namespace::ror: return "https://ror.org/" + value_;
      case Namespace::fundref: return "https://doi.org/10.13039/" + value_;
      case Namespace::arxiv: return "https://arxiv.org/abs/" + value_;
      case Namespace::custom: break;
    }
    return value_;
  }

  /// DOIs compare case-insensitively; everything else exactly.
  bool operator==(const Identifier& o) const {
    if (ns_ != o.ns_ || custom_name_ != o.custom_name_ || value_.size() != o.value_.size()) return false;
    if (ns_ != Namespace::doi) return value_ == o.value_;
    return std::equal(value_.begin(), value_.end(), o.value_.begin(), [](char a, char b) {
      return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
    });
  }

 private:
  Identifier(Namespace ns, std::string value, std::string custom_name)
      : ns_(ns), value_(std::move(value)), custom_name_(std::move(custom_name)) {}

  Namespace ns_;
  std::string value_;
  std::string custom_name_;
};

/// `prefix/paperid`. Throws E-BADPREFIX or E-BADPAPERID.
inline Identifier derive_doi(std::string_view prefix, std::string_view paperid) {
  if (!is_doi_prefix(prefix)) throw Error(code::bad_prefix, "invalid DOI prefix '" + std::string(prefix) + "'");
  const bool ok = !paperid.empty() &&
                  (std::islower(static_cast<unsigned char>(paperid[0])) || std::isdigit(static_cast<unsigned char>(paperid[0]))) &&
                  std::all_of(paperid.begin(), paperid.end(), [](char c) {
                    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                           c == '.' || c == '-';
                  });
  if (!ok) throw Error(code::bad_paperid, "invalid paperid '" + std::string(paperid) + "'");
  return Identifier::doi(std::string(prefix) + "/" + std::string(paperid));
}

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

/// Source line of the record an entity came from. Never part of equality.
struct SourceLine {
  int value = 0;
  bool operator==(const SourceLine&) const { return true; }
};

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  /// Strict `YYYY-MM-DD` naming a real calendar day.
  static std::optional<Date> parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    }
    auto num = [&](std::size_t at, std::size_t len) {
      int v = 0;
      for (std::size_t i = at; i < at + len; ++i) v = v * 10 + (s[i] - '0');
      return v;
    };
    Date d{num(0, 4), num(5, 2), num(8, 2)};
    const std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{static_cast<unsigned>(d.month)},
                                          std::chrono::day{static_cast<unsigned>(d.day)}};
    if (!ymd.ok()) return std::nullopt;
    return d;
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  bool operator==(const Date&) const = default;
};

using Extras = std::map<std::string, std::string>;

struct TitleGroup {
  RichText main;
  std::optional<std::string> plaintext;
  std::optional<RichText> subtitle;
  std::optional<std::string> running;
  std::optional<std::string> onclick;
  bool operator==(const TitleGroup&) const = default;
};

struct Author {
  std::string name;
  std::optional<std::string> surname;
  std::optional<Identifier> orcid;
  std::optional<std::string> email;
  std::vector<int> affiliations;  // 1-based
  std::optional<RichText> footnote;
  std::optional<std::string> onclick;
  bool corresponding = false;
  std::vector<std::string> roles;  // CRediT role names, unvalidated
  Extras extras;
  SourceLine line;
  bool operator==(const Author&) const = default;
};

struct Affiliation {
  int index = 0;  // 1-based position
  std::string name;
  std::optional<Identifier> ror;
  std::optional<std::string> department;
  std::optional<std::string> street;
  std::optional<std::string> city;
  std::optional<std::string> country;
  Extras extras;
  SourceLine line;
  bool operator==(const Affiliation&) const = default;
};

struct Funding {
  std::string name;
  std::optional<Identifier> funder_id;
  std::optional<std::string> grantid;
  std::optional<std::string> country;
  Extras extras;
  SourceLine line;
  bool operator==(const Funding&) const = default;
};

struct CitationAuthor {
  std::string name;
  std::optional<std::string> surname;
  bool operator==(const CitationAuthor&) const = default;
};

struct Citation {
  std::string key;
  std::string entry_type;
  std::vector<CitationAuthor> authors;
  RichText title;
  std::optional<int> year;
  std::optional<std::string> venue;
  std::optional<std::string> volume;
  std::optional<std::string> number;
  std::optional<std::string> pages;
  std::optional<Identifier> doi;
  std::optional<std::string> url;
  std::optional<std::string> raw;
  Extras extras;
  SourceLine line;
  bool operator==(const Citation&) const = default;

  /// True when at least one bibliographic field beyond the key is present.
  bool is_structured() const {
    return !authors.empty() || !title.empty() || year || venue || volume || number || pages || doi;
  }
};

struct Dates {
  std::optional<Date> received;
  std::optional<Date> accepted;
  std::optional<Date> published;
  bool operator==(const Dates&) const = default;
};

/// Canonical record for one article. Affiliations and funders are listed once;
/// authors refer to affiliations by 1-based index.
struct PaperMeta {
  TitleGroup title;
  std::vector<Author> authors;
  std::vector<Affiliation> affiliations;
  std::vector<Funding> funders;
  std::vector<Citation> citations;
  std::optional<RichText> abstract;
  std::vector<std::string> keywords;
  std::optional<Identifier> doi;
  std::optional<std::string> license;
  Dates dates;
  bool multi_corresponding = false;
  Extras extras;
  SourceLine line;
  bool operator==(const PaperMeta&) const = default;
};

// ---------------------------------------------------------------------------
// Relationship checks
// ---------------------------------------------------------------------------

/// Cross-entity consistency. Findings are returned, never thrown.
inline Diagnostics check_relationships(const PaperMeta& pm) {
  Diagnostics out;
  const int n_affil = static_cast<int>(pm.affiliations.size());
  if (pm.authors.empty()) out.push_back(make_warning(code::no_authors, "article has no authors", pm.line.value));

  for (std::size_t i = 0; i < pm.affiliations.size(); ++i) {
    const auto& a = pm.affiliations[i];
    if (a.index != static_cast<int>(i) + 1) {
      out.push_back(make_error(code::bad_inst,
                               "affiliation at position " + std::to_string(i + 1) + " has index " + std::to_string(a.index),
                               a.line.value));
    }
    if (a.name.empty()) out.push_back(make_error(code::missing_name, "affiliation without a name", a.line.value));
  }

  std::vector<bool> referenced(pm.affiliations.size(), false);
  std::map<std::string, std::size_t> orcids;
  int corresponding = 0;
  for (std::size_t i = 0; i < pm.authors.size(); ++i) {
    const auto& au = pm.authors[i];
    if (au.name.empty()) out.push_back(make_error(code::missing_name, "author without a name", au.line.value));
    for (int idx : au.affiliations) {
      if (idx < 1 || idx > n_affil) {
        out.push_back(make_error(code::bad_inst,
                                 "author " + std::to_string(i + 1) + " refers to affiliation " + std::to_string(idx) +
                                     " but there are " + std::to_string(n_affil),
                                 au.line.value));
      } else {
        referenced[idx - 1] = true;
      }
    }
    if (au.orcid) {
      const auto [it, fresh] = orcids.emplace(au.orcid->value(), i);
      if (!fresh) {
        out.push_back(make_error(code::dup_orcid,
                                 "authors " + std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                                     " share ORCID " + au.orcid->value(),
                                 au.line.value));
      }
    }
    if (au.corresponding) ++corresponding;
  }
  for (std::size_t i = 0; i < referenced.size(); ++i) {
    if (!referenced[i]) {
      out.push_back(make_warning(code::unreferenced_affil,
                                 "affiliation " + std::to_string(i + 1) + " (" + pm.affiliations[i].name +
                                     ") is not referenced by any author",
                                 pm.affiliations[i].line.value));
    }
  }
  if (corresponding > 1 && !pm.multi_corresponding) {
    out.push_back(make_warning(code::multi_corresp,
                               std::to_string(corresponding) + " authors are marked corresponding", pm.line.value));
  }

  std::set<std::string> keys;
  for (const auto& c : pm.citations) {
    if (!keys.insert(c.key).second) {
      out.push_back(make_error(code::dup_cite_key, "duplicate citation key '" + c.key + "'", c.line.value));
    }
  }
  return out;
}

/// Emitter precondition: throws Error(E-UNVALIDATED) quoting the first
/// relationship error.
inline void require_relationships(const PaperMeta& pm) {
  for (const auto& d : check_relationships(pm)) {
    if (d.is_error()) throw Error(code::unvalidated, "model has relationship errors: " + d.code + ": " + d.message);
  }
}

}  // namespace texmeta

#endif
