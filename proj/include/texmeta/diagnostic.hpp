#ifndef TEXMETA_DIAGNOSTIC_HPP
#define TEXMETA_DIAGNOSTIC_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace texmeta {

enum class Severity { error, warning };

/// Diagnostic codes. Errors start with "E-", warnings with "W-".
namespace code {
// metafile
inline constexpr std::string_view encoding = "E-ENCODING";
inline constexpr std::string_view no_header = "E-NOHEADER";
inline constexpr std::string_view dup_header = "E-DUPHEADER";
inline constexpr std::string_view dup_key = "E-DUPKEY";
inline constexpr std::string_view bad_indent = "E-BADINDENT";
inline constexpr std::string_view orphan_field = "E-ORPHANFIELD";
inline constexpr std::string_view bad_record = "E-BADRECORD";
inline constexpr std::string_view bad_field = "E-BADFIELD";
inline constexpr std::string_view unknown_key = "W-UNKNOWNKEY";
inline constexpr std::string_view bad_inst = "E-BADINST";
inline constexpr std::string_view missing_name = "E-MISSINGNAME";
inline constexpr std::string_view bad_date = "E-BADDATE";
inline constexpr std::string_view bad_year = "E-BADYEAR";
inline constexpr std::string_view bad_bool = "E-BADBOOL";
inline constexpr std::string_view bad_plaintext = "E-BADPLAINTEXT";
inline constexpr std::string_view bad_email = "W-BADEMAIL";
inline constexpr std::string_view no_title = "E-NOTITLE";
// textex
inline constexpr std::string_view unbalanced = "E-UNBALANCED";
inline constexpr std::string_view bad_utf8 = "E-BADUTF8";
inline constexpr std::string_view unsupported_accent = "E-UNSUPPORTED-ACCENT";
inline constexpr std::string_view unknown_glyph = "E-UNKNOWN-GLYPH";
inline constexpr std::string_view dropped_macro = "W-DROPPEDMACRO";
// identifiers
inline constexpr std::string_view bad_orcid = "E-BADORCID";
inline constexpr std::string_view bad_ror = "E-BADROR";
inline constexpr std::string_view bad_doi = "E-BADDOI";
inline constexpr std::string_view bad_funder_id = "E-BADFUNDERID";
inline constexpr std::string_view bad_arxiv = "E-BADARXIV";
inline constexpr std::string_view bad_identifier = "E-BADIDENTIFIER";
inline constexpr std::string_view bad_prefix = "E-BADPREFIX";
inline constexpr std::string_view bad_paperid = "E-BADPAPERID";
// relationships
inline constexpr std::string_view unreferenced_affil = "W-UNREFERENCED-AFFIL";
inline constexpr std::string_view no_authors = "W-NOAUTHORS";
inline constexpr std::string_view dup_orcid = "E-DUPORCID";
inline constexpr std::string_view dup_cite_key = "E-DUPCITEKEY";
inline constexpr std::string_view multi_corresp = "W-MULTICORRESP";
// emitters
inline constexpr std::string_view unvalidated = "E-UNVALIDATED";
inline constexpr std::string_view no_doi = "E-NODOI";
inline constexpr std::string_view json_schema = "E-JSONSCHEMA";
inline constexpr std::string_view config = "E-CONFIG";
// registry
inline constexpr std::string_view network = "E-NETWORK";
inline constexpr std::string_view not_found = "E-NOTFOUND";
inline constexpr std::string_view name_mismatch = "W-NAMEMISMATCH";
inline constexpr std::string_view withdrawn = "W-WITHDRAWN";
// cli
inline constexpr std::string_view io = "E-IO";
}  // namespace code

/// One finding. `line` is 1-based; 0 means the finding has no source location.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  int line = 0;

  bool operator==(const Diagnostic&) const = default;

  bool is_error() const { return severity == Severity::error; }
};

inline Diagnostic make_error(std::string_view c, std::string message, int line = 0) {
  return {Severity::error, std::string(c), std::move(message), line};
}

inline Diagnostic make_warning(std::string_view c, std::string message, int line = 0) {
  return {Severity::warning, std::string(c), std::move(message), line};
}

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.is_error(); });
}

inline bool has_code(const Diagnostics& ds, std::string_view c) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == c; });
}

inline void append(Diagnostics& into, const Diagnostics& from) {
  into.insert(into.end(), from.begin(), from.end());
}

/// Machine-readable single-line form: `severity:code:line:message`.
inline std::string format_line(const Diagnostic& d) {
  std::string out = d.is_error() ? "error" : "warning";
  out += ':';
  out += d.code;
  out += ':';
  out += std::to_string(d.line);
  out += ':';
  for (char c : d.message) out += (c == '\n' || c == '\r') ? ' ' : c;
  return out;
}

/// Thrown by operations whose contract is "value or one coded failure".
class Error : public std::runtime_error {
 public:
  explicit Error(Diagnostic d) : std::runtime_error(d.code + ": " + d.message), diag_(std::move(d)) {}
  Error(std::string_view c, std::string message, int line = 0)
      : Error(make_error(c, std::move(message), line)) {}

  const Diagnostic& diagnostic() const noexcept { return diag_; }
  const std::string& code() const noexcept { return diag_.code; }

 private:
  Diagnostic diag_;
};

}  // namespace texmeta

#endif
