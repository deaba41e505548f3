#ifndef TEXMETA_EMIT_CONFIG_HPP
#define TEXMETA_EMIT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "texmeta/diagnostic.hpp"
#include "texmeta/model.hpp"

namespace texmeta {

/// Journal-level settings the `.meta` file cannot know.
struct EmitConfig {
  std::string journal_title;
  std::string journal_abbrev;
  std::optional<std::string> issn;
  std::string doi_prefix;
  std::string depositor_name;
  std::string depositor_email;
  std::string registrant;
  std::optional<std::string> volume;
  std::optional<std::string> issue;
  std::int64_t timestamp = 0;  // Crossref batch timestamp, seconds since epoch
  /// Landing page URL; `{doi}` is replaced by the article DOI and `{suffix}`
  /// by the part after the prefix.
  std::optional<std::string> landing_url;

  /// Throws Error(E-CONFIG) naming every missing or malformed setting that
  /// Crossref deposit needs.
  void require_crossref() const {
    std::vector<std::string> missing;
    if (journal_title.empty()) missing.emplace_back("journal_title");
    if (depositor_name.empty()) missing.emplace_back("depositor_name");
    if (depositor_email.empty()) missing.emplace_back("depositor_email");
    if (registrant.empty()) missing.emplace_back("registrant");
    if (!landing_url || landing_url->empty()) missing.emplace_back("landing_url");
    if (!doi_prefix.empty() && !is_doi_prefix(doi_prefix)) missing.emplace_back("doi_prefix (malformed)");
    if (!missing.empty()) {
      std::string msg = "crossref output needs configuration:";
      for (const auto& m : missing) msg += " " + m;
      throw Error(code::config, msg);
    }
  }

  std::string landing_page(const Identifier& doi) const {
    std::string url = landing_url.value_or("");
    const auto slash = doi.value().find('/');
    const std::string suffix = doi.value().substr(slash + 1);
    for (const auto& [token, value] : {std::pair<std::string, std::string>{"{doi}", doi.value()}, {"{suffix}", suffix}}) {
      for (auto p = url.find(token); p != std::string::npos; p = url.find(token, p + value.size())) {
        url.replace(p, token.size(), value);
      }
    }
    return url;
  }
};

}  // namespace texmeta

#endif
