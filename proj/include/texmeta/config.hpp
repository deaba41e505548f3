#ifndef TEXMETA_CONFIG_HPP
#define TEXMETA_CONFIG_HPP

// Journal configuration file: `key = value` lines, `#` starts a comment line,
// blank lines ignored. Keys are listed in `config_keys`.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "texmeta/diagnostic.hpp"
#include "texmeta/emit_config.hpp"
#include "texmeta/registry.hpp"

namespace texmeta {

inline constexpr std::string_view config_keys[] = {
    "journal_title", "journal_abbrev", "issn",       "doi_prefix",  "depositor_name",  "depositor_email",
    "registrant",    "volume",         "issue",      "timestamp",   "landing_url",     "texmap",
    "cache_file",    "cache_ttl",      "ror_endpoint", "funder_endpoint"};

/// Everything a CLI run needs besides the input path.
struct CliConfig {
  EmitConfig emit;
  bool strict = false;
  bool online = false;
  bool timestamp_set = false;
  std::optional<std::string> doi_from;  // prefix:paperid
  std::optional<std::filesystem::path> texmap;
  std::optional<std::filesystem::path> cache_file;
  std::int64_t cache_ttl = registry::Cache::default_ttl;
  std::string ror_endpoint{registry::default_ror_endpoint};
  std::string funder_endpoint{registry::default_funder_endpoint};
};

namespace config_detail {
inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}
}  // namespace config_detail

/// Sets one key. Returns an E-CONFIG diagnostic for a bad value, a
/// W-UNKNOWNKEY warning for an unrecognised key, nothing on success.
inline std::optional<Diagnostic> set_config_value(CliConfig& cfg, std::string_view key, const std::string& value,
                                                  int line = 0) {
  auto& e = cfg.emit;
  auto integer = [&](std::int64_t& into) -> std::optional<Diagnostic> {
    try {
      std::size_t used = 0;
      const auto v = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      into = v;
    } catch (const std::exception&) {
      return make_error(code::config, std::string(key) + ": expected an integer, got '" + value + "'", line);
    }
    return std::nullopt;
  };
  if (key == "journal_title") e.journal_title = value;
  else if (key == "journal_abbrev") e.journal_abbrev = value;
  else if (key == "issn") e.issn = value;
  else if (key == "doi_prefix") {
    if (!is_doi_prefix(value)) return make_error(code::config, "doi_prefix: not a DOI prefix: '" + value + "'", line);
    e.doi_prefix = value;
  } else if (key == "depositor_name") e.depositor_name = value;
  else if (key == "depositor_email") e.depositor_email = value;
  else if (key == "registrant") e.registrant = value;
  else if (key == "volume") e.volume = value;
  else if (key == "issue") e.issue = value;
  else if (key == "timestamp") {
    if (auto d = integer(e.timestamp)) return d;
    cfg.timestamp_set = true;
  } else if (key == "landing_url") e.landing_url = value;
  else if (key == "texmap") cfg.texmap = value;
  else if (key == "cache_file") cfg.cache_file = value;
  else if (key == "cache_ttl") return integer(cfg.cache_ttl);
  else if (key == "ror_endpoint") cfg.ror_endpoint = value;
  else if (key == "funder_endpoint") cfg.funder_endpoint = value;
  else return make_warning(code::unknown_key, "unknown configuration key '" + std::string(key) + "'", line);
  return std::nullopt;
}

/// Applies every line of `text` to `cfg`. Relative `texmap` and `cache_file`
/// paths are resolved against `base_dir`.
inline Diagnostics parse_config(std::string_view text, CliConfig& cfg, const std::filesystem::path& base_dir = {}) {
  Diagnostics out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = config_detail::trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      out.push_back(make_error(code::config, "expected 'key = value'", line));
      continue;
    }
    const auto key = config_detail::trim(std::string_view(s).substr(0, eq));
    const auto value = config_detail::trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) {
      out.push_back(make_error(code::config, "missing key before '='", line));
      continue;
    }
    if (auto d = set_config_value(cfg, key, value, line)) out.push_back(*d);
  }
  if (!base_dir.empty()) {
    if (cfg.texmap && cfg.texmap->is_relative()) cfg.texmap = base_dir / *cfg.texmap;
    if (cfg.cache_file && cfg.cache_file->is_relative()) cfg.cache_file = base_dir / *cfg.cache_file;
  }
  return out;
}

/// Reads and parses a config file. A missing file is E-IO.
inline Diagnostics load_config(const std::filesystem::path& path, CliConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {make_error(code::io, "cannot read config file " + path.string())};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), cfg, path.parent_path());
}

}  // namespace texmeta

#endif
