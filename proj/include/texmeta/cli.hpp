#ifndef TEXMETA_CLI_HPP
#define TEXMETA_CLI_HPP

// The three commands behind the `texmeta` executable. Each takes its output
// streams explicitly and returns the process exit status:
//   0  success (warnings allowed unless strict)
//   1  validation errors, or warnings under strict
//   2  I/O, configuration or .meta parse failure

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "texmeta/config.hpp"
#include "texmeta/crossref.hpp"
#include "texmeta/diagnostic.hpp"
#include "texmeta/jats.hpp"
#include "texmeta/json.hpp"
#include "texmeta/metafile.hpp"
#include "texmeta/model.hpp"
#include "texmeta/registry.hpp"
#include "texmeta/textex.hpp"
#include "texmeta/xmp.hpp"

namespace texmeta::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_failure = 2;

enum class Format { json, crossref, jats, xmp };

inline std::optional<Format> format_from_name(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "crossref") return Format::crossref;
  if (s == "jats") return Format::jats;
  if (s == "xmp") return Format::xmp;
  return std::nullopt;
}

/// File extension used by `--all`.
inline std::string_view extension(Format f) {
  switch (f) {
    case Format::json: return ".json";
    case Format::crossref: return ".xml";
    case Format::jats: return ".jats.xml";
    case Format::xmp: return ".xmp";
  }
  return "";
}

inline constexpr std::array<Format, 4> all_formats = {Format::json, Format::crossref, Format::jats, Format::xmp};

inline void print(std::ostream& err, const Diagnostics& ds) {
  for (const auto& d : ds) err << format_line(d) << '\n';
}

struct Loaded {
  PaperMeta pm;
  Diagnostics diagnostics;
  int status = exit_ok;
};

/// Parse, lower, check relationships and, when online, cross-check against
/// the registries. Diagnostics are collected, not printed.
inline Loaded load(const std::filesystem::path& meta_path, const CliConfig& cfg,
                   registry::RegistryClient* client = nullptr) {
  Loaded r;
  std::ifstream in(meta_path, std::ios::binary);
  if (!in) {
    r.diagnostics.push_back(make_error(code::io, "cannot read " + meta_path.string()));
    r.status = exit_failure;
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  textex::MacroTables tables = textex::MacroTables::builtin();
  if (cfg.texmap) {
    try {
      tables.merge(textex::MacroTables::load(*cfg.texmap));
    } catch (const Error& e) {
      r.diagnostics.push_back(e.diagnostic());
      r.status = exit_failure;
      return r;
    }
  }

  auto [doc, parse_diags] = metafile::parse_meta(buf.str(), meta_path.string());
  append(r.diagnostics, parse_diags);
  if (has_errors(parse_diags)) {
    r.status = exit_failure;
    return r;
  }
  auto [pm, lower_diags] = metafile::lower_to_paper_meta(doc, tables);
  append(r.diagnostics, lower_diags);
  append(r.diagnostics, check_relationships(pm));

  if (cfg.online && client) {
    std::optional<registry::Cache> cache;
    if (cfg.cache_file) cache.emplace(*cfg.cache_file, cfg.cache_ttl);
    else cache.emplace(cfg.cache_ttl);
    std::vector<registry::RegistryRecord> records;
    for (const auto& id : registry::registry_ids(pm)) {
      try {
        records.push_back(registry::lookup(id, *client, &*cache));
      } catch (const Error& e) {
        // Registry trouble never fails a run on its own.
        auto d = e.diagnostic();
        d.severity = Severity::warning;
        r.diagnostics.push_back(d);
      }
    }
    append(r.diagnostics, registry::cross_check(pm, records));
  }

  // Lowering and the relationship check can both notice the same fault.
  Diagnostics unique;
  for (auto& d : r.diagnostics) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const Diagnostic& u) { return u.code == d.code && u.line == d.line; });
    if (!seen) unique.push_back(std::move(d));
  }
  r.diagnostics = std::move(unique);

  r.pm = std::move(pm);
  if (has_errors(r.diagnostics)) r.status = exit_invalid;
  else if (cfg.strict && !r.diagnostics.empty()) r.status = exit_invalid;
  return r;
}

inline int cmd_validate(const std::filesystem::path& meta_path, const CliConfig& cfg, std::ostream& err,
                        registry::RegistryClient* client = nullptr) {
  const auto r = load(meta_path, cfg, client);
  print(err, r.diagnostics);
  return r.status;
}

/// Renders one format. Throws Error.
inline std::string render(Format f, const PaperMeta& pm, const EmitConfig& cfg) {
  switch (f) {
    case Format::json: return emit_json(pm);
    case Format::crossref: return emit_crossref(pm, cfg);
    case Format::jats: return emit_jats(pm, cfg);
    case Format::xmp: return emit_xmp(pm);
  }
  return {};
}

namespace detail {

inline int status_for(const Error& e) {
  return (e.code() == code::io || e.code() == code::config) ? exit_failure : exit_invalid;
}

inline std::filesystem::path temp_path(const std::filesystem::path& target) {
  auto p = target;
  p += ".tmp";
  return p;
}

/// Writes every (path, content) pair to a temporary sibling, then renames
/// them all into place. On failure nothing is left behind.
inline void write_all_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
  };
  for (const auto& [target, content] : files) {
    const auto tmp = temp_path(target);
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw Error(code::io, "cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw Error(code::io, "cannot rename to " + files[i].first.string() + ": " + ec.message());
    }
  }
}

/// Base path for `--all`: `out` when given (an existing directory receives
/// `<stem>.*`), else the .meta path without its extension.
inline std::filesystem::path all_base(const std::filesystem::path& meta_path,
                                      const std::optional<std::filesystem::path>& out) {
  if (!out) return meta_path.parent_path() / meta_path.stem();
  std::error_code ec;
  if (std::filesystem::is_directory(*out, ec)) return *out / meta_path.stem();
  return *out;
}

}  // namespace detail

struct EmitRequest {
  std::optional<Format> format;  // ignored when `all`
  bool all = false;
  std::optional<std::filesystem::path> out;
};

/// Validates, then writes one format to `out` (or `data`), or all four
/// formats as sibling files. Nothing is written unless every requested
/// format renders.
inline int cmd_emit(const std::filesystem::path& meta_path, const EmitRequest& req, const CliConfig& cfg,
                    std::ostream& data, std::ostream& err, registry::RegistryClient* client = nullptr) {
  auto r = load(meta_path, cfg, client);
  print(err, r.diagnostics);
  if (r.status != exit_ok) return r.status;

  try {
    if (cfg.doi_from) {
      const auto colon = cfg.doi_from->find(':');
      if (colon == std::string::npos) {
        throw Error(code::bad_prefix, "--doi-from expects <prefix>:<paperid>, got '" + *cfg.doi_from + "'");
      }
      r.pm.doi = derive_doi(std::string_view(*cfg.doi_from).substr(0, colon),
                            std::string_view(*cfg.doi_from).substr(colon + 1));
    }

    if (!req.all) {
      if (!req.format) throw Error(code::config, "no output format given");
      const auto text = render(*req.format, r.pm, cfg.emit);
      if (req.out) detail::write_all_atomically({{*req.out, text}});
      else data << text;
      return exit_ok;
    }

    std::vector<std::future<std::string>> jobs;
    for (Format f : all_formats) {
      jobs.push_back(std::async(std::launch::async, [f, &r, &cfg] { return render(f, r.pm, cfg.emit); }));
    }
    std::vector<std::string> texts;
    std::optional<Error> first_error;
    for (auto& j : jobs) {
      try {
        texts.push_back(j.get());
      } catch (const Error& e) {
        if (!first_error) first_error = e;
      }
    }
    if (first_error) throw *first_error;

    const auto base = detail::all_base(meta_path, req.out);
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (std::size_t i = 0; i < all_formats.size(); ++i) {
      auto p = base;
      p += std::string(extension(all_formats[i]));
      files.emplace_back(p, std::move(texts[i]));
    }
    detail::write_all_atomically(files);
    return exit_ok;
  } catch (const Error& e) {
    err << format_line(e.diagnostic()) << '\n';
    return detail::status_for(e);
  }
}

/// Editor's summary. Exit 2 only when the file cannot be read or parsed;
/// validation findings go to `err` but do not change the status.
inline int cmd_inspect(const std::filesystem::path& meta_path, const CliConfig& cfg, std::ostream& out,
                       std::ostream& err) {
  CliConfig offline = cfg;
  offline.online = false;
  offline.strict = false;
  const auto r = load(meta_path, offline);
  print(err, r.diagnostics);
  if (r.status == exit_failure) return exit_failure;

  const auto& pm = r.pm;
  out << "title: " << textex::to_plain(pm.title.main) << '\n';
  out << "doi: " << (pm.doi ? pm.doi->value() : std::string("(none)")) << '\n';
  out << "authors: " << pm.authors.size() << '\n';
  for (std::size_t i = 0; i < pm.authors.size(); ++i) {
    const auto& a = pm.authors[i];
    out << "  " << i + 1 << ". " << a.name;
    if (a.orcid) out << " <" << a.orcid->value() << ">";
    if (a.corresponding) out << " (corresponding)";
    out << '\n';
    for (int idx : a.affiliations) {
      out << "     -> [" << idx << "] ";
      if (idx >= 1 && idx <= static_cast<int>(pm.affiliations.size())) out << pm.affiliations[idx - 1].name;
      else out << "(missing)";
      out << '\n';
    }
  }
  out << "affiliations: " << pm.affiliations.size() << '\n';
  for (const auto& af : pm.affiliations) {
    out << "  [" << af.index << "] " << af.name;
    if (af.ror) out << " ror:" << af.ror->value();
    out << '\n';
  }
  out << "funders: " << pm.funders.size() << '\n';
  for (const auto& f : pm.funders) {
    out << "  - " << f.name;
    if (f.funder_id) out << " (10.13039/" << f.funder_id->value() << ")";
    if (f.grantid) out << " grant " << *f.grantid;
    out << '\n';
  }
  out << "citations: " << pm.citations.size() << '\n';
  return exit_ok;
}

}  // namespace texmeta::cli

#endif
