#ifndef TEXMETA_CROSSREF_HPP
#define TEXMETA_CROSSREF_HPP

// Crossref deposit XML (doi_batch, schema 5.3.1) for one journal article.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "texmeta/diagnostic.hpp"
#include "texmeta/emit_config.hpp"
#include "texmeta/model.hpp"
#include "texmeta/textex.hpp"
#include "texmeta/xml.hpp"

namespace texmeta {

inline constexpr std::string_view crossref_schema_version = "5.3.1";
inline constexpr std::string_view crossref_ns = "http://www.crossref.org/schema/5.3.1";
inline constexpr std::string_view crossref_schema_url = "https://www.crossref.org/schemas/crossref5.3.1.xsd";

namespace crossref_detail {

inline bool looks_like_url(std::string_view s) { return s.substr(0, 7) == "http://" || s.substr(0, 8) == "https://"; }

/// Given name is the name with a trailing surname removed, when it ends with it.
inline std::optional<std::string> given_name(const std::string& name, const std::string& surname) {
  if (name.size() <= surname.size() || name.compare(name.size() - surname.size(), surname.size(), surname) != 0) {
    return std::nullopt;
  }
  std::string given = name.substr(0, name.size() - surname.size());
  while (!given.empty() && given.back() == ' ') given.pop_back();
  if (given.empty()) return std::nullopt;
  return given;
}

inline void date_parts(xml::Element& parent, const Date& d) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", d.month);
  parent.leaf("month", buf);
  std::snprintf(buf, sizeof buf, "%02d", d.day);
  parent.leaf("day", buf);
  parent.leaf("year", std::to_string(d.year));
}

inline std::string first_page(std::string_view pages) {
  const auto dash = pages.find('-');
  std::string fp(pages.substr(0, dash));
  while (!fp.empty() && fp.back() == ' ') fp.pop_back();
  return fp;
}

inline std::string batch_id(const Identifier& doi, std::int64_t timestamp) {
  const auto& v = doi.value();
  std::string id;
  for (char c : v.substr(v.find('/') + 1)) {
    id += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  }
  id = id.substr(0, 40) + "-" + std::to_string(timestamp);
  return id;
}

}  // namespace crossref_detail

/// Throws Error with E-UNVALIDATED, E-NODOI or E-CONFIG.
inline std::string emit_crossref(const PaperMeta& pm, const EmitConfig& cfg) {
  using xml::Element;
  using namespace crossref_detail;

  require_relationships(pm);
  if (!pm.doi) throw Error(code::no_doi, "crossref deposit needs a DOI");
  cfg.require_crossref();

  Element root("doi_batch");
  root.attr("xmlns", std::string(crossref_ns))
      .attr("xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance")
      .attr("xmlns:jats", "http://www.ncbi.nlm.nih.gov/JATS1")
      .attr("xmlns:fr", "http://www.crossref.org/fundref.xsd")
      .attr("xmlns:ai", "http://www.crossref.org/AccessIndicators.xsd")
      .attr("version", std::string(crossref_schema_version))
      .attr("xsi:schemaLocation", std::string(crossref_ns) + " " + std::string(crossref_schema_url));

  auto& head = root.add("head");
  head.leaf("doi_batch_id", batch_id(*pm.doi, cfg.timestamp));
  head.leaf("timestamp", std::to_string(cfg.timestamp));
  auto& depositor = head.add("depositor");
  depositor.leaf("depositor_name", cfg.depositor_name);
  depositor.leaf("email_address", cfg.depositor_email);
  head.leaf("registrant", cfg.registrant);

  auto& journal = root.add("body").add("journal");
  auto& jm = journal.add("journal_metadata");
  jm.attr("language", "en");
  jm.leaf("full_title", cfg.journal_title);
  if (!cfg.journal_abbrev.empty()) jm.leaf("abbrev_title", cfg.journal_abbrev);
  if (cfg.issn) jm.leaf("issn", *cfg.issn).attr("media_type", "electronic");

  if (pm.dates.published && (cfg.volume || cfg.issue)) {
    auto& ji = journal.add("journal_issue");
    auto& pd = ji.add("publication_date");
    pd.attr("media_type", "online");
    date_parts(pd, *pm.dates.published);
    if (cfg.volume) ji.add("journal_volume").leaf("volume", *cfg.volume);
    if (cfg.issue) ji.leaf("issue", *cfg.issue);
  }

  auto& art = journal.add("journal_article");
  art.attr("publication_type", "full_text");
  auto& titles = art.add("titles");
  titles.leaf("title", textex::to_plain(pm.title.main));
  if (pm.title.subtitle) titles.leaf("subtitle", textex::to_plain(*pm.title.subtitle));

  if (!pm.authors.empty()) {
    auto& contributors = art.add("contributors");
    for (std::size_t i = 0; i < pm.authors.size(); ++i) {
      const auto& a = pm.authors[i];
      auto& person = contributors.add("person_name");
      person.attr("sequence", i == 0 ? "first" : "additional").attr("contributor_role", "author");
      if (a.surname) {
        if (auto given = given_name(a.name, *a.surname)) person.leaf("given_name", *given);
        person.leaf("surname", *a.surname);
      } else {
        person.leaf("surname", a.name);
      }
      if (!a.affiliations.empty()) {
        auto& affs = person.add("affiliations");
        for (int idx : a.affiliations) {
          const auto& af = pm.affiliations[static_cast<std::size_t>(idx - 1)];
          auto& inst = affs.add("institution");
          inst.leaf("institution_name", af.name);
          if (af.ror) inst.leaf("institution_id", af.ror->uri()).attr("type", "ror");
          std::string place;
          if (af.city) place = *af.city;
          if (af.country) place += (place.empty() ? "" : ", ") + *af.country;
          if (!place.empty()) inst.leaf("institution_place", place);
          if (af.department) inst.leaf("institution_department", *af.department);
        }
      }
      if (a.orcid) person.leaf("ORCID", a.orcid->uri()).attr("authenticated", "false");
    }
  }

  if (pm.abstract) {
    auto& abs = art.add("jats:abstract");
    abs.add("jats:p").add_text(textex::to_plain(*pm.abstract));
  }

  if (pm.dates.published) {
    auto& pd = art.add("publication_date");
    pd.attr("media_type", "online");
    date_parts(pd, *pm.dates.published);
  }

  if (!pm.funders.empty()) {
    auto& program = art.add("fr:program");
    program.attr("name", "fundref");
    for (const auto& f : pm.funders) {
      auto& group = program.add("fr:assertion");
      group.attr("name", "fundgroup");
      auto& name = group.add("fr:assertion");
      name.attr("name", "funder_name");
      name.add_text(f.name);
      if (f.funder_id) name.leaf("fr:assertion", f.funder_id->uri()).attr("name", "funder_identifier");
      if (f.grantid) group.leaf("fr:assertion", *f.grantid).attr("name", "award_number");
    }
  }

  if (pm.license && looks_like_url(*pm.license)) {
    auto& ai = art.add("ai:program");
    ai.attr("name", "AccessIndicators");
    ai.leaf("ai:license_ref", *pm.license);
  }

  auto& doi_data = art.add("doi_data");
  doi_data.leaf("doi", pm.doi->value());
  doi_data.leaf("resource", cfg.landing_page(*pm.doi));

  if (!pm.citations.empty()) {
    auto& list = art.add("citation_list");
    for (const auto& c : pm.citations) {
      auto& cit = list.add("citation");
      cit.attr("key", c.key);
      if (c.is_structured()) {
        const bool journal_like = c.entry_type == "article" || c.entry_type.empty();
        if (c.venue && journal_like) cit.leaf("journal_title", *c.venue);
        if (!c.authors.empty()) cit.leaf("author", c.authors.front().surname.value_or(c.authors.front().name));
        if (c.volume) cit.leaf("volume", *c.volume);
        if (c.number) cit.leaf("issue", *c.number);
        if (c.pages) {
          if (auto fp = first_page(*c.pages); !fp.empty()) cit.leaf("first_page", fp);
        }
        if (c.year) cit.leaf("cYear", std::to_string(*c.year));
        if (c.doi) cit.leaf("doi", c.doi->value());
        if (c.venue && !journal_like) cit.leaf("volume_title", *c.venue);
        if (!c.title.empty()) cit.leaf("article_title", textex::to_plain(c.title));
      } else {
        cit.leaf("unstructured_citation", c.raw.value_or(c.key));
      }
    }
  }

  return xml::serialize(root);
}

}  // namespace texmeta

#endif
