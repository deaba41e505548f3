#ifndef TEXMETA_JATS_HPP
#define TEXMETA_JATS_HPP

// JATS 1.3 Journal Publishing front matter, plus a ref-list in back.

#include <cstdio>
#include <string>
#include <string_view>
#include <variant>

#include "texmeta/diagnostic.hpp"
#include "texmeta/emit_config.hpp"
#include "texmeta/model.hpp"
#include "texmeta/textex.hpp"
#include "texmeta/xml.hpp"

namespace texmeta {

inline constexpr std::string_view jats_public_id = "-//NLM//DTD JATS (Z39.96) Journal Publishing DTD v1.3 20210610//EN";
inline constexpr std::string_view jats_system_id = "JATS-journalpublishing1-3.dtd";

namespace jats_detail {

/// Text segments become character data; math becomes
/// inline-formula/tex-math holding the TeX source without delimiters.
inline void append_rich(xml::Element& parent, const textex::RichText& rt) {
  for (const auto& seg : rt.segments()) {
    if (const auto* t = std::get_if<textex::Text>(&seg)) {
      parent.add_text(t->value);
    } else {
      const auto& m = std::get<textex::Math>(seg);
      parent.add("inline-formula").leaf("tex-math", m.tex);
    }
  }
  if (parent.children.empty()) parent.add_text("");
}

inline void date_parts(xml::Element& parent, const Date& d) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", d.day);
  parent.leaf("day", buf);
  std::snprintf(buf, sizeof buf, "%02d", d.month);
  parent.leaf("month", buf);
  parent.leaf("year", std::to_string(d.year));
}

inline bool looks_like_url(std::string_view s) { return s.substr(0, 7) == "http://" || s.substr(0, 8) == "https://"; }

inline std::string publication_type(std::string_view entry_type) {
  if (entry_type == "article") return "journal";
  if (entry_type == "book" || entry_type == "incollection" || entry_type == "inbook") return "book";
  if (entry_type == "inproceedings" || entry_type == "proceedings" || entry_type == "conference") return "confproc";
  if (entry_type == "phdthesis" || entry_type == "mastersthesis") return "thesis";
  if (entry_type == "techreport") return "report";
  return "other";
}

inline void person_name(xml::Element& parent, const std::string& name, const std::optional<std::string>& surname) {
  if (!surname) {
    parent.leaf("string-name", name);
    return;
  }
  auto& n = parent.add("name");
  n.leaf("surname", *surname);
  std::string given;
  if (name.size() > surname->size() && name.compare(name.size() - surname->size(), surname->size(), *surname) == 0) {
    given = name.substr(0, name.size() - surname->size());
    while (!given.empty() && given.back() == ' ') given.pop_back();
  }
  if (!given.empty()) n.leaf("given-names", given);
}

}  // namespace jats_detail

/// Throws Error with E-UNVALIDATED, or E-CONFIG when the journal title or
/// ISSN the publishing tag set requires is missing.
inline std::string emit_jats(const PaperMeta& pm, const EmitConfig& cfg) {
  using xml::Element;
  using namespace jats_detail;

  require_relationships(pm);
  if (cfg.journal_title.empty() || !cfg.issn) throw Error(code::config, "jats output needs journal_title and issn");

  Element article("article");
  article.attr("xmlns:mml", "http://www.w3.org/1998/Math/MathML")
      .attr("xmlns:xlink", "http://www.w3.org/1999/xlink")
      .attr("article-type", "research-article")
      .attr("dtd-version", "1.3")
      .attr("xml:lang", "en");

  auto& front = article.add("front");
  auto& jm = front.add("journal-meta");
  jm.leaf("journal-id", cfg.journal_abbrev.empty() ? cfg.journal_title : cfg.journal_abbrev)
      .attr("journal-id-type", "publisher-id");
  auto& jtg = jm.add("journal-title-group");
  jtg.leaf("journal-title", cfg.journal_title);
  if (!cfg.journal_abbrev.empty()) jtg.leaf("abbrev-journal-title", cfg.journal_abbrev);
  jm.leaf("issn", *cfg.issn).attr("publication-format", "electronic");
  if (!cfg.registrant.empty()) jm.add("publisher").leaf("publisher-name", cfg.registrant);

  auto& am = front.add("article-meta");
  if (pm.doi) am.leaf("article-id", pm.doi->value()).attr("pub-id-type", "doi");

  auto& tg = am.add("title-group");
  append_rich(tg.add("article-title"), pm.title.main);
  if (pm.title.subtitle) append_rich(tg.add("subtitle"), *pm.title.subtitle);
  if (pm.title.running) tg.add("alt-title").attr("alt-title-type", "running-head").add_text(*pm.title.running);
  if (pm.title.plaintext) tg.add("alt-title").attr("alt-title-type", "plain-text").add_text(*pm.title.plaintext);

  if (!pm.authors.empty()) {
    auto& cg = am.add("contrib-group");
    int fn = 0;
    for (const auto& a : pm.authors) {
      auto& c = cg.add("contrib");
      c.attr("contrib-type", "author");
      if (a.corresponding) c.attr("corresp", "yes");
      if (a.orcid) c.leaf("contrib-id", a.orcid->uri()).attr("contrib-id-type", "orcid");
      person_name(c, a.name, a.surname);
      for (const auto& r : a.roles) c.leaf("role", r);
      if (a.email) c.leaf("email", *a.email);
      if (a.onclick) c.leaf("uri", *a.onclick);
      for (int idx : a.affiliations) {
        c.leaf("xref", std::to_string(idx)).attr("ref-type", "aff").attr("rid", "aff" + std::to_string(idx));
      }
      if (a.footnote) {
        ++fn;
        c.add("xref").attr("ref-type", "author-notes").attr("rid", "fn" + std::to_string(fn)).add_text("*");
      }
    }
  }

  for (const auto& af : pm.affiliations) {
    auto& aff = am.add("aff");
    aff.attr("id", "aff" + std::to_string(af.index));
    aff.leaf("label", std::to_string(af.index));
    auto& wrap = aff.add("institution-wrap");
    if (af.ror) wrap.leaf("institution-id", af.ror->uri()).attr("institution-id-type", "ror");
    if (af.department) wrap.leaf("institution", *af.department).attr("content-type", "dept");
    wrap.leaf("institution", af.name);
    if (af.street) aff.leaf("addr-line", *af.street);
    if (af.city) aff.leaf("city", *af.city);
    if (af.country) aff.leaf("country", *af.country);
  }

  bool any_footnote = false;
  for (const auto& a : pm.authors) any_footnote = any_footnote || a.footnote.has_value();
  if (any_footnote) {
    auto& notes = am.add("author-notes");
    int fn = 0;
    for (const auto& a : pm.authors) {
      if (!a.footnote) continue;
      auto& f = notes.add("fn");
      f.attr("id", "fn" + std::to_string(++fn));
      append_rich(f.add("p"), *a.footnote);
    }
  }

  if (pm.dates.published) {
    auto& pd = am.add("pub-date");
    pd.attr("publication-format", "electronic").attr("date-type", "pub");
    date_parts(pd, *pm.dates.published);
  }
  if (cfg.volume) am.leaf("volume", *cfg.volume);
  if (cfg.issue) am.leaf("issue", *cfg.issue);

  if (pm.dates.received || pm.dates.accepted) {
    auto& history = am.add("history");
    if (pm.dates.received) {
      auto& d = history.add("date");
      d.attr("date-type", "received");
      date_parts(d, *pm.dates.received);
    }
    if (pm.dates.accepted) {
      auto& d = history.add("date");
      d.attr("date-type", "accepted");
      date_parts(d, *pm.dates.accepted);
    }
  }

  if (pm.license) {
    auto& lic = am.add("permissions").add("license");
    if (looks_like_url(*pm.license)) lic.attr("xlink:href", *pm.license);
    lic.leaf("license-p", *pm.license);
  }

  if (pm.title.onclick) am.leaf("self-uri", *pm.title.onclick).attr("xlink:href", *pm.title.onclick);

  if (pm.abstract) append_rich(am.add("abstract").add("p"), *pm.abstract);

  if (!pm.keywords.empty()) {
    auto& kg = am.add("kwd-group");
    kg.attr("kwd-group-type", "author");
    for (const auto& k : pm.keywords) kg.leaf("kwd", k);
  }

  if (!pm.funders.empty()) {
    auto& fg = am.add("funding-group");
    for (std::size_t i = 0; i < pm.funders.size(); ++i) {
      const auto& f = pm.funders[i];
      auto& ag = fg.add("award-group");
      ag.attr("id", "award" + std::to_string(i + 1));
      auto& wrap = ag.add("funding-source").add("institution-wrap");
      wrap.leaf("institution", f.name);
      if (f.funder_id) wrap.leaf("institution-id", f.funder_id->uri()).attr("institution-id-type", "doi");
      if (f.grantid) ag.leaf("award-id", *f.grantid);
    }
  }

  if (!pm.citations.empty()) {
    auto& refs = article.add("back").add("ref-list");
    for (std::size_t i = 0; i < pm.citations.size(); ++i) {
      const auto& c = pm.citations[i];
      auto& ref = refs.add("ref");
      ref.attr("id", "ref" + std::to_string(i + 1));
      ref.leaf("label", c.key);
      if (!c.is_structured()) {
        ref.leaf("mixed-citation", c.raw.value_or(c.key));
        continue;
      }
      auto& ec = ref.add("element-citation");
      ec.attr("publication-type", publication_type(c.entry_type));
      if (!c.authors.empty()) {
        auto& pg = ec.add("person-group");
        pg.attr("person-group-type", "author");
        for (const auto& ca : c.authors) person_name(pg, ca.name, ca.surname);
      }
      if (!c.title.empty()) append_rich(ec.add("article-title"), c.title);
      if (c.venue) ec.leaf("source", *c.venue);
      if (c.year) ec.leaf("year", std::to_string(*c.year));
      if (c.volume) ec.leaf("volume", *c.volume);
      if (c.number) ec.leaf("issue", *c.number);
      if (c.pages) ec.leaf("page-range", *c.pages);
      if (c.doi) ec.leaf("pub-id", c.doi->value()).attr("pub-id-type", "doi");
      if (c.url) ec.leaf("ext-link", *c.url).attr("ext-link-type", "uri").attr("xlink:href", *c.url);
    }
  }

  std::string prolog(xml::declaration);
  prolog += "<!DOCTYPE article PUBLIC \"";
  prolog += jats_public_id;
  prolog += "\" \"";
  prolog += jats_system_id;
  prolog += "\">\n";
  return xml::serialize(article, prolog);
}

}  // namespace texmeta

#endif
