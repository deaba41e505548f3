#ifndef TEXMETA_XMP_HPP
#define TEXMETA_XMP_HPP

// XMP packet text for embedding into a PDF. Dublin Core and PRISM carry the
// usual fields; a small extension schema adds per-author ORCID and
// affiliation names, declared through the PDF/A extension mechanism.

#include <string>
#include <string_view>

#include "texmeta/model.hpp"
#include "texmeta/textex.hpp"
#include "texmeta/xml.hpp"

namespace texmeta {

inline constexpr std::string_view xmp_author_ns = "urn:texmeta:xmp:author:1.0#";
inline constexpr std::string_view xmp_author_prefix = "tmauth";

namespace xmp_detail {

inline xml::Element alt(std::string name, const std::string& value) {
  xml::Element e(std::move(name));
  e.add("rdf:Alt").leaf("rdf:li", value).attr("xml:lang", "x-default");
  return e;
}

inline xml::Element& resource_li(xml::Element& container) {
  auto& li = container.add("rdf:li");
  li.attr("rdf:parseType", "Resource");
  return li;
}

inline void field_decl(xml::Element& seq, std::string_view name, std::string_view type, std::string_view desc) {
  auto& li = resource_li(seq);
  li.leaf("pdfaField:name", std::string(name));
  li.leaf("pdfaField:valueType", std::string(type));
  li.leaf("pdfaField:description", std::string(desc));
}

inline xml::Element extension_schema() {
  const std::string ns(xmp_author_ns);
  const std::string prefix(xmp_author_prefix);
  xml::Element schemas("pdfaExtension:schemas");
  auto& schema = resource_li(schemas.add("rdf:Bag"));
  schema.leaf("pdfaSchema:schema", "Article author identifiers");
  schema.leaf("pdfaSchema:namespaceURI", ns);
  schema.leaf("pdfaSchema:prefix", prefix);

  auto& prop = resource_li(schema.add("pdfaSchema:property").add("rdf:Seq"));
  prop.leaf("pdfaProperty:name", "authors");
  prop.leaf("pdfaProperty:valueType", "Seq Author");
  prop.leaf("pdfaProperty:category", "external");
  prop.leaf("pdfaProperty:description", "Authors in byline order with ORCID iD and affiliation names");

  auto& type = resource_li(schema.add("pdfaSchema:valueType").add("rdf:Seq"));
  type.leaf("pdfaType:type", "Author");
  type.leaf("pdfaType:namespaceURI", ns);
  type.leaf("pdfaType:prefix", prefix);
  type.leaf("pdfaType:description", "One article author");
  auto& fields = type.add("pdfaType:field").add("rdf:Seq");
  field_decl(fields, "name", "Text", "Display name");
  field_decl(fields, "orcid", "URI", "ORCID iD as an https://orcid.org/ URI");
  field_decl(fields, "affiliation", "Seq Text", "Affiliation names in the order given");
  return schemas;
}

}  // namespace xmp_detail

/// Throws Error(E-UNVALIDATED) on relationship errors.
inline std::string emit_xmp(const PaperMeta& pm) {
  using xml::Element;
  using namespace xmp_detail;

  require_relationships(pm);
  const std::string p(xmp_author_prefix);

  Element meta("x:xmpmeta");
  meta.attr("xmlns:x", "adobe:ns:meta/");
  auto& rdf = meta.add("rdf:RDF");
  rdf.attr("xmlns:rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");

  auto& desc = rdf.add("rdf:Description");
  desc.attr("rdf:about", "")
      .attr("xmlns:dc", "http://purl.org/dc/elements/1.1/")
      .attr("xmlns:prism", "http://prismstandard.org/namespaces/basic/3.0/")
      .attr("xmlns:pdfaExtension", "http://www.aiim.org/pdfa/ns/extension/")
      .attr("xmlns:pdfaSchema", "http://www.aiim.org/pdfa/ns/schema#")
      .attr("xmlns:pdfaProperty", "http://www.aiim.org/pdfa/ns/property#")
      .attr("xmlns:pdfaType", "http://www.aiim.org/pdfa/ns/type#")
      .attr("xmlns:pdfaField", "http://www.aiim.org/pdfa/ns/field#")
      .attr("xmlns:" + p, std::string(xmp_author_ns));

  desc.add(alt("dc:title", textex::to_plain(pm.title.main)));
  if (!pm.authors.empty()) {
    auto& seq = desc.add("dc:creator").add("rdf:Seq");
    for (const auto& a : pm.authors) seq.leaf("rdf:li", a.name);
  }
  if (pm.abstract) desc.add(alt("dc:description", textex::to_plain(*pm.abstract)));
  if (!pm.keywords.empty()) {
    auto& bag = desc.add("dc:subject").add("rdf:Bag");
    for (const auto& k : pm.keywords) bag.leaf("rdf:li", k);
  }
  if (pm.license) desc.add(alt("dc:rights", *pm.license));
  if (pm.doi) {
    desc.leaf("dc:identifier", "doi:" + pm.doi->value());
    desc.leaf("prism:doi", pm.doi->value());
    desc.leaf("prism:url", pm.doi->uri());
  }
  if (pm.dates.published) desc.leaf("prism:publicationDate", pm.dates.published->iso());

  if (!pm.authors.empty()) {
    auto& seq = desc.add(p + ":authors").add("rdf:Seq");
    for (const auto& a : pm.authors) {
      auto& li = resource_li(seq);
      li.leaf(p + ":name", a.name);
      if (a.orcid) li.leaf(p + ":orcid", a.orcid->uri());
      if (!a.affiliations.empty()) {
        auto& affs = li.add(p + ":affiliation").add("rdf:Seq");
        for (int idx : a.affiliations) affs.leaf("rdf:li", pm.affiliations[static_cast<std::size_t>(idx - 1)].name);
      }
    }
  }
  desc.add(extension_schema());

  std::string out = "<?xpacket begin=\"\xEF\xBB\xBF\" id=\"W5M0MpCehiHzreSzNTczkc9d\"?>\n";
  out += xml::serialize(meta, "");
  out += "<?xpacket end=\"w\"?>\n";
  return out;
}

}  // namespace texmeta

#endif
