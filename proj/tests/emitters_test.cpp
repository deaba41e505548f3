#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "generators.hpp"
#include "test_util.hpp"

namespace {

using namespace texmeta;
using nlohmann::json;

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + needle.size())) ++n;
  return n;
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(test::fixture("valid"))) {
    names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string json_error_code(const std::string& text) {
  try {
    parse_json(text);
  } catch (const Error& e) {
    return std::string(e.code());
  }
  return "none";
}

// --- JSON -----------------------------------------------------------------

TEST(Json, Fig2Values) {
  const auto j = json::parse(emit_json(test::load_model(test::valid_fixture("fig2")).first));
  EXPECT_EQ(j["authors"][0]["affiliations"], json::array({1, 2}));
  EXPECT_EQ(j["authors"][1]["affiliations"], json::array({2}));
  EXPECT_EQ(j["funders"][0]["grantid"], "A-1234");
  EXPECT_EQ(j["funders"][0]["funder_id"], "100011047");
  EXPECT_EQ(j["authors"][0]["orcid"], "0000-0002-0599-0192");
}

TEST(Json, Fig2Golden) {
  const auto pm = test::load_model(test::valid_fixture("fig2")).first;
  EXPECT_EQ(emit_json(pm), test::read_file(test::source_dir() / "tests" / "golden" / "fig2.json"));
}

TEST(Json, EmptyOptionalsOmitted) {
  PaperMeta pm;
  pm.title.main = textex::RichText::text("T");
  const auto j = json::parse(emit_json(pm));
  EXPECT_EQ(j, json::parse(R"({"title":{"main":"T"}})"));
}

TEST(Json, SchemaErrors) {
  EXPECT_EQ(json_error_code("{}"), code::json_schema);
  EXPECT_EQ(json_error_code("not json"), code::json_schema);
  EXPECT_EQ(json_error_code(R"({"title":{"main":"T"},"colour":1})"), code::json_schema);
  EXPECT_EQ(json_error_code(R"({"title":{"main":"T"},"doi":"11.1/x"})"), code::json_schema);
  EXPECT_EQ(json_error_code(R"({"title":{"main":"T"},"authors":[{"name":"A","corresponding":"yes"}]})"),
            code::json_schema);
  EXPECT_EQ(json_error_code(R"({"title":{"main":"T"},"authors":[{"name":"A","affiliations":[9]}]})"), code::bad_inst);
}

TEST(Json, SchemaErrorNamesPath) {
  try {
    parse_json(R"({"title":{"main":"T"},"authors":[{"name":"A","orcid":"x"}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/authors/0/orcid"), std::string::npos) << e.what();
  }
}

TEST(Json, RefusesInvalidModel) {
  PaperMeta pm;
  Author a;
  a.name = "A";
  a.affiliations = {2};
  pm.authors = {a};
  try {
    emit_json(pm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code::unvalidated);
  }
}

TEST(JsonProperty, RoundTrip) {
  std::mt19937 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto pm = test::gen::paper(rng);
    const auto text = emit_json(pm);
    const auto back = parse_json(text);
    ASSERT_EQ(back, pm) << text;
    EXPECT_EQ(emit_json(back), text);
  }
}

TEST(JsonProperty, FixturesRoundTrip) {
  for (const auto& name : fixture_names()) {
    const auto pm = test::emittable(name);
    EXPECT_EQ(parse_json(emit_json(pm)), pm) << name;
  }
}

// --- Crossref -------------------------------------------------------------

TEST(Crossref, Fig2Funding) {
  const auto xml = emit_crossref(test::emittable("fig2"), test::emit_config());
  EXPECT_NE(xml.find("10.13039/100011047</fr:assertion>"), std::string::npos) << xml;
  EXPECT_NE(xml.find(">A-1234</fr:assertion>"), std::string::npos);
  EXPECT_NE(xml.find("<fr:assertion name=\"funder_name\">AGE-WELL"), std::string::npos);
}

TEST(Crossref, NoFundersNoProgram) {
  auto pm = test::emittable("fig2");
  pm.funders.clear();
  EXPECT_EQ(emit_crossref(pm, test::emit_config()).find("fr:program"), std::string::npos);
}

TEST(Crossref, RequiresDoi) {
  auto pm = test::load_model(test::valid_fixture("fig2")).first;
  try {
    emit_crossref(pm, test::emit_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code::no_doi);
  }
}

TEST(Crossref, RequiresDepositConfig) {
  EmitConfig cfg;
  try {
    emit_crossref(test::emittable("fig2"), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code::config);
    EXPECT_NE(std::string(e.what()).find("landing_url"), std::string::npos);
  }
}

TEST(Crossref, HeadAndBody) {
  const auto xml = emit_crossref(test::emittable("fig2"), test::emit_config());
  EXPECT_NE(xml.find("<timestamp>1718000000</timestamp>"), std::string::npos);
  EXPECT_NE(xml.find("version=\"5.3.1\""), std::string::npos);
  EXPECT_NE(xml.find("<doi>10.62056/test-fig2</doi>"), std::string::npos);
  EXPECT_NE(xml.find("<resource>https://cic.example.org/test-fig2</resource>"), std::string::npos);
  EXPECT_NE(xml.find("<person_name sequence=\"first\" contributor_role=\"author\">"), std::string::npos);
  EXPECT_EQ(count(xml, "<person_name "), 2u);
  EXPECT_NE(xml.find("<ORCID authenticated=\"false\">https://orcid.org/0000-0002-0599-0192</ORCID>"),
            std::string::npos);
  EXPECT_NE(xml.find("<title>Emojex: use of emojis in LaTeX</title>"), std::string::npos);
}

TEST(Crossref, MathTitleAsPlainText) {
  const auto xml = emit_crossref(test::emittable("residue"), test::emit_config());
  EXPECT_NE(xml.find("<title>On the $\\frac{x}{2}$ Bound"), std::string::npos) << xml;
}

TEST(Crossref, FixturesMatchSubsetSchema) {
  std::vector<std::string> docs;
  for (const auto& name : fixture_names()) docs.push_back(emit_crossref(test::emittable(name), test::emit_config()));
  std::string log;
  EXPECT_EQ(test::validate_texts("xsd", docs, test::crossref_subset_xsd(), &log), 0) << log;
}

// --- JATS -----------------------------------------------------------------

TEST(Jats, Fig2Contribs) {
  const auto xml = emit_jats(test::emittable("fig2"), test::emit_config());
  EXPECT_EQ(count(xml, "<contrib "), 2u);
  const auto first = xml.substr(xml.find("<contrib "), xml.find("</contrib>") - xml.find("<contrib "));
  EXPECT_EQ(count(first, "<xref ref-type=\"aff\""), 2u) << first;
  EXPECT_NE(xml.find("<contrib-id contrib-id-type=\"orcid\">https://orcid.org/0000-0002-0599-0192</contrib-id>"),
            std::string::npos);
  EXPECT_NE(xml.find("https://ror.org/044t1p926"), std::string::npos);
}

TEST(Jats, MathBecomesTexMath) {
  auto pm = test::emittable("fig2");
  pm.title.main = textex::normalize("Emojex: use of emojis in $\\LaTeX$").first;
  const auto xml = emit_jats(pm, test::emit_config());
  EXPECT_NE(xml.find("<article-title>Emojex: use of emojis in <inline-formula><tex-math>\\LaTeX</tex-math>"
                     "</inline-formula></article-title>"),
            std::string::npos)
      << xml;
}

TEST(Jats, RequiresJournalIdentity) {
  auto cfg = test::emit_config();
  cfg.issn.reset();
  try {
    emit_jats(test::emittable("fig2"), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code::config);
  }
}

TEST(Jats, FixturesMatchPublishingDtd) {
  std::vector<std::string> docs;
  for (const auto& name : fixture_names()) docs.push_back(emit_jats(test::emittable(name), test::emit_config()));
  std::string log;
  EXPECT_EQ(test::validate_texts("dtd", docs, test::jats_dtd(), &log), 0) << log;
}

// --- XMP ------------------------------------------------------------------

TEST(Xmp, CreatorSeqInOrder) {
  const auto xml = emit_xmp(test::emittable("fig2"));
  const auto seq_start = xml.find("<dc:creator>");
  const auto seq_end = xml.find("</dc:creator>");
  ASSERT_NE(seq_start, std::string::npos);
  const auto seq = xml.substr(seq_start, seq_end - seq_start);
  EXPECT_NE(seq.find("<rdf:Seq>"), std::string::npos);
  EXPECT_EQ(count(seq, "<rdf:li>"), 2u);
  EXPECT_LT(seq.find("Fester Bestertester"), seq.find("Kevin S. McCurley"));
}

TEST(Xmp, OrcidOfFirstAuthor) {
  const auto xml = emit_xmp(test::emittable("fig2"));
  const auto first = xml.find("Fester Bestertester</tmauth:name>");
  const auto orcid = xml.find("https://orcid.org/0000-0002-0599-0192");
  const auto second = xml.find("Kevin S. McCurley</tmauth:name>");
  ASSERT_NE(first, std::string::npos) << xml;
  ASSERT_NE(orcid, std::string::npos);
  EXPECT_LT(first, orcid);
  EXPECT_LT(orcid, second);
}

TEST(Xmp, PacketShape) {
  const auto xml = emit_xmp(test::emittable("fig2"));
  EXPECT_EQ(xml.rfind("<?xpacket begin=\"\xEF\xBB\xBF\" id=\"W5M0MpCehiHzreSzNTczkc9d\"?>", 0), 0u);
  EXPECT_NE(xml.find("<?xpacket end=\"w\"?>"), std::string::npos);
  EXPECT_NE(xml.find("<prism:doi>10.62056/test-fig2</prism:doi>"), std::string::npos);
}

TEST(Xmp, FixturesWellFormed) {
  std::vector<std::string> docs;
  for (const auto& name : fixture_names()) docs.push_back(emit_xmp(test::emittable(name)));
  std::string log;
  EXPECT_EQ(test::validate_texts("wellformed", docs, {}, &log), 0) << log;
}

// --- All formats ----------------------------------------------------------

TEST(EmittersProperty, EscapingFuzzParsesBack) {
  std::mt19937 rng(31337);
  const auto cfg = test::emit_config();
  std::vector<std::string> any_xml, jats_docs, crossref_docs;
  for (int i = 0; i < 200; ++i) {
    auto pm = test::gen::paper(rng);
    if (!pm.doi) pm.doi = Identifier::doi("10.62056/fuzz" + std::to_string(i));
    for (auto& a : pm.authors) a.name += " <&]]>";
    for (auto& f : pm.funders) f.name += " ]]>&<";
    pm.title.main.append_text(" x<y & ]]> \"q\"");
    crossref_docs.push_back(emit_crossref(pm, cfg));
    jats_docs.push_back(emit_jats(pm, cfg));
    any_xml.push_back(emit_xmp(pm));
  }
  std::string log;
  EXPECT_EQ(test::validate_texts("wellformed", any_xml, {}, &log), 0) << log;
  EXPECT_EQ(test::validate_texts("dtd", jats_docs, test::jats_dtd(), &log), 0) << log;
  EXPECT_EQ(test::validate_texts("xsd", crossref_docs, test::crossref_subset_xsd(), &log), 0) << log;
}

TEST(EmittersProperty, ControlCharactersAreDropped) {
  auto pm = test::emittable("minimal");
  pm.title.main = textex::RichText::text(std::string("bell\x07 and nul") + '\0' + "x");
  pm.authors.front().name = std::string("A\x01") + "B";
  std::string log;
  EXPECT_EQ(test::validate_texts("wellformed",
                                 {emit_crossref(pm, test::emit_config()), emit_jats(pm, test::emit_config()),
                                  emit_xmp(pm)},
                                 {}, &log),
            0)
      << log;
}

TEST(EmittersProperty, CrossFormatConsistency) {
  for (const auto& name : fixture_names()) {
    const auto pm = test::emittable(name);
    const auto j = json::parse(emit_json(pm));
    json expected;
    expected["authors"] = json::array();
    for (const auto& a : j.value("authors", json::array())) expected["authors"].push_back(a["name"]);
    expected["doi"] = j["doi"];
    expected["title"] = j["title"]["main"];
    const auto cfg = test::emit_config();
    const std::pair<std::string, std::string> outputs[] = {
        {"crossref", emit_crossref(pm, cfg)}, {"jats", emit_jats(pm, cfg)}, {"xmp", emit_xmp(pm)}};
    for (const auto& [kind, xml] : outputs) {
      const auto got = test::extract_fields(kind, xml);
      ASSERT_FALSE(got.empty()) << name << " " << kind;
      EXPECT_EQ(json::parse(got), expected) << name << " " << kind;
    }
  }
}

TEST(EmittersProperty, Deterministic) {
  const auto cfg = test::emit_config();
  for (const auto& name : fixture_names()) {
    const auto pm = test::emittable(name);
    EXPECT_EQ(emit_json(pm), emit_json(test::emittable(name)));
    EXPECT_EQ(emit_crossref(pm, cfg), emit_crossref(test::emittable(name), cfg));
    EXPECT_EQ(emit_jats(pm, cfg), emit_jats(test::emittable(name), cfg));
    EXPECT_EQ(emit_xmp(pm), emit_xmp(test::emittable(name)));
  }
}

TEST(Emitters, AllRefuseInvalidModel) {
  auto pm = test::emittable("fig2");
  pm.authors[1].orcid = pm.authors[0].orcid;
  const auto cfg = test::emit_config();
  for (auto f : cli::all_formats) {
    try {
      cli::render(f, pm, cfg);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code::unvalidated);
    }
  }
}

}  // namespace
