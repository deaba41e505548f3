// Prints one PASS/FAIL line per acceptance criterion. Exit status is the
// number of failing criteria (capped at 1 for ctest).

#include <chrono>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "test_util.hpp"

namespace {

using namespace texmeta;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(test::fixture("valid"))) {
    names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Outcome fig2_fidelity() {
  Outcome o;
  const auto start = Clock::now();
  const auto [doc, parse_diags] = metafile::parse_meta(test::read_file(test::valid_fixture("fig2")));
  const auto [pm, lower_diags] = metafile::lower_to_paper_meta(doc);
  const auto rel = check_relationships(pm);
  const auto elapsed = Clock::now() - start;
  o.check(parse_diags.empty() && lower_diags.empty() && rel.empty(), "diagnostics reported");
  o.check(pm.authors.size() == 2 && pm.affiliations.size() == 2 && pm.funders.size() == 1, "entity counts");
  if (pm.authors.size() == 2) {
    o.check(pm.authors[0].affiliations == std::vector<int>{1, 2}, "author 1 affiliations");
    o.check(pm.authors[1].affiliations == std::vector<int>{2}, "author 2 affiliations");
  }
  if (pm.funders.size() == 1) {
    o.check(pm.funders[0].grantid == "A-1234", "grant id");
    o.check(pm.funders[0].funder_id && pm.funders[0].funder_id->value() == "100011047", "funder id");
  }
  o.check(elapsed < std::chrono::seconds(1), "slower than 1 s");
  o.detail = o.pass ? "2 authors, 2 affiliations, 1 funder, 0 diagnostics" : o.detail;
  return o;
}

Outcome tex_normalization() {
  Outcome o;
  auto text = [](std::string s) { return textex::RichText::text(std::move(s)); };
  auto math = [](std::string s) {
    textex::RichText rt;
    rt.append_math(std::move(s));
    return rt;
  };
  const std::pair<std::string, textex::RichText> examples[] = {
      {"\\\"u", text("\xC3\xBC")},
      {"$\\protect \\frac  {x}{2}$", math("\\frac{x}{2}")},
      {"A~B", text("A\xC2\xA0" "B")},
      {"$\\alpha $", math("\\alpha")},
      {"\\dag \\copyright \\pounds", text("\xE2\x80\xA0 \xC2\xA9 \xC2\xA3")},
      {"\\DJ", text("\xC4\x90")},
  };
  for (const auto& [in, expected] : examples) o.check(textex::normalize(in).first == expected, "example " + in);

  static const std::vector<std::string> tokens = {
      "\\\"u",        "\\'e",    "\\v\\i",    "\\c c",   "\\ss ",   "\\dag ",    "\\copyright", "\\DJ",
      "\\protect ",   "\\foo ",  "\\bar{}",   "~",       "{",       "}",         "$x^2$",       "$\\protect \\frac {a}{b}$",
      "\\(y\\)",      " ",       "word",      "\\emph{e}", "\\\"{\\baz}", "\\penalty 10", "\\",  "\\%",
      "\\unhbox \\voidb@x \\protect \\penalty \\@M \\ {}"};
  std::mt19937 rng(500);
  int dirty = 0;
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const int n = test::gen::uniform(rng, 1, 12);
    for (int k = 0; k < n; ++k) s += test::gen::pick(rng, tokens);
    const auto rt = textex::normalize(s).first;
    for (const auto& seg : rt.segments()) {
      if (const auto* t = std::get_if<textex::Text>(&seg); t && t->value.find('\\') != std::string::npos) ++dirty;
    }
  }
  o.check(dirty == 0, std::to_string(dirty) + " Text segments with a backslash");
  if (o.pass) o.detail = "6 examples byte-exact, 500 macro-soup inputs clean";
  return o;
}

Outcome identifier_checksums() {
  Outcome o;
  // Hand MOD 11-2 (total = (total + d) * 2 over the first 15 digits):
  // 0000-0002-0599-019 -> 1286, (12 - 1286 mod 11) mod 11 = 2.
  // 0000-0001-7890-543 -> 2014, (12 - 2014 mod 11) mod 11 = 0.
  o.check(test::gen::mod11_2("000000020599019") == '2', "hand check 1");
  o.check(test::gen::mod11_2("000000017890543") == '0', "hand check 2");
  o.check(validate_orcid("0000-0002-0599-0192") && validate_orcid("0000-0001-7890-5430"), "sample ORCIDs");

  std::mt19937 rng(1000);
  int survivors = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto id = test::gen::orcid(rng);
    if (!validate_orcid(id)) ++survivors;
    for (std::size_t pos = 0; pos < id.size(); ++pos) {
      if (id[pos] == '-') continue;
      for (char c : std::string(pos == 18 ? "0123456789X" : "0123456789")) {
        if (c == id[pos]) continue;
        auto m = id;
        m[pos] = c;
        if (validate_orcid(m)) ++survivors;
      }
    }
  }
  o.check(survivors == 0, std::to_string(survivors) + " mutations accepted");

  int disagreements = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto d = test::gen::digits(rng, 15);
    const std::string base = d.substr(0, 4) + "-" + d.substr(4, 4) + "-" + d.substr(8, 4) + "-" + d.substr(12, 3);
    const char expected = test::gen::mod11_2(d);
    for (char c : std::string("0123456789X")) {
      if (validate_orcid(base + c) != (c == expected)) ++disagreements;
    }
  }
  o.check(disagreements == 0, std::to_string(disagreements) + " oracle disagreements");
  if (o.pass) o.detail = "sample ORCIDs valid, 1000 x all mutations rejected, 10000 bases agree";
  return o;
}

Outcome round_trips() {
  Outcome o;
  std::mt19937 rng(4);
  int json_bad = 0, meta_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto pm = test::gen::paper(rng);
    try {
      if (!(parse_json(emit_json(pm)) == pm)) ++json_bad;
    } catch (const Error&) {
      ++json_bad;
    }
  }
  for (int i = 0; i < 1000; ++i) {
    const auto doc = test::gen::meta_document(rng);
    const auto [back, diags] = metafile::parse_meta(metafile::serialize_meta(doc));
    if (!(back == doc) || has_errors(diags)) ++meta_bad;
  }
  o.check(json_bad == 0, std::to_string(json_bad) + " JSON round-trip failures");
  o.check(meta_bad == 0, std::to_string(meta_bad) + " .meta round-trip failures");
  if (o.pass) o.detail = "1000 JSON models, 1000 .meta documents";
  return o;
}

Outcome schema_validity() {
  Outcome o;
  const auto cfg = test::emit_config();
  std::vector<std::string> crossref, jats, other;
  for (const auto& name : fixture_names()) {
    const auto pm = test::emittable(name);
    crossref.push_back(emit_crossref(pm, cfg));
    jats.push_back(emit_jats(pm, cfg));
    other.push_back(emit_xmp(pm));
  }
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto pm = test::gen::paper(rng);
    if (!pm.doi) pm.doi = Identifier::doi("10.62056/fuzz" + std::to_string(i));
    for (auto& a : pm.authors) a.name += " <&]]>";
    for (auto& f : pm.funders) f.name += " ]]>&<";
    for (auto& af : pm.affiliations) af.name += " a<b&c]]>";
    pm.title.main.append_text(" <&]]>");
    other.push_back(emit_xmp(pm));
    other.push_back(emit_crossref(pm, cfg));
    other.push_back(emit_jats(pm, cfg));
  }

  std::string log;
  const int official = test::validate_texts("xsd", crossref, test::crossref_xsd(), &log);
  if (official == 2) o.check(false, "official Crossref XSD not vendored (" + test::crossref_xsd().string() + ")");
  else o.check(official == 0, "Crossref XSD: " + log.substr(0, 200));
  const bool subset = test::validate_texts("xsd", crossref, test::crossref_subset_xsd(), &log) == 0;
  const bool dtd = test::validate_texts("dtd", jats, test::jats_dtd(), &log) == 0;
  o.check(dtd, "JATS DTD: " + log.substr(0, 200));
  const bool parsed = test::validate_texts("wellformed", other, {}, &log) == 0;
  o.check(parsed, "parse-back: " + log.substr(0, 200));
  auto ok = [](bool b) { return b ? std::string(" ok") : std::string(" failed"); };
  const std::string rest = "subset XSD" + ok(subset) + ", JATS DTD" + ok(dtd) + ", parse-back" + ok(parsed);
  o.detail = o.pass ? "Crossref XSD ok, " + rest : o.detail + "; " + rest;
  return o;
}

Outcome cross_format() {
  Outcome o;
  const auto cfg = test::emit_config();
  for (const auto& name : fixture_names()) {
    const auto pm = test::emittable(name);
    const auto j = nlohmann::json::parse(emit_json(pm));
    nlohmann::json expected;
    expected["authors"] = nlohmann::json::array();
    for (const auto& a : j.value("authors", nlohmann::json::array())) expected["authors"].push_back(a["name"]);
    expected["doi"] = j["doi"];
    expected["title"] = j["title"]["main"];
    const std::pair<std::string, std::string> outputs[] = {
        {"crossref", emit_crossref(pm, cfg)}, {"jats", emit_jats(pm, cfg)}, {"xmp", emit_xmp(pm)}};
    for (const auto& [kind, xml] : outputs) {
      const auto got = test::extract_fields(kind, xml);
      o.check(!got.empty() && nlohmann::json::parse(got) == expected, name + " " + kind + " differs from JSON");
    }
  }
  if (o.pass) o.detail = "authors, DOI, title agree for " + std::to_string(fixture_names().size()) + " fixtures";
  return o;
}

Outcome determinism() {
  Outcome o;
  auto cfg = test::journal_config();
  cfg.doi_from = "10.62056:determinism";
  for (const auto& name : fixture_names()) {
    test::TempDir a, b;
    std::ostringstream out, err;
    const int ra = cli::cmd_emit(test::valid_fixture(name), {std::nullopt, true, a.path()}, cfg, out, err);
    const int rb = cli::cmd_emit(test::valid_fixture(name), {std::nullopt, true, b.path()}, cfg, out, err);
    o.check(ra == 0 && rb == 0, name + ": emit --all failed");
    for (const char* ext : {".json", ".xml", ".jats.xml", ".xmp"}) {
      const std::string f = name + ext;
      if (std::filesystem::exists(a / f) && std::filesystem::exists(b / f)) {
        o.check(test::read_file(a / f) == test::read_file(b / f), f + " differs between runs");
      }
    }
  }

  // Time every unit-test binary, offline, as one suite.
  const auto start = Clock::now();
  std::istringstream list(TEXMETA_UNIT_TESTS);
  int failures = 0;
  for (std::string name; std::getline(list, name, '|');) {
    const auto bin = std::filesystem::path(TEXMETA_TEST_BIN_DIR) / name;
    const std::string cmd = "\"" + bin.string() + "\" --gtest_brief=1 >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) ++failures;
  }
  const auto seconds = std::chrono::duration<double>(Clock::now() - start).count();
  o.check(failures == 0, std::to_string(failures) + " unit-test binaries failed");
  o.check(seconds < 60.0, "unit suite took " + std::to_string(seconds) + " s");
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "byte-identical --all output; unit suite %.1f s", seconds);
    o.detail = buf;
  }
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"fig2 fidelity", fig2_fidelity},         {"tex normalization", tex_normalization},
      {"identifier checksums", identifier_checksums}, {"round trip", round_trips},
      {"schema validity", schema_validity},     {"cross-format consistency", cross_format},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << "\n";
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
