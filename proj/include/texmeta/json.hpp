#ifndef TEXMETA_JSON_HPP
#define TEXMETA_JSON_HPP

// Canonical JSON form of PaperMeta.
//
// Keys appear in a fixed order, absent optional values and empty lists are
// omitted, indentation is two spaces, and the text ends with a single LF.
// Rich text (titles, abstract, footnotes) is carried as a string with math in
// `$...$`; parse_json rebuilds it with textex::normalize.

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

#include "texmeta/diagnostic.hpp"
#include "texmeta/model.hpp"
#include "texmeta/textex.hpp"

namespace texmeta {

namespace json_detail {

using ojson = nlohmann::ordered_json;

template <class T>
void put(ojson& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

inline void put(ojson& j, const char* key, const std::optional<RichText>& v) {
  if (v) j[key] = textex::to_plain(*v);
}

inline void put(ojson& j, const char* key, const std::optional<Identifier>& v) {
  if (v) j[key] = v->value();
}

inline void put(ojson& j, const char* key, const std::vector<std::string>& v) {
  if (!v.empty()) j[key] = v;
}

inline void put(ojson& j, const char* key, const Extras& v) {
  if (v.empty()) return;
  ojson o = ojson::object();
  for (const auto& [k, val] : v) o[k] = val;
  j[key] = std::move(o);
}

inline ojson to_json(const PaperMeta& pm) {
  ojson j = ojson::object();

  ojson title = ojson::object();
  title["main"] = textex::to_plain(pm.title.main);
  put(title, "plaintext", pm.title.plaintext);
  put(title, "subtitle", pm.title.subtitle);
  put(title, "running", pm.title.running);
  put(title, "onclick", pm.title.onclick);
  j["title"] = std::move(title);

  put(j, "doi", pm.doi);

  if (!pm.authors.empty()) {
    ojson arr = ojson::array();
    for (const auto& a : pm.authors) {
      ojson o = ojson::object();
      o["name"] = a.name;
      put(o, "surname", a.surname);
      put(o, "orcid", a.orcid);
      put(o, "email", a.email);
      if (!a.affiliations.empty()) o["affiliations"] = a.affiliations;
      if (a.corresponding) o["corresponding"] = true;
      put(o, "roles", a.roles);
      put(o, "footnote", a.footnote);
      put(o, "onclick", a.onclick);
      put(o, "extras", a.extras);
      arr.push_back(std::move(o));
    }
    j["authors"] = std::move(arr);
  }

  if (!pm.affiliations.empty()) {
    ojson arr = ojson::array();
    for (const auto& a : pm.affiliations) {
      ojson o = ojson::object();
      o["index"] = a.index;
      o["name"] = a.name;
      put(o, "ror", a.ror);
      put(o, "department", a.department);
      put(o, "street", a.street);
      put(o, "city", a.city);
      put(o, "country", a.country);
      put(o, "extras", a.extras);
      arr.push_back(std::move(o));
    }
    j["affiliations"] = std::move(arr);
  }

  if (!pm.funders.empty()) {
    ojson arr = ojson::array();
    for (const auto& f : pm.funders) {
      ojson o = ojson::object();
      o["name"] = f.name;
      put(o, "funder_id", f.funder_id);
      put(o, "grantid", f.grantid);
      put(o, "country", f.country);
      put(o, "extras", f.extras);
      arr.push_back(std::move(o));
    }
    j["funders"] = std::move(arr);
  }

  put(j, "abstract", pm.abstract);
  put(j, "keywords", pm.keywords);
  put(j, "license", pm.license);

  ojson dates = ojson::object();
  if (pm.dates.received) dates["received"] = pm.dates.received->iso();
  if (pm.dates.accepted) dates["accepted"] = pm.dates.accepted->iso();
  if (pm.dates.published) dates["published"] = pm.dates.published->iso();
  if (!dates.empty()) j["dates"] = std::move(dates);

  if (!pm.citations.empty()) {
    ojson arr = ojson::array();
    for (const auto& c : pm.citations) {
      ojson o = ojson::object();
      o["key"] = c.key;
      if (!c.entry_type.empty()) o["type"] = c.entry_type;
      if (!c.authors.empty()) {
        ojson as = ojson::array();
        for (const auto& a : c.authors) {
          ojson ao = ojson::object();
          ao["name"] = a.name;
          put(ao, "surname", a.surname);
          as.push_back(std::move(ao));
        }
        o["authors"] = std::move(as);
      }
      if (!c.title.empty()) o["title"] = textex::to_plain(c.title);
      put(o, "year", c.year);
      put(o, "venue", c.venue);
      put(o, "volume", c.volume);
      put(o, "number", c.number);
      put(o, "pages", c.pages);
      put(o, "doi", c.doi);
      put(o, "url", c.url);
      put(o, "raw", c.raw);
      put(o, "extras", c.extras);
      arr.push_back(std::move(o));
    }
    j["citations"] = std::move(arr);
  }

  if (pm.multi_corresponding) j["multicorresponding"] = true;
  put(j, "extras", pm.extras);
  return j;
}

// Reader that tracks a JSON-pointer path for error messages.
class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw Error(code::json_schema, (path.empty() ? "/" : path) + ": " + what);
  }

  static const ojson& object(const ojson& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(path + "/" + k, "unknown key");
    }
    return j;
  }

  static const ojson* find(const ojson& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  static std::string string(const ojson& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  static std::string required_string(const ojson& j, const char* key, const std::string& path) {
    const auto* v = find(j, key);
    if (v == nullptr) fail(path + "/" + key, "missing required key");
    return string(*v, path + "/" + key);
  }

  static std::optional<std::string> opt_string(const ojson& j, const char* key, const std::string& path) {
    const auto* v = find(j, key);
    if (v == nullptr) return std::nullopt;
    return string(*v, path + "/" + key);
  }

  static RichText rich(const std::string& s, const std::string& path) {
    auto [rt, report] = textex::normalize(s);
    if (report.has_errors()) fail(path, report.diagnostics.front().message);
    return rt;
  }

  static std::optional<RichText> opt_rich(const ojson& j, const char* key, const std::string& path) {
    if (auto s = opt_string(j, key, path)) return rich(*s, path + "/" + key);
    return std::nullopt;
  }

  static std::optional<Identifier> opt_id(const ojson& j, const char* key, Namespace ns, const std::string& path) {
    auto s = opt_string(j, key, path);
    if (!s) return std::nullopt;
    auto id = Identifier::try_make(ns, *s);
    if (!id) fail(path + "/" + key, "invalid " + Identifier::namespace_name(ns) + " '" + *s + "'");
    return id;
  }

  static bool opt_bool(const ojson& j, const char* key, const std::string& path) {
    const auto* v = find(j, key);
    if (v == nullptr) return false;
    if (!v->is_boolean()) fail(path + "/" + key, "expected a boolean");
    return v->get<bool>();
  }

  static std::vector<std::string> strings(const ojson& j, const char* key, const std::string& path) {
    std::vector<std::string> out;
    const auto* v = find(j, key);
    if (v == nullptr) return out;
    if (!v->is_array()) fail(path + "/" + key, "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) out.push_back(string((*v)[i], path + "/" + key + "/" + std::to_string(i)));
    return out;
  }

  static Extras extras(const ojson& j, const std::string& path) {
    Extras out;
    const auto* v = find(j, "extras");
    if (v == nullptr) return out;
    if (!v->is_object()) fail(path + "/extras", "expected an object");
    for (const auto& [k, val] : v->items()) out[k] = string(val, path + "/extras/" + k);
    return out;
  }

  static const ojson* array(const ojson& j, const char* key, const std::string& path) {
    const auto* v = find(j, key);
    if (v != nullptr && !v->is_array()) fail(path + "/" + key, "expected an array");
    return v;
  }

  static std::optional<Date> opt_date(const ojson& j, const char* key, const std::string& path) {
    auto s = opt_string(j, key, path);
    if (!s) return std::nullopt;
    auto d = Date::parse(*s);
    if (!d) fail(path + "/" + key, "expected YYYY-MM-DD");
    return d;
  }

  static int integer(const ojson& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
  }

  static PaperMeta paper(const ojson& root) {
    PaperMeta pm;
    object(root, "", {"title", "doi", "authors", "affiliations", "funders", "abstract", "keywords", "license", "dates",
                      "citations", "multicorresponding", "extras"});

    const auto* t = find(root, "title");
    if (t == nullptr) fail("/title", "missing required key");
    object(*t, "/title", {"main", "plaintext", "subtitle", "running", "onclick"});
    pm.title.main = rich(required_string(*t, "main", "/title"), "/title/main");
    pm.title.plaintext = opt_string(*t, "plaintext", "/title");
    pm.title.subtitle = opt_rich(*t, "subtitle", "/title");
    pm.title.running = opt_string(*t, "running", "/title");
    pm.title.onclick = opt_string(*t, "onclick", "/title");

    pm.doi = opt_id(root, "doi", Namespace::doi, "");

    if (const auto* arr = array(root, "authors", "")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string p = "/authors/" + std::to_string(i);
        const auto& o = object((*arr)[i], p,
                               {"name", "surname", "orcid", "email", "affiliations", "corresponding", "roles",
                                "footnote", "onclick", "extras"});
        Author a;
        a.name = required_string(o, "name", p);
        a.surname = opt_string(o, "surname", p);
        a.orcid = opt_id(o, "orcid", Namespace::orcid, p);
        a.email = opt_string(o, "email", p);
        if (const auto* affs = array(o, "affiliations", p)) {
          for (std::size_t k = 0; k < affs->size(); ++k) {
            a.affiliations.push_back(integer((*affs)[k], p + "/affiliations/" + std::to_string(k)));
          }
        }
        a.corresponding = opt_bool(o, "corresponding", p);
        a.roles = strings(o, "roles", p);
        a.footnote = opt_rich(o, "footnote", p);
        a.onclick = opt_string(o, "onclick", p);
        a.extras = extras(o, p);
        pm.authors.push_back(std::move(a));
      }
    }

    if (const auto* arr = array(root, "affiliations", "")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string p = "/affiliations/" + std::to_string(i);
        const auto& o = object((*arr)[i], p, {"index", "name", "ror", "department", "street", "city", "country", "extras"});
        Affiliation a;
        const auto* idx = find(o, "index");
        if (idx == nullptr) fail(p + "/index", "missing required key");
        a.index = integer(*idx, p + "/index");
        a.name = required_string(o, "name", p);
        a.ror = opt_id(o, "ror", Namespace::ror, p);
        a.department = opt_string(o, "department", p);
        a.street = opt_string(o, "street", p);
        a.city = opt_string(o, "city", p);
        a.country = opt_string(o, "country", p);
        a.extras = extras(o, p);
        pm.affiliations.push_back(std::move(a));
      }
    }

    if (const auto* arr = array(root, "funders", "")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string p = "/funders/" + std::to_string(i);
        const auto& o = object((*arr)[i], p, {"name", "funder_id", "grantid", "country", "extras"});
        Funding f;
        f.name = required_string(o, "name", p);
        f.funder_id = opt_id(o, "funder_id", Namespace::fundref, p);
        f.grantid = opt_string(o, "grantid", p);
        f.country = opt_string(o, "country", p);
        f.extras = extras(o, p);
        pm.funders.push_back(std::move(f));
      }
    }

    pm.abstract = opt_rich(root, "abstract", "");
    pm.keywords = strings(root, "keywords", "");
    pm.license = opt_string(root, "license", "");

    if (const auto* d = find(root, "dates")) {
      object(*d, "/dates", {"received", "accepted", "published"});
      pm.dates.received = opt_date(*d, "received", "/dates");
      pm.dates.accepted = opt_date(*d, "accepted", "/dates");
      pm.dates.published = opt_date(*d, "published", "/dates");
    }

    if (const auto* arr = array(root, "citations", "")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string p = "/citations/" + std::to_string(i);
        const auto& o = object((*arr)[i], p,
                               {"key", "type", "authors", "title", "year", "venue", "volume", "number", "pages", "doi",
                                "url", "raw", "extras"});
        Citation c;
        c.key = required_string(o, "key", p);
        c.entry_type = opt_string(o, "type", p).value_or("");
        if (const auto* as = array(o, "authors", p)) {
          for (std::size_t k = 0; k < as->size(); ++k) {
            const std::string ap = p + "/authors/" + std::to_string(k);
            const auto& ao = object((*as)[k], ap, {"name", "surname"});
            c.authors.push_back({required_string(ao, "name", ap), opt_string(ao, "surname", ap)});
          }
        }
        if (auto s = opt_string(o, "title", p)) c.title = rich(*s, p + "/title");
        if (const auto* y = find(o, "year")) c.year = integer(*y, p + "/year");
        c.venue = opt_string(o, "venue", p);
        c.volume = opt_string(o, "volume", p);
        c.number = opt_string(o, "number", p);
        c.pages = opt_string(o, "pages", p);
        c.doi = opt_id(o, "doi", Namespace::doi, p);
        c.url = opt_string(o, "url", p);
        c.raw = opt_string(o, "raw", p);
        c.extras = extras(o, p);
        pm.citations.push_back(std::move(c));
      }
    }

    pm.multi_corresponding = opt_bool(root, "multicorresponding", "");
    pm.extras = extras(root, "");
    return pm;
  }
};

}  // namespace json_detail

/// Throws Error(E-UNVALIDATED) when check_relationships reports errors.
inline std::string emit_json(const PaperMeta& pm) {
  require_relationships(pm);
  return json_detail::to_json(pm).dump(2) + "\n";
}

/// Inverse of emit_json. Throws Error(E-JSONSCHEMA) with a JSON-pointer path,
/// or the first relationship error (e.g. E-BADINST) found on the loaded model.
inline PaperMeta parse_json(std::string_view text) {
  json_detail::ojson root;
  try {
    root = json_detail::ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(code::json_schema, std::string("/: not valid JSON: ") + e.what());
  }
  PaperMeta pm = json_detail::Reader::paper(root);
  for (const auto& d : check_relationships(pm)) {
    if (d.is_error()) throw Error(d);
  }
  return pm;
}

}  // namespace texmeta

#endif
