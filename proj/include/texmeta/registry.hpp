#ifndef TEXMETA_REGISTRY_HPP
#define TEXMETA_REGISTRY_HPP

// Optional ROR / funder registry lookups. Nothing else depends on this header.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "texmeta/diagnostic.hpp"
#include "texmeta/model.hpp"
#include "texmeta/utf8.hpp"

namespace texmeta::registry {

enum class Status { active, withdrawn, unknown };

inline std::string_view status_name(Status s) {
  switch (s) {
    case Status::active: return "active";
    case Status::withdrawn: return "withdrawn";
    case Status::unknown: break;
  }
  return "unknown";
}

inline std::optional<Status> status_from_name(std::string_view s) {
  if (s == "active") return Status::active;
  if (s == "withdrawn") return Status::withdrawn;
  if (s == "unknown") return Status::unknown;
  return std::nullopt;
}

/// `fetched_at` is set exactly when `status` is not unknown.
struct RegistryRecord {
  Identifier identifier;
  std::string canonical_name;
  Status status = Status::unknown;
  std::optional<std::int64_t> fetched_at;  // seconds since epoch
};

/// What a registry says about one identifier.
struct Fetched {
  std::string name;
  Status status = Status::active;
};

/// Transport to a registry. Implementations throw Error(E-NETWORK) on
/// transport failure and Error(E-NOTFOUND) when the registry has no entry.
class RegistryClient {
 public:
  virtual ~RegistryClient() = default;
  virtual bool enabled() const { return true; }
  virtual Fetched fetch(const Identifier& id) = 0;
};

/// The default: never touches the network.
class OfflineClient final : public RegistryClient {
 public:
  bool enabled() const override { return false; }
  Fetched fetch(const Identifier& id) override {
    throw Error(code::network, "registry access is disabled (" + id.namespace_name() + ":" + id.value() + ")");
  }
};

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

/// ROR API record, v1 (`name`) or v2 (`names` with a `ror_display` entry).
inline Fetched parse_ror_response(std::string_view body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(code::network, "ROR response is not a JSON object");
  Fetched f;
  if (auto names = j.find("names"); names != j.end() && names->is_array()) {
    for (const auto& n : *names) {
      const auto types = n.value("types", nlohmann::json::array());
      for (const auto& t : types) {
        if (t == "ror_display") f.name = n.value("value", "");
      }
    }
  }
  if (f.name.empty()) f.name = j.value("name", "");
  const auto status = j.value("status", "active");
  f.status = status == "active" ? Status::active : Status::withdrawn;
  return f;
}

/// Crossref REST `funders/{id}` response. A funder that has been replaced by
/// another counts as withdrawn.
inline Fetched parse_funder_response(std::string_view body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(code::network, "funder response is not a JSON object");
  const auto msg = j.value("message", nlohmann::json::object());
  if (!msg.is_object()) throw Error(code::network, "funder response has no message object");
  Fetched f;
  f.name = msg.value("name", "");
  const auto replaced = msg.value("replaced-by", nlohmann::json::array());
  f.status = replaced.empty() ? Status::active : Status::withdrawn;
  return f;
}

/// HTTP GET returning (status code, body); throws Error(E-NETWORK) when the
/// request itself fails.
using HttpGet = std::function<std::pair<int, std::string>(const std::string& url)>;

/// Registry client over a pluggable HTTP transport. Endpoint templates contain
/// `{id}`.
class JsonRegistryClient final : public RegistryClient {
 public:
  JsonRegistryClient(HttpGet get, std::string ror_endpoint, std::string funder_endpoint)
      : get_(std::move(get)), ror_endpoint_(std::move(ror_endpoint)), funder_endpoint_(std::move(funder_endpoint)) {}

  Fetched fetch(const Identifier& id) override {
    std::string url;
    if (id.ns() == Namespace::ror) url = ror_endpoint_;
    else if (id.ns() == Namespace::fundref) url = funder_endpoint_;
    else throw Error(code::not_found, "no registry for namespace " + id.namespace_name());
    if (const auto p = url.find("{id}"); p != std::string::npos) url.replace(p, 4, id.value());
    const auto [status, body] = get_(url);
    if (status == 404) throw Error(code::not_found, id.namespace_name() + ":" + id.value() + " not found in registry");
    if (status != 200) throw Error(code::network, "HTTP " + std::to_string(status) + " from " + url);
    return id.ns() == Namespace::ror ? parse_ror_response(body) : parse_funder_response(body);
  }

 private:
  HttpGet get_;
  std::string ror_endpoint_;
  std::string funder_endpoint_;
};

inline constexpr std::string_view default_ror_endpoint = "https://api.ror.org/v2/organizations/{id}";
inline constexpr std::string_view default_funder_endpoint = "https://api.crossref.org/funders/{id}";

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

/// Append-only cache file, one line per lookup:
///   ns:value TAB status TAB fetched_at TAB name
/// Later lines win. Readers share the lock; writers take it exclusively.
class Cache {
 public:
  static constexpr std::int64_t default_ttl = 30 * 24 * 3600;

  struct Entry {
    Status status = Status::unknown;
    std::int64_t fetched_at = 0;
    std::string name;
  };

  /// In-memory only.
  explicit Cache(std::int64_t ttl_seconds = default_ttl) : ttl_(ttl_seconds) {}
  Cache(std::filesystem::path file, std::int64_t ttl_seconds) : file_(std::move(file)), ttl_(ttl_seconds) { load(); }

  static std::string key(const Identifier& id) { return id.namespace_name() + ":" + id.value(); }

  std::optional<Entry> get(const Identifier& id, std::int64_t now) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key(id));
    if (it == entries_.end() || now - it->second.fetched_at >= ttl_) return std::nullopt;
    return it->second;
  }

  void put(const Identifier& id, Entry e) {
    std::unique_lock lock(mutex_);
    for (char& c : e.name) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    if (!file_.empty()) {
      std::ofstream out(file_, std::ios::app | std::ios::binary);
      if (!out) throw Error(code::io, "cannot write registry cache " + file_.string());
      out << key(id) << '\t' << status_name(e.status) << '\t' << e.fetched_at << '\t' << e.name << '\n';
    }
    entries_[key(id)] = std::move(e);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  void load() {
    std::ifstream in(file_, std::ios::binary);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> parts;
      std::size_t start = 0;
      for (int i = 0; i < 3; ++i) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) break;
        parts.push_back(line.substr(start, tab - start));
        start = tab + 1;
      }
      if (parts.size() != 3) continue;  // torn or foreign line
      const auto status = status_from_name(parts[1]);
      std::int64_t at = 0;
      try {
        at = std::stoll(parts[2]);
      } catch (const std::exception&) {
        continue;
      }
      if (!status) continue;
      entries_[parts[0]] = Entry{*status, at, line.substr(start)};
    }
  }

  std::filesystem::path file_;
  std::int64_t ttl_ = default_ttl;
  std::map<std::string, Entry> entries_;
  mutable std::shared_mutex mutex_;
};

inline std::int64_t now_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

/// Looks `id` up through `client`, consulting `cache` first when given.
/// A disabled client yields status unknown without any call. Throws
/// Error(E-NETWORK) or Error(E-NOTFOUND) from the client.
inline RegistryRecord lookup(const Identifier& id, RegistryClient& client, Cache* cache = nullptr,
                             std::int64_t now = now_seconds()) {
  if (!client.enabled()) return RegistryRecord{id, {}, Status::unknown, std::nullopt};
  if (cache) {
    if (auto hit = cache->get(id, now)) return RegistryRecord{id, hit->name, hit->status, hit->fetched_at};
  }
  const Fetched f = client.fetch(id);
  if (cache) cache->put(id, Cache::Entry{f.status, now, f.name});
  return RegistryRecord{id, f.name, f.status, now};
}

/// Validates `value` for `ns` first; an invalid value is a precondition
/// failure (Error with the namespace's E-BAD* code) and never reaches the client.
inline RegistryRecord lookup(Namespace ns, std::string value, RegistryClient& client, Cache* cache = nullptr,
                             std::int64_t now = now_seconds()) {
  return lookup(Identifier::make(ns, std::move(value)), client, cache, now);
}

/// W-WITHDRAWN for withdrawn identifiers and W-NAMEMISMATCH when a display
/// name differs from the registry's beyond case and diacritics.
inline Diagnostics cross_check(const PaperMeta& pm, const std::vector<RegistryRecord>& records) {
  Diagnostics out;
  auto check = [&](const RegistryRecord& r, const std::string& shown, int line) {
    if (r.status == Status::withdrawn) {
      out.push_back(make_warning(code::withdrawn, Cache::key(r.identifier) + " is withdrawn in the registry", line));
    }
    if (r.status != Status::unknown && !r.canonical_name.empty() &&
        utf8::fold_for_compare(shown) != utf8::fold_for_compare(r.canonical_name)) {
      out.push_back(make_warning(code::name_mismatch,
                                 "'" + shown + "' differs from registry name '" + r.canonical_name + "' for " +
                                     Cache::key(r.identifier),
                                 line));
    }
  };
  for (const auto& r : records) {
    for (const auto& a : pm.affiliations) {
      if (a.ror && *a.ror == r.identifier) check(r, a.name, a.line.value);
    }
    for (const auto& f : pm.funders) {
      if (f.funder_id && *f.funder_id == r.identifier) check(r, f.name, f.line.value);
    }
  }
  return out;
}

/// Every ROR and funder identifier in `pm`, in order of appearance, without
/// repeats.
inline std::vector<Identifier> registry_ids(const PaperMeta& pm) {
  std::vector<Identifier> ids;
  auto add = [&](const std::optional<Identifier>& id) {
    if (!id) return;
    for (const auto& have : ids) {
      if (have == *id) return;
    }
    ids.push_back(*id);
  };
  for (const auto& a : pm.affiliations) add(a.ror);
  for (const auto& f : pm.funders) add(f.funder_id);
  return ids;
}

}  // namespace texmeta::registry

#endif
