// texmeta: validate, emit and inspect LaTeX .meta files.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>

#include "texmeta/texmeta.hpp"

namespace {

std::pair<int, std::string> http_get(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(origin);
  client.set_connection_timeout(10);
  client.set_read_timeout(20);
  client.set_follow_location(true);
  auto res = client.Get(path, {{"Accept", "application/json"}});
  if (!res) throw texmeta::Error(texmeta::code::network, "GET " + url + ": " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

std::int64_t default_timestamp() {
  if (const char* s = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      return std::stoll(s);
    } catch (const std::exception&) {
    }
  }
  return texmeta::registry::now_seconds();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace texmeta;

  CLI::App app{"Validate LaTeX .meta files and emit JSON, Crossref, JATS and XMP metadata"};
  app.require_subcommand(1);

  std::string meta_path;
  std::string config_path;
  std::string format_name;
  std::string out_path;
  std::string doi_from;
  bool all = false;
  bool strict = false;
  bool online = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("meta", meta_path, "Path to the .meta file")->required();
    cmd->add_option("--config", config_path, "Journal configuration file");
  };
  auto* validate = app.add_subcommand("validate", "Check a .meta file and report diagnostics");
  add_common(validate);
  validate->add_flag("--strict", strict, "Treat warnings as errors");
  validate->add_flag("--online", online, "Cross-check ROR and funder identifiers against their registries");

  auto* emit = app.add_subcommand("emit", "Write metadata in one or all output formats");
  add_common(emit);
  emit->add_option("--format", format_name, "json, crossref, jats or xmp")
      ->check(CLI::IsMember({"json", "crossref", "jats", "xmp"}));
  emit->add_flag("--all", all, "Write all four formats as sibling files");
  emit->add_option("--out", out_path, "Output file (or base path with --all)");
  emit->add_option("--doi-from", doi_from, "Derive the DOI as <prefix>:<paperid>");
  emit->add_flag("--strict", strict, "Treat warnings as errors");
  emit->add_flag("--online", online, "Cross-check ROR and funder identifiers against their registries");

  auto* inspect = app.add_subcommand("inspect", "Print a human-readable summary");
  add_common(inspect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::exit_failure;
  }

  CliConfig cfg;
  if (!config_path.empty()) {
    const auto diags = load_config(config_path, cfg);
    cli::print(std::cerr, diags);
    if (has_errors(diags)) return cli::exit_failure;
  }
  cfg.strict = strict;
  cfg.online = online;
  if (!doi_from.empty()) cfg.doi_from = doi_from;
  if (!cfg.timestamp_set) cfg.emit.timestamp = default_timestamp();

  std::unique_ptr<registry::RegistryClient> client;
  if (online) {
    client = std::make_unique<registry::JsonRegistryClient>(http_get, cfg.ror_endpoint, cfg.funder_endpoint);
  }

  if (validate->parsed()) return cli::cmd_validate(meta_path, cfg, std::cerr, client.get());
  if (inspect->parsed()) return cli::cmd_inspect(meta_path, cfg, std::cout, std::cerr);

  cli::EmitRequest req;
  req.all = all;
  if (!format_name.empty()) req.format = cli::format_from_name(format_name);
  if (!out_path.empty()) req.out = out_path;
  if (!all && !req.format) {
    std::cerr << "error:E-CONFIG:0:emit needs --format or --all\n";
    return cli::exit_failure;
  }
  return cli::cmd_emit(meta_path, req, cfg, std::cout, std::cerr, client.get());
}
