// SPDX-License-Identifier: Apache-2.0
//
// hints — command-line front end for the historic name-trail service.
//
// Local subcommands (account, link, resolve, periods, cert, sim) operate
// directly on a storage directory through the same in-process service the
// socket server exposes; `serve` runs that service on a TCP port.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

#include "hints/hints.hpp"

namespace {

using namespace hints;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct GlobalOpts {
  std::string storage = "hints-data";
  std::string config_file;
  std::string mode = "plain";
  std::string listen = "127.0.0.1:7833";
  std::string scheme = "ed25519";
  bool loose = false;
  bool porcelain = false;
  std::string at;  // override "today" for deterministic runs
};

ServiceConfig build_config(const GlobalOpts& g, const CLI::App& app) {
  ServiceConfig cfg;
  if (!g.config_file.empty()) cfg = ServiceConfig::load(g.config_file);
  else cfg.apply_env();
  // explicit flags win over config file and environment
  if (app.count("--storage")) cfg.storage_dir = g.storage;
  else if (g.config_file.empty() && !std::getenv("HINTS_STORAGE"))
    cfg.storage_dir = g.storage;
  if (app.count("--mode")) cfg.mode = g.mode;
  if (app.count("--listen")) cfg.listen_address = g.listen;
  if (app.count("--scheme")) cfg.scheme = g.scheme;
  if (g.loose) cfg.historian.loose_resolution = true;
  return cfg;
}

Service open_service(const GlobalOpts& g, const CLI::App& app) {
  return Service(build_config(g, app));
}

ApiRequest request(const GlobalOpts& g, std::string method,
                   std::map<std::string, std::string> params) {
  static uint64_t counter = 0;
  if (!g.at.empty()) params["at"] = g.at;
  return ApiRequest{"cli-" + std::to_string(++counter), std::move(method),
                    std::move(params)};
}

// Emit a response: porcelain mode prints one canonical key=value record
// per line; otherwise a compact human form.
int emit(const GlobalOpts& g, const ApiResponse& resp,
         const std::string& headline_key = "") {
  if (resp.status != "ok") {
    std::cerr << "error: " << resp.status;
    if (resp.body.count("error")) std::cerr << " " << resp.body.at("error");
    if (resp.body.count("detail")) std::cerr << ": " << resp.body.at("detail");
    std::cerr << "\n";
    return resp.status == "bad-request" || resp.status == "unknown-method" ? 2 : 1;
  }
  if (g.porcelain) {
    for (const auto& [k, v] : resp.body)
      std::cout << k << "=" << wiredetail::escape(v) << "\n";
  } else if (!headline_key.empty() && resp.body.count(headline_key)) {
    std::cout << resp.body.at(headline_key) << "\n";
  } else {
    for (const auto& [k, v] : resp.body) std::cout << k << ": " << v << "\n";
  }
  return 0;
}

std::unique_ptr<SignatureScheme> make_scheme(const std::string& name) {
  if (name == "ed25519") return std::make_unique<Ed25519Scheme>();
  if (name == "test-keyed-digest" || name == "test")
    return std::make_unique<TestScheme>();
  fail(Errc::bad_request, "unknown scheme " + name);
}

void print_certificate(const Certificate& cert) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IdentityCertificate>) {
          std::cout << "kind: identity\nissuer: " << c.issuer
                    << "\nsubject: " << c.subject << "\nkey: " << c.key.display()
                    << "\nstart: " << c.start.to_string()
                    << "\nend: " << c.end.to_string() << "\n";
        } else if constexpr (std::is_same_v<T, RevocationCertificate>) {
          std::cout << "kind: revocation\nissuer: " << c.issuer
                    << "\nsubject: " << c.subject << "\nkey: " << c.key.display()
                    << "\nstart: " << c.start.to_string() << "\n";
        } else if constexpr (std::is_same_v<T, LinkCertificate>) {
          std::cout << "kind: link\nname: " << c.name.to_string()
                    << "\nperson-key: " << c.person_key.display()
                    << "\nstart: " << c.start.to_string()
                    << "\nend: " << c.end.to_string() << "\n";
        } else if constexpr (std::is_same_v<T, SeveranceCertificate>) {
          std::cout << "kind: severance\nname: " << c.name.to_string()
                    << "\nperson-key: " << c.person_key.display()
                    << "\ntime: " << c.time.to_string() << "\n";
        } else {
          std::cout << "kind: delegation\nissuer: " << c.issuer.display()
                    << "\ndelegate: " << c.delegate.display()
                    << "\ntime: " << c.time.to_string() << "\n";
        }
        std::cout << "nonce: " << hex(c.nonce) << "\n";
      },
      cert);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hints — historic name-trail service"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--storage,-s", g.storage, "storage directory");
  app.add_option("--config", g.config_file, "config file (key = value lines)");
  app.add_option("--mode", g.mode, "plain or certified");
  app.add_option("--listen", g.listen, "listen address for serve (host:port)");
  app.add_option("--scheme", g.scheme, "signature scheme (ed25519, test-keyed-digest)");
  app.add_flag("--loose", g.loose, "literal single-record resolution semantics");
  app.add_flag("--porcelain", g.porcelain, "machine-readable output, one record per line");
  app.add_option("--at", g.at, "act as of this date (YYYY-MM-DD) instead of today");

  // account new
  auto* account = app.add_subcommand("account", "account management");
  auto* account_new = account->add_subcommand("new", "create a mobile person account");
  std::string secret, display;
  account_new->add_option("--secret", secret, "login secret")->required();
  account_new->add_option("--display", display, "private display hint");

  // link request|confirm|sever
  auto* link = app.add_subcommand("link", "linking operations");
  auto* link_request = link->add_subcommand("request", "ask to link a name");
  std::string lr_account, lr_name, lr_secret;
  link_request->add_option("account", lr_account)->required();
  link_request->add_option("name", lr_name)->required();
  link_request->add_option("--secret", lr_secret)->required();
  auto* link_confirm = link->add_subcommand("confirm", "answer a pending challenge");
  std::string lc_challenge, lc_nonce, lc_account, lc_secret;
  link_confirm->add_option("challenge", lc_challenge)->required();
  link_confirm->add_option("nonce", lc_nonce, "nonce from the challenged mailbox")->required();
  link_confirm->add_option("--account", lc_account)->required();
  link_confirm->add_option("--secret", lc_secret)->required();
  auto* link_sever = link->add_subcommand("sever", "sever a linked name");
  std::string ls_account, ls_name, ls_secret;
  link_sever->add_option("account", ls_account)->required();
  link_sever->add_option("name", ls_name)->required();
  link_sever->add_option("--secret", ls_secret)->required();

  // resolve / periods
  auto* resolve = app.add_subcommand("resolve", "resolve a historic name");
  std::string resolve_name, save_proof_prefix;
  resolve->add_option("name", resolve_name, "local@ns?YYYY[-MM[-DD]]")->required();
  resolve->add_option("--save-proof", save_proof_prefix,
                      "certified mode: write proof bundles to <prefix>.N.proof");
  auto* periods = app.add_subcommand("periods", "list association periods of a name");
  std::string periods_name;
  periods->add_option("name", periods_name)->required();

  // sim run
  auto* sim = app.add_subcommand("sim", "simulated provider world");
  auto* sim_run = sim->add_subcommand("run", "run a scenario script");
  std::string script_path, sim_journal;
  sim_run->add_option("script", script_path, "scenario script file")->required();
  sim_run->add_option("--journal", sim_journal, "write the historian journal here");

  // cert ingest|show
  auto* cert = app.add_subcommand("cert", "certificate operations");
  auto* cert_ingest = cert->add_subcommand("ingest", "ingest a certificate file");
  std::string ci_file;
  cert_ingest->add_option("file", ci_file)->required();
  auto* cert_show = cert->add_subcommand("show", "decode a certificate file");
  std::string cs_file;
  cert_show->add_option("file", cs_file)->required();

  // proof verify
  auto* proof = app.add_subcommand("proof", "resolution proof operations");
  auto* proof_verify = proof->add_subcommand("verify", "verify a proof bundle offline");
  std::string pv_file, pv_anchors, pv_keys, pv_commitments, pv_authority;
  proof_verify->add_option("file", pv_file)->required();
  proof_verify->add_option("--anchors", pv_anchors, "anchor log file")->required();
  proof_verify->add_option("--keys", pv_keys, "key archive bootstrap file")->required();
  proof_verify->add_option("--commitments", pv_commitments, "published commitments file")
      ->required();
  proof_verify->add_option("--authority", pv_authority,
                           "hex public key that signed the archive")
      ->required();

  auto* serve = app.add_subcommand("serve", "run the socket service");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (account_new->parsed()) {
      Service svc = open_service(g, app);
      std::map<std::string, std::string> params{{"secret", secret}};
      if (!display.empty()) params["display"] = display;
      return emit(g, svc.handle(request(g, "create-account", params)), "account");
    }
    if (link_request->parsed()) {
      Service svc = open_service(g, app);
      return emit(g,
                  svc.handle(request(g, "request-link",
                                     {{"account", lr_account},
                                      {"secret", lr_secret},
                                      {"name", lr_name}})),
                  "challenge");
    }
    if (link_confirm->parsed()) {
      Service svc = open_service(g, app);
      return emit(g,
                  svc.handle(request(g, "confirm-link",
                                     {{"account", lc_account},
                                      {"secret", lc_secret},
                                      {"challenge", lc_challenge},
                                      {"nonce", lc_nonce}})),
                  "result");
    }
    if (link_sever->parsed()) {
      Service svc = open_service(g, app);
      return emit(g,
                  svc.handle(request(g, "sever-link",
                                     {{"account", ls_account},
                                      {"secret", ls_secret},
                                      {"name", ls_name}})),
                  "result");
    }
    if (resolve->parsed()) {
      // grammar check first so usage errors exit 2 with a hint
      try {
        parse_historic_name(resolve_name);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what()
                  << "\nexpected local@namespace?YYYY[-MM[-DD]]\n";
        return 2;
      }
      ServiceConfig cfg = build_config(g, app);
      Service svc(cfg);
      const char* method = cfg.mode == "certified" ? "certified-resolve" : "resolve";
      ApiResponse r = svc.handle(request(g, method, {{"name", resolve_name}}));
      if (r.status == "ok" && !save_proof_prefix.empty()) {
        for (size_t i = 0;; ++i) {
          auto it = r.body.find("proof." + std::to_string(i));
          if (it == r.body.end()) break;
          ResolutionProof proof = ResolutionProof::decode(base64_decode(it->second));
          proof.save(save_proof_prefix + "." + std::to_string(i) + ".proof");
        }
        if (svc.certified())
          svc.certified()->commitments().save(save_proof_prefix + ".commitments");
      }
      if (r.status == "ok" && !g.porcelain &&
          r.body.at("result").rfind("resolved ", 0) == 0) {
        std::cout << r.body.at("result").substr(9) << "\n";
        return 0;
      }
      return emit(g, r, "result");
    }
    if (periods->parsed()) {
      Service svc = open_service(g, app);
      ApiResponse r = svc.handle(request(g, "list-periods", {{"name", periods_name}}));
      if (r.status == "ok" && !g.porcelain) {
        for (const auto& [k, v] : r.body)
          if (k.rfind("period.", 0) == 0) std::cout << v << "\n";
        return 0;
      }
      return emit(g, r);
    }
    if (sim_run->parsed()) {
      std::ifstream in(script_path);
      if (!in) {
        std::cerr << "error: cannot read " << script_path << "\n";
        return 1;
      }
      std::unique_ptr<Journal> journal;
      if (!sim_journal.empty()) {
        std::remove(sim_journal.c_str());
        journal = std::make_unique<Journal>(Journal::open(sim_journal));
      }
      ServiceConfig cfg = build_config(g, app);
      ScenarioRunner runner(cfg.historian, journal.get());
      for (const std::string& line : runner.run(in)) std::cout << line << "\n";
      return 0;
    }
    if (cert_ingest->parsed()) {
      Certificate c = load_certificate(ci_file);
      ServiceConfig cfg = build_config(g, app);
      cfg.mode = "certified";
      Service svc(cfg);
      return emit(g,
                  svc.handle(request(g, "ingest-cert",
                                     {{"cert", base64_encode(encode_certificate(c))}})),
                  "seq");
    }
    if (cert_show->parsed()) {
      print_certificate(load_certificate(cs_file));
      return 0;
    }
    if (proof_verify->parsed()) {
      auto scheme = make_scheme(g.scheme);
      VerifyOutcome v = verify_resolution_files(pv_file, pv_anchors, pv_keys,
                                                pv_commitments, *scheme,
                                                PublicKey{from_hex(pv_authority)});
      if (v.accepted) {
        std::cout << "accept\n";
        return 0;
      }
      std::cerr << "reject(" << v.reason << ") " << v.detail << "\n";
      return 1;
    }
    if (serve->parsed()) {
      ServiceConfig cfg = build_config(g, app);
      Service svc(cfg);
      SocketServer server(svc);
      server.start(cfg.listen_address);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "hints " << cfg.mode << " service on port " << server.port()
                << ", storage " << cfg.storage_dir << "\n";
      while (!g_stop) {
        struct timespec ts{0, 100000000};
        nanosleep(&ts, nullptr);
      }
      server.stop();
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "no subcommand\n";
  return 2;
}
