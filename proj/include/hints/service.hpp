// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hints/certified.hpp"
#include "hints/historian.hpp"
#include "hints/transport.hpp"
#include "hints/verify.hpp"

namespace hints {

// --- request/response envelopes ------------------------------------------

// Versioned text envelopes. On the wire a message is one length-delimited
// frame: "HINTS/1 <payload-bytes>\n" followed by exactly that many bytes.
// The payload is canonical key/value text, one "key=value" per line, keys
// sorted (id and method/status first), values percent-escaped.

namespace wiredetail {

inline std::string escape(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    if (c == '%' || c == '\n' || c == '\r') {
      static const char* hexd = "0123456789ABCDEF";
      out += '%';
      out += hexd[(static_cast<unsigned char>(c) >> 4) & 0xf];
      out += hexd[static_cast<unsigned char>(c) & 0xf];
    } else {
      out += c;
    }
  }
  return out;
}

inline std::string unescape(std::string_view v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '%' && i + 2 < v.size()) {
      auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
      };
      int hi = nib(v[i + 1]), lo = nib(v[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>((hi << 4) | lo);
        i += 2;
        continue;
      }
    }
    out += v[i];
  }
  return out;
}

}  // namespace wiredetail

struct ApiRequest {
  std::string id;
  std::string method;
  std::map<std::string, std::string> params;

  std::string encode() const {
    std::string out;
    out += "id=" + wiredetail::escape(id) + "\n";
    out += "method=" + wiredetail::escape(method) + "\n";
    for (const auto& [k, v] : params)
      out += "param." + k + "=" + wiredetail::escape(v) + "\n";
    return out;
  }

  static ApiRequest decode(std::string_view payload) {
    ApiRequest r;
    size_t pos = 0;
    while (pos < payload.size()) {
      size_t nl = payload.find('\n', pos);
      if (nl == std::string_view::npos) nl = payload.size();
      std::string_view line = payload.substr(pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string_view::npos) fail(Errc::bad_request, "line without '='");
      std::string key(line.substr(0, eq));
      std::string value = wiredetail::unescape(line.substr(eq + 1));
      if (key == "id") r.id = value;
      else if (key == "method") r.method = value;
      else if (key.rfind("param.", 0) == 0) r.params[key.substr(6)] = value;
      else fail(Errc::bad_request, "unknown envelope key " + key);
    }
    if (r.method.empty()) fail(Errc::bad_request, "missing method");
    return r;
  }
};

struct ApiResponse {
  std::string id;  // echoes the request's correlation id
  std::string status = "ok";
  std::map<std::string, std::string> body;

  std::string encode() const {
    std::string out;
    out += "id=" + wiredetail::escape(id) + "\n";
    out += "status=" + wiredetail::escape(status) + "\n";
    for (const auto& [k, v] : body)
      out += k + "=" + wiredetail::escape(v) + "\n";
    return out;
  }

  static ApiResponse decode(std::string_view payload) {
    ApiResponse r;
    r.status.clear();
    size_t pos = 0;
    while (pos < payload.size()) {
      size_t nl = payload.find('\n', pos);
      if (nl == std::string_view::npos) nl = payload.size();
      std::string_view line = payload.substr(pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string_view::npos) fail(Errc::bad_request, "line without '='");
      std::string key(line.substr(0, eq));
      std::string value = wiredetail::unescape(line.substr(eq + 1));
      if (key == "id") r.id = value;
      else if (key == "status") r.status = value;
      else r.body[key] = value;
    }
    if (r.status.empty()) fail(Errc::bad_request, "missing status");
    return r;
  }
};

// --- configuration ------------------------------------------------------------

// Line-oriented "key = value" config. Unknown keys and bad values are
// startup errors, not surprises later.
struct ServiceConfig {
  std::string listen_address = "127.0.0.1:0";
  std::string storage_dir = "hints-data";
  std::string mode = "plain";  // plain | certified
  HistorianConfig historian;
  uint64_t anchor_period = 1024;
  std::string archive_file;       // certified mode: key archive bootstrap
  std::string archive_authority;  // hex of the authority public key
  std::string scheme = "ed25519";  // ed25519 | test-keyed-digest

  void validate() const {
    if (mode != "plain" && mode != "certified")
      fail(Errc::bad_request, "mode must be plain or certified: " + mode);
    if (scheme != "ed25519" && scheme != "test-keyed-digest")
      fail(Errc::bad_request, "unknown scheme " + scheme);
    if (anchor_period == 0) fail(Errc::bad_request, "anchor_period must be positive");
    historian.validate();
    if (mode == "certified" && archive_file.empty())
      fail(Errc::bad_request, "certified mode needs archive_file");
  }

  void set(const std::string& key, const std::string& value) {
    auto to_int = [&](const std::string& v) {
      try {
        return std::stoi(v);
      } catch (...) {
        fail(Errc::bad_request, "bad integer for " + key + ": " + v);
      }
    };
    if (key == "listen") listen_address = value;
    else if (key == "storage") storage_dir = value;
    else if (key == "mode") mode = value;
    else if (key == "link_ttl_months") historian.link_ttl.months = to_int(value);
    else if (key == "link_ttl_days") historian.link_ttl.days = to_int(value);
    else if (key == "challenge_timeout_days") historian.challenge_timeout = {0, to_int(value)};
    else if (key == "reconfirm_lead_days") historian.reconfirm_lead = {0, to_int(value)};
    else if (key == "anchor_period") anchor_period = static_cast<uint64_t>(to_int(value));
    else if (key == "loose") {
      if (value != "true" && value != "false")
        fail(Errc::bad_request, "loose must be true or false");
      historian.loose_resolution = value == "true";
    } else if (key == "archive_file") archive_file = value;
    else if (key == "archive_authority") archive_authority = value;
    else if (key == "scheme") scheme = value;
    else fail(Errc::bad_request, "unknown config key " + key);
  }

  static ServiceConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot read config " + path);
    ServiceConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = line.substr(0, line.find('#'));
      size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        fail(Errc::bad_request, "config line " + std::to_string(lineno) + ": no '='");
      auto trim = [](std::string v) {
        size_t x = v.find_first_not_of(" \t\r");
        size_t y = v.find_last_not_of(" \t\r");
        return x == std::string::npos ? std::string() : v.substr(x, y - x + 1);
      };
      cfg.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    cfg.apply_env();
    return cfg;
  }

  void apply_env() {
    if (const char* env = std::getenv("HINTS_STORAGE"); env && *env)
      storage_dir = env;
  }

  std::string save_text() const {
    std::string out;
    out += "listen = " + listen_address + "\n";
    out += "storage = " + storage_dir + "\n";
    out += "mode = " + mode + "\n";
    out += "link_ttl_months = " + std::to_string(historian.link_ttl.months) + "\n";
    out += "link_ttl_days = " + std::to_string(historian.link_ttl.days) + "\n";
    out += "challenge_timeout_days = " + std::to_string(historian.challenge_timeout.days) + "\n";
    out += "reconfirm_lead_days = " + std::to_string(historian.reconfirm_lead.days) + "\n";
    out += "anchor_period = " + std::to_string(anchor_period) + "\n";
    out += std::string("loose = ") + (historian.loose_resolution ? "true" : "false") + "\n";
    if (!archive_file.empty()) out += "archive_file = " + archive_file + "\n";
    if (!archive_authority.empty()) out += "archive_authority = " + archive_authority + "\n";
    out += "scheme = " + scheme + "\n";
    return out;
  }
};

// Challenges and severance notices leave the service as one line per
// message under <storage>/outbox/, standing in for a mail adapter.
class FileOutboxTransport final : public Transport {
 public:
  explicit FileOutboxTransport(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  bool send(const Message& m) override {
    std::string file = dir_ + "/" + m.to.to_string() + ".outbox";
    std::ofstream out(file, std::ios::app);
    if (!out) return false;
    if (m.kind == Message::Kind::challenge)
      out << m.sent_on.to_string() << " challenge " << m.challenge_id << " "
          << hex(m.nonce) << "\n";
    else
      out << m.sent_on.to_string() << " severance-notice\n";
    return true;
  }

 private:
  std::string dir_;
};

// --- the service ----------------------------------------------------------

// In-process API surface shared by the socket server and the CLI. All
// endpoints speak the envelope types above; the socket layer only frames
// them. Mutations authenticate with the account secret; resolution is
// public.
class Service {
 public:
  using ClockFn = std::function<Date()>;

  static Date system_today() {
    auto now = std::chrono::system_clock::now();
    auto days = std::chrono::floor<std::chrono::days>(now);
    return Date::from_days(static_cast<int32_t>(days.time_since_epoch().count()));
  }

  Service(ServiceConfig cfg, ClockFn clock = system_today)
      : cfg_(std::move(cfg)), clock_(std::move(clock)) {
    cfg_.validate();
    std::filesystem::create_directories(cfg_.storage_dir);
    if (cfg_.scheme == "ed25519") scheme_ = std::make_unique<Ed25519Scheme>();
    else scheme_ = std::make_unique<TestScheme>();

    if (cfg_.mode == "plain") {
      transport_ = std::make_unique<FileOutboxTransport>(cfg_.storage_dir + "/outbox");
      journal_ = std::make_unique<Journal>(Journal::open(cfg_.storage_dir + "/journal.log"));
      rng_ = std::make_unique<SystemRng>();
      historian_ = std::make_unique<Historian>(cfg_.historian, transport_.get(),
                                               rng_.get(), journal_.get());
    } else {
      PublicKey authority{from_hex(cfg_.archive_authority)};
      KeyArchive archive = KeyArchive::load(cfg_.archive_file, *scheme_, authority);
      cert_journal_ = std::make_unique<Journal>(Journal::open(cfg_.storage_dir + "/certs.log"));
      std::string anchor_path = cfg_.storage_dir + "/anchors.log";
      if (std::filesystem::exists(anchor_path))
        anchors_ = std::make_unique<AnchorLog>(AnchorLog::open(anchor_path));
      else
        // Epoch genesis: "the chain was empty then" holds for any later
        // request date, including back-dated scenario runs.
        anchors_ = std::make_unique<AnchorLog>(
            AnchorLog::create(anchor_path, Date::from_days(0)));
      certified_ = std::make_unique<CertifiedHistorian>(
          *scheme_, std::move(archive), CertifiedConfig{cfg_.anchor_period, true},
          cert_journal_.get(), anchors_.get());
    }
  }

  const ServiceConfig& config() const { return cfg_; }
  Historian* historian() { return historian_.get(); }
  CertifiedHistorian* certified() { return certified_.get(); }

  ApiResponse handle(const ApiRequest& req) {
    ApiResponse resp;
    resp.id = req.id;
    try {
      dispatch(req, resp);
    } catch (const Error& e) {
      resp.body.clear();
      switch (e.code()) {
        case Errc::malformed_name:
        case Errc::bad_date:
        case Errc::bad_request:
          resp.status = "bad-request";
          break;
        case Errc::unauthorized:
          resp.status = "unauthorized";
          break;
        case Errc::unknown_challenge:
          resp.status = "not-found";
          break;
        default:
          resp.status = "error";
          break;
      }
      resp.body["error"] = std::string(to_string(e.code()));
      resp.body["detail"] = e.what();
    }
    return resp;
  }

  // Frame codec used by both the socket server and clients.
  static std::string frame(const std::string& payload) {
    return "HINTS/1 " + std::to_string(payload.size()) + "\n" + payload;
  }

 private:
  Date now_for(const ApiRequest& req) const {
    auto it = req.params.find("at");
    if (it != req.params.end()) return Date::parse(it->second);
    return clock_();
  }

  static const std::string& need(const ApiRequest& req, const std::string& key) {
    auto it = req.params.find(key);
    if (it == req.params.end()) fail(Errc::bad_request, "missing parameter " + key);
    return it->second;
  }

  AccountId authed_account(const ApiRequest& req) const {
    AccountId id = 0;
    try {
      id = std::stoull(need(req, "account"));
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::bad_request, "bad account id");
    }
    if (!historian_->authenticate(id, need(req, "secret")))
      fail(Errc::unauthorized, "account authentication failed");
    return id;
  }

  void require_mode(const char* mode) const {
    if (cfg_.mode != mode)
      fail(Errc::bad_request, std::string("endpoint requires ") + mode + " mode");
  }

  void dispatch(const ApiRequest& req, ApiResponse& resp) {
    const std::string& m = req.method;
    if (m == "create-account") {
      require_mode("plain");
      std::string display;
      if (auto it = req.params.find("display"); it != req.params.end())
        display = it->second;
      AccountId id = historian_->create_account(need(req, "secret"), display);
      resp.body["account"] = std::to_string(id);
    } else if (m == "request-link") {
      require_mode("plain");
      AccountId id = authed_account(req);
      uint64_t ch = historian_->request_link(id, PrimaryName::parse(need(req, "name")),
                                             now_for(req));
      resp.body["challenge"] = std::to_string(ch);
    } else if (m == "confirm-link") {
      require_mode("plain");
      authed_account(req);
      uint64_t ch = 0;
      try {
        ch = std::stoull(need(req, "challenge"));
      } catch (const Error&) {
        throw;
      } catch (...) {
        fail(Errc::bad_request, "bad challenge id");
      }
      auto rec = historian_->confirm_link(ch, from_hex(need(req, "nonce")), now_for(req));
      if (!rec) {
        resp.body["result"] = "rejected";
      } else {
        resp.body["result"] = "confirmed";
        resp.body["name"] = rec->name.to_string();
        resp.body["start"] = rec->start.to_string();
        resp.body["end"] = rec->end.to_string();
        resp.body["expiration"] = rec->expiration.to_string();
      }
    } else if (m == "sever-link") {
      require_mode("plain");
      AccountId id = authed_account(req);
      historian_->sever_link(id, PrimaryName::parse(need(req, "name")), now_for(req));
      resp.body["result"] = "severed";
    } else if (m == "resolve") {
      require_mode("plain");
      HistoricName h = parse_historic_name(need(req, "name"));
      resp.body["result"] = historian_->resolve(h, now_for(req)).to_line();
    } else if (m == "list-periods") {
      require_mode("plain");
      auto periods = historian_->list_association_periods(
          PrimaryName::parse(need(req, "name")), now_for(req));
      resp.body["count"] = std::to_string(periods.size());
      for (size_t i = 0; i < periods.size(); ++i)
        resp.body["period." + std::to_string(i)] =
            "person#" + std::to_string(periods[i].person_ordinal) + " " +
            periods[i].period.first.to_string() + ".." +
            periods[i].period.last.to_string();
    } else if (m == "ingest-cert") {
      require_mode("certified");
      Certificate cert = decode_certificate(base64_decode(need(req, "cert")));
      uint64_t seq = certified_->ingest(cert, now_for(req));
      resp.body["seq"] = std::to_string(seq);
    } else if (m == "certified-resolve") {
      require_mode("certified");
      HistoricName h = parse_historic_name(need(req, "name"));
      auto bundles = certified_->certified_resolve(h, now_for(req));
      resp.body["result"] = CertifiedHistorian::summarize(bundles).to_line();
      resp.body["count"] = std::to_string(bundles.size());
      for (size_t i = 0; i < bundles.size(); ++i)
        resp.body["proof." + std::to_string(i)] = base64_encode(bundles[i].encode());
    } else if (m == "get-anchors") {
      require_mode("certified");
      std::string text;
      for (const Anchor& a : certified_->anchors().anchors())
        text += std::to_string(a.seq) + " " + a.entry_digest.hex() + " " +
                a.published_on.to_string() + "\n";
      resp.body["anchors"] = text;
    } else if (m == "get-commitments") {
      require_mode("certified");
      Commitments c = certified_->commitments();
      resp.body["name-index"] = c.name_index.root.hex() + " " +
                                std::to_string(c.name_index.count);
      resp.body["person-index"] = c.person_index.root.hex() + " " +
                                  std::to_string(c.person_index.count);
    } else {
      resp.status = "unknown-method";
      resp.body["error"] = "unknown method " + m;
      return;
    }
    resp.status = "ok";
  }

  ServiceConfig cfg_;
  ClockFn clock_;
  std::unique_ptr<SignatureScheme> scheme_;
  std::unique_ptr<FileOutboxTransport> transport_;
  std::unique_ptr<Journal> journal_;
  std::unique_ptr<Rng> rng_;
  std::unique_ptr<Historian> historian_;
  std::unique_ptr<Journal> cert_journal_;
  std::unique_ptr<AnchorLog> anchors_;
  std::unique_ptr<CertifiedHistorian> certified_;
};

}  // namespace hints
