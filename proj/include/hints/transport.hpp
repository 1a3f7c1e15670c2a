// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hints/historian.hpp"

namespace hints {

// Deterministic simulated world of name-space providers, mailboxes, and a
// virtual clock. The world owns a historian wired to itself as transport;
// the historian learns about provider-side revocations only the way the
// model allows — through challenges that stop being answered.

struct ProviderPolicy {
  std::string namespace_part;
  int reassignment_cooldown_days = 0;
  std::optional<int> assignment_duration_days;  // nullopt = unlimited
};

struct SimMailbox {
  PrimaryName address;
  std::optional<std::string> holder;  // sim person id
  std::vector<Message> inbox;         // delivery order preserved
  std::optional<Date> assigned_on;
  std::optional<Date> last_cleared;   // for the reassignment cooldown
};

struct WorldEvent {
  Date on;
  std::string what;

  bool operator==(const WorldEvent&) const = default;
};

class SimWorld final : public Transport {
 public:
  explicit SimWorld(HistorianConfig cfg = {}, uint64_t seed = 1,
                    Journal* journal = nullptr)
      : rng_(seed), historian_(cfg, this, &rng_, journal) {}

  // --- Transport ------------------------------------------------------------

  bool send(const Message& m) override {
    auto pit = providers_.find(m.to.namespace_part);
    if (pit == providers_.end()) return false;
    mailbox_for(m.to).inbox.push_back(m);
    return true;
  }

  // --- world setup -----------------------------------------------------------

  void add_provider(ProviderPolicy p) {
    providers_.emplace(p.namespace_part, p);
  }
  void add_person(const std::string& id) { persons_.insert(id); }

  AccountId create_account(const std::string& person, std::string_view secret) {
    require_person(person);
    AccountId id = historian_.create_account(secret);
    owner_of_account_[id] = person;
    return id;
  }

  // --- provider actions -------------------------------------------------------

  // Assignment is provider-controlled: the mailbox must be unheld and the
  // provider's cooldown since the last clearing must have elapsed.
  void provider_assign(const std::string& ns, const std::string& local,
                       const std::string& person) {
    require_person(person);
    auto pit = providers_.find(ns);
    if (pit == providers_.end()) fail(Errc::bad_request, "no provider for " + ns);
    SimMailbox& mb = mailbox_for(PrimaryName(local, ns));
    if (mb.holder) fail(Errc::already_held, mb.address.to_string());
    if (mb.last_cleared) {
      Date earliest = mb.last_cleared->plus_days(pit->second.reassignment_cooldown_days);
      if (today_ < earliest)
        fail(Errc::cooldown_violation,
             mb.address.to_string() + " reassignable from " + earliest.to_string());
    }
    mb.holder = person;
    mb.assigned_on = today_;
    events_.push_back({today_, "assign " + mb.address.to_string() + " -> " + person});
  }

  // Revocation silently cuts the person's access; the historian is not
  // told. Future challenges land in the mailbox unread by the old holder.
  void provider_revoke(const std::string& ns, const std::string& local) {
    SimMailbox& mb = mailbox_for(PrimaryName(local, ns));
    if (mb.holder) {
      events_.push_back({today_, "revoke " + mb.address.to_string()});
      mb.holder.reset();
      mb.last_cleared = today_;
    }
  }

  // --- person actions ------------------------------------------------------

  uint64_t request_link(AccountId account, const PrimaryName& name) {
    return historian_.request_link(account, name, today_);
  }

  // The person answers the most recent unanswered challenge in the
  // mailbox. The simulation insists the responder currently holds the
  // mailbox (otherwise the nonce never reached them) and owns the account
  // the challenge belongs to (responses travel through the authenticated
  // account).
  std::optional<AssociationRecord> confirm_latest(const std::string& person,
                                                  const PrimaryName& name) {
    require_person(person);
    auto mit = mailboxes_.find(name.to_string());
    if (mit == mailboxes_.end()) return std::nullopt;
    SimMailbox& mb = mit->second;
    if (mb.holder != person) return std::nullopt;
    for (auto it = mb.inbox.rbegin(); it != mb.inbox.rend(); ++it) {
      if (it->kind != Message::Kind::challenge) continue;
      if (answered_.count(it->challenge_id)) continue;
      auto owner = owner_of_account_.end();
      for (const Challenge& ch : historian_.pending_challenges()) {
        if (ch.id == it->challenge_id) {
          owner = owner_of_account_.find(ch.account);
          break;
        }
      }
      if (owner == owner_of_account_.end() || owner->second != person)
        return std::nullopt;  // nonce in hand, but not their account
      try {
        auto rec = historian_.confirm_link(it->challenge_id, it->nonce, today_);
        if (rec) answered_.insert(it->challenge_id);
        return rec;
      } catch (const Error&) {
        return std::nullopt;  // stale or vanished challenge
      }
    }
    return std::nullopt;
  }

  void sever(AccountId account, const PrimaryName& name) {
    historian_.sever_link(account, name, today_);
  }

  // --- the clock ---------------------------------------------------------------

  Date today() const { return today_; }
  void set_start_date(Date d) { today_ = d; }

  // Step the virtual clock one day at a time, firing challenge timeouts,
  // provider auto-revocations, and historian sweeps in deterministic order.
  std::vector<WorldEvent> advance_clock(Date to) {
    if (to < today_) fail(Errc::clock_regression, to.to_string());
    std::vector<WorldEvent> fired;
    while (today_ < to) {
      today_ = today_.plus_days(1);
      for (uint64_t id : historian_.expire_challenges(today_))
        fired.push_back({today_, "challenge-timeout #" + std::to_string(id)});
      for (auto& [key, mb] : mailboxes_) {
        if (!mb.holder || !mb.assigned_on) continue;
        auto pit = providers_.find(mb.address.namespace_part);
        if (pit == providers_.end() || !pit->second.assignment_duration_days)
          continue;
        if (today_ >= mb.assigned_on->plus_days(*pit->second.assignment_duration_days)) {
          mb.holder.reset();
          mb.last_cleared = today_;
          fired.push_back({today_, "assignment-expired " + mb.address.to_string()});
        }
      }
      for (const SweepAction& a : historian_.reestablish_sweep(today_)) {
        if (a.kind == SweepAction::Kind::challenge_issued)
          fired.push_back({today_, "reestablish-challenge " + a.name.to_string() +
                                       (a.delivered ? "" : " (undeliverable)")});
        else
          fired.push_back({today_, "archived " + a.name.to_string() + " rid=" +
                                       std::to_string(a.rid)});
      }
    }
    events_.insert(events_.end(), fired.begin(), fired.end());
    return fired;
  }

  Historian& historian() { return historian_; }
  const Historian& historian() const { return historian_; }
  const std::vector<WorldEvent>& events() const { return events_; }
  const SimMailbox* mailbox(const PrimaryName& n) const {
    auto it = mailboxes_.find(n.to_string());
    return it == mailboxes_.end() ? nullptr : &it->second;
  }

 private:
  void require_person(const std::string& id) const {
    if (!persons_.count(id)) fail(Errc::bad_request, "unknown person " + id);
  }

  SimMailbox& mailbox_for(const PrimaryName& n) {
    auto [it, fresh] = mailboxes_.try_emplace(n.to_string());
    if (fresh) it->second.address = n;
    return it->second;
  }

  SeededRng rng_;
  Historian historian_;
  Date today_ = Date::from_ymd(1970, 1, 1);
  std::map<std::string, ProviderPolicy> providers_;
  std::map<std::string, SimMailbox> mailboxes_;
  std::set<std::string> persons_;
  std::map<AccountId, std::string> owner_of_account_;
  std::set<uint64_t> answered_;
  std::vector<WorldEvent> events_;
};

// --- scenario scripts ----------------------------------------------------------

// Line-oriented scenario language driving a SimWorld. One command per
// line; '#' starts a comment. Account aliases keep scripts readable; the
// historian itself only ever sees opaque ids.
//
//   seed <n>
//   provider <namespace> [cooldown=<days>] [duration=<days>]
//   person <id>
//   account <person> <alias> [secret=<text>]
//   start <YYYY-MM-DD>
//   advance <YYYY-MM-DD>
//   assign <local@ns> <person>
//   revoke <local@ns>
//   link <alias> <local@ns>
//   confirm <person> <local@ns>
//   sever <alias> <local@ns>
//   resolve <historic-name>
//   periods <local@ns>
class ScenarioRunner {
 public:
  explicit ScenarioRunner(HistorianConfig cfg = {}, Journal* journal = nullptr)
      : cfg_(cfg), journal_(journal) {}

  // Runs the whole script; returns one output line per effectful command.
  std::vector<std::string> run(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string trimmed = strip_comment(line);
      if (trimmed.empty()) continue;
      try {
        exec(trimmed, out);
      } catch (const Error& e) {
        fail(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return out;
  }

  std::vector<std::string> run_text(const std::string& text) {
    std::istringstream in(text);
    return run(in);
  }

  SimWorld& world() {
    if (!world_) fail(Errc::bad_request, "script never seeded a world");
    return *world_;
  }

 private:
  static std::string strip_comment(const std::string& line) {
    std::string s = line.substr(0, line.find('#'));
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
  }

  static std::optional<int> keyed_int(const std::vector<std::string>& words,
                                      const std::string& key) {
    for (const auto& w : words) {
      if (w.rfind(key + "=", 0) == 0) return std::stoi(w.substr(key.size() + 1));
    }
    return std::nullopt;
  }

  SimWorld& ensure_world() {
    if (!world_) world_ = std::make_unique<SimWorld>(cfg_, seed_, journal_);
    return *world_;
  }

  AccountId alias(const std::string& name) const {
    auto it = aliases_.find(name);
    if (it == aliases_.end()) fail(Errc::bad_request, "unknown account alias " + name);
    return it->second;
  }

  void exec(const std::string& line, std::vector<std::string>& out) {
    std::vector<std::string> w = split(line);
    const std::string& cmd = w[0];
    auto need = [&](size_t n) {
      if (w.size() < n + 1) fail(Errc::bad_request, "usage: " + cmd + " ...");
    };

    if (cmd == "seed") {
      need(1);
      if (world_) fail(Errc::bad_request, "seed must precede other commands");
      seed_ = std::stoull(w[1]);
    } else if (cmd == "provider") {
      need(1);
      ProviderPolicy p;
      p.namespace_part = w[1];
      if (auto c = keyed_int(w, "cooldown")) p.reassignment_cooldown_days = *c;
      if (auto d = keyed_int(w, "duration")) p.assignment_duration_days = *d;
      ensure_world().add_provider(p);
    } else if (cmd == "person") {
      need(1);
      ensure_world().add_person(w[1]);
    } else if (cmd == "account") {
      need(2);
      std::string secret = "secret-" + w[2];
      for (const auto& word : w)
        if (word.rfind("secret=", 0) == 0) secret = word.substr(7);
      AccountId id = ensure_world().create_account(w[1], secret);
      aliases_[w[2]] = id;
      out.push_back("account " + w[2] + " ok");
    } else if (cmd == "start") {
      need(1);
      ensure_world().set_start_date(Date::parse(w[1]));
    } else if (cmd == "advance") {
      need(1);
      auto fired = ensure_world().advance_clock(Date::parse(w[1]));
      for (const auto& ev : fired)
        out.push_back(ev.on.to_string() + " " + ev.what);
    } else if (cmd == "assign") {
      need(2);
      PrimaryName n = PrimaryName::parse(w[1]);
      ensure_world().provider_assign(n.namespace_part, n.local, w[2]);
      out.push_back("assign " + n.to_string() + " " + w[2]);
    } else if (cmd == "revoke") {
      need(1);
      PrimaryName n = PrimaryName::parse(w[1]);
      ensure_world().provider_revoke(n.namespace_part, n.local);
      out.push_back("revoke " + n.to_string());
    } else if (cmd == "link") {
      need(2);
      ensure_world().request_link(alias(w[1]), PrimaryName::parse(w[2]));
      out.push_back("link-requested " + w[2]);
    } else if (cmd == "confirm") {
      need(2);
      auto rec = ensure_world().confirm_latest(w[1], PrimaryName::parse(w[2]));
      out.push_back(rec ? "confirmed " + w[2] + " start=" + rec->start.to_string() +
                              " end=" + rec->end.to_string() +
                              " expiration=" + rec->expiration.to_string()
                        : "confirm-failed " + w[2]);
    } else if (cmd == "sever") {
      need(2);
      ensure_world().sever(alias(w[1]), PrimaryName::parse(w[2]));
      out.push_back("severed " + w[2]);
    } else if (cmd == "resolve") {
      need(1);
      HistoricName h = parse_historic_name(w[1]);
      ResolutionResult r = ensure_world().historian().resolve(h, ensure_world().today());
      out.push_back("resolve " + w[1] + " => " + r.to_line());
    } else if (cmd == "periods") {
      need(1);
      auto periods = ensure_world().historian().list_association_periods(
          PrimaryName::parse(w[1]), ensure_world().today());
      std::string lineout = "periods " + w[1];
      for (const auto& p : periods)
        lineout += " person#" + std::to_string(p.person_ordinal) + ":" +
                   p.period.first.to_string() + ".." + p.period.last.to_string();
      out.push_back(lineout);
    } else {
      fail(Errc::bad_request, "unknown command " + cmd);
    }
  }

  HistorianConfig cfg_;
  Journal* journal_;
  uint64_t seed_ = 1;
  std::unique_ptr<SimWorld> world_;
  std::map<std::string, AccountId> aliases_;
};

}  // namespace hints
