// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "hints/canonical.hpp"
#include "hints/date.hpp"
#include "hints/digest.hpp"
#include "hints/histname.hpp"
#include "hints/journal.hpp"

namespace hints {

// --- transport boundary -----------------------------------------------------

// What the historian pushes out to primary names: challenges carrying a
// nonce, and severance notices. Delivery is the transport's problem; the
// simulated world and any future mail adapter plug in here.
struct Message {
  enum class Kind : uint8_t { challenge = 1, severance_notice = 2 };
  Kind kind = Kind::challenge;
  PrimaryName to;
  uint64_t challenge_id = 0;
  Bytes nonce;
  Date sent_on;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // true = delivered (synchronously, in the simulation); false = the
  // destination namespace is unreachable.
  virtual bool send(const Message& m) = 0;
};

// --- domain types -------------------------------------------------------

using AccountId = uint64_t;

// A mobile person's historian account. The id lives in an internal,
// private name space: it is never shown to correspondents and never
// appears in any resolution output.
struct PersonAccount {
  AccountId id = 0;
  std::string display_hint;
  Digest256 auth_secret_digest;
};

// The association of a name with an account over [start, end], considered
// valid until `expiration`, with a reconfirmation expected when
// next_link/next_assign fall due. An association is active while its
// expiration lies in the future; an expired record is archived and
// immutable.
struct AssociationRecord {
  uint64_t rid = 0;  // internal record id; insertion order, never reused
  PrimaryName name;
  AccountId person = 0;
  Date start;
  Date end;
  Date expiration;
  Date next_link;
  Date next_assign;

  bool active_at(Date now) const { return expiration > now; }

  // The span of days a historic designation can attribute to this record:
  // the agreed [start, end] once archived, and up to the expiration while
  // the historian still considers the association valid.
  DateInterval valid_interval(Date now) const {
    return DateInterval{start, active_at(now) ? expiration : end};
  }

  bool operator==(const AssociationRecord&) const = default;
};

struct HistorianConfig {
  Duration link_ttl{2, 0};          // l: maximum validity period of a link
  Duration challenge_timeout{0, 7};
  Duration reconfirm_lead{0, 2};    // how long before expiration a reconfirmation falls due
  bool loose_resolution = false;    // literal Alg.-3 lookup, no coverage check

  void validate() const {
    if (!link_ttl.positive() || !challenge_timeout.positive() ||
        !reconfirm_lead.positive())
      fail(Errc::bad_request, "durations must be positive");
    // reconfirm_lead < link_ttl, checked by applying both to a fixed date
    Date base = Date::from_ymd(2000, 1, 1);
    if (advance(base, reconfirm_lead) >= advance(base, link_ttl))
      fail(Errc::bad_request, "reconfirm_lead must be shorter than link_ttl");
  }
};

enum class ChallengePurpose : uint8_t { initial_link = 1, reestablish = 2 };

struct Challenge {
  uint64_t id = 0;
  AccountId account = 0;
  PrimaryName name;
  Bytes nonce;
  Date issued;
  Date deadline;
  ChallengePurpose purpose = ChallengePurpose::initial_link;
  uint64_t record_rid = 0;  // reestablish only
};

// One association period of a name, with the holder anonymized to an
// ordinal ("person #1, person #2, ...").
struct PeriodEntry {
  DateInterval period;
  int person_ordinal = 0;

  bool operator==(const PeriodEntry&) const = default;
};

struct HolderView {
  int ordinal = 0;
  std::vector<DateInterval> periods;  // runs of days attributed to this holder
  std::optional<PrimaryName> current;
};

struct ResolutionResult {
  enum class Kind : uint8_t { resolved = 1, multivalent, no_history, no_current_name };
  Kind kind = Kind::no_history;
  std::optional<PrimaryName> current;  // resolved
  std::vector<HolderView> holders;     // multivalent

  // Machine-readable rendering; account ids never appear here.
  std::string to_line() const {
    switch (kind) {
      case Kind::resolved:
        return "resolved " + current->to_string();
      case Kind::no_history:
        return "no-history";
      case Kind::no_current_name:
        return "no-current-name";
      case Kind::multivalent: {
        std::string out = "multivalent";
        for (const auto& h : holders) {
          out += " person#" + std::to_string(h.ordinal) + "[";
          for (size_t i = 0; i < h.periods.size(); ++i) {
            if (i) out += ",";
            out += h.periods[i].first.to_string() + ".." +
                   h.periods[i].last.to_string();
          }
          out += "]=";
          out += h.current ? h.current->to_string() : "-";
        }
        return out;
      }
    }
    return "?";
  }
};

struct SweepAction {
  enum class Kind : uint8_t { challenge_issued = 1, archived = 2 };
  Kind kind;
  uint64_t rid = 0;
  PrimaryName name;
  bool delivered = false;  // challenge_issued only
};

// --- the historian ---------------------------------------------------------

// Trusted historian: account management, the association-record database
// with its two sorted indices, the link/sever/resolve operations, and the
// periodic reestablishment lifecycle.
//
// Concurrency: single writer. All mutations funnel through apply() under an
// exclusive lock; reads run under a shared lock against consistent state.
class Historian {
 public:
  Historian(HistorianConfig cfg, Transport* transport, Rng* rng,
            Journal* journal = nullptr)
      : cfg_(cfg), transport_(transport), rng_(rng), journal_(journal) {
    cfg_.validate();
    if (journal_) {
      for (const Bytes& m : journal_->payloads()) apply(m);
    }
  }

  const HistorianConfig& config() const { return cfg_; }

  // --- account management ---------------------------------------------

  AccountId create_account(std::string_view secret, std::string display = "") {
    if (secret.empty()) fail(Errc::bad_request, "empty account secret");
    std::unique_lock lock(mu_);
    AccountId id = next_account_;
    Encoder e;
    e.u64(1, kMutCreateAccount).u64(2, id).digest(3, sha256(secret)).str(4, display);
    commit(e.take());
    return id;
  }

  bool authenticate(AccountId id, std::string_view secret) const {
    std::shared_lock lock(mu_);
    auto it = accounts_.find(id);
    return it != accounts_.end() && it->second.auth_secret_digest == sha256(secret);
  }

  bool account_exists(AccountId id) const {
    std::shared_lock lock(mu_);
    return accounts_.count(id) > 0;
  }

  // --- linking (Alg. 1) -------------------------------------------------

  // Dispatch a fresh random nonce to `name` and park a pending link until
  // it is confirmed or times out. Throws TransportDown when the message
  // cannot be handed over.
  uint64_t request_link(AccountId account, const PrimaryName& name, Date now) {
    std::unique_lock lock(mu_);
    require_account(account);
    Challenge ch;
    ch.id = next_challenge_;
    ch.account = account;
    ch.name = name;
    ch.nonce = rng_->bytes(16);
    ch.issued = now;
    ch.deadline = advance(now, cfg_.challenge_timeout);
    ch.purpose = ChallengePurpose::initial_link;
    if (!transport_ || !transport_->send(Message{Message::Kind::challenge, name,
                                                 ch.id, ch.nonce, now}))
      fail(Errc::transport_down, "cannot deliver challenge to " + name.to_string());
    commit(encode_challenge(ch));
    return ch.id;
  }

  // Nonce comparison decides everything: a wrong nonce (a negative or
  // forged confirmation) leaves the database untouched and returns nullopt.
  std::optional<AssociationRecord> confirm_link(uint64_t challenge_id,
                                                ByteView response_nonce,
                                                Date now) {
    std::unique_lock lock(mu_);
    auto it = challenges_.find(challenge_id);
    if (it == challenges_.end())
      fail(Errc::unknown_challenge, std::to_string(challenge_id));
    Challenge ch = it->second;
    if (now > ch.deadline) {
      Encoder e;
      e.u64(1, kMutExpireChallenge).u64(2, challenge_id);
      commit(e.take());
      fail(Errc::stale_challenge, "challenge timed out");
    }
    if (ch.nonce.size() != response_nonce.size() ||
        !std::equal(ch.nonce.begin(), ch.nonce.end(), response_nonce.begin()))
      return std::nullopt;

    AssociationRecord after;
    bool inserted = false;
    if (ch.purpose == ChallengePurpose::initial_link) {
      const AssociationRecord* latest = latest_record(ch.name, ch.account);
      if (!latest || latest->expiration < now) {
        after = fresh_record(ch.name, ch.account, now);
        inserted = true;
      } else {
        after = *latest;
        after.end = now;
        after.expiration = advance(now, cfg_.link_ttl);
        after.next_link = after.next_assign =
            advance(after.expiration, cfg_.reconfirm_lead.negated());
      }
    } else {
      auto rit = records_.find(ch.record_rid);
      if (rit == records_.end() || !rit->second.active_at(now)) {
        Encoder e;
        e.u64(1, kMutExpireChallenge).u64(2, challenge_id);
        commit(e.take());
        fail(Errc::stale_challenge, "record already archived");
      }
      // A periodic reconfirmation keeps the association unbroken: the end
      // moves up to the previously promised expiration, and a fresh TTL
      // runs from the response date.
      after = rit->second;
      after.end = after.expiration;
      after.expiration = advance(now, cfg_.link_ttl);
      after.next_link = after.next_assign =
          advance(after.expiration, cfg_.reconfirm_lead.negated());
    }
    commit(encode_confirm(challenge_id, after, inserted));
    return after;
  }

  // --- severance (Alg. 2) ----------------------------------------------

  void sever_link(AccountId account, const PrimaryName& name, Date now) {
    std::unique_lock lock(mu_);
    require_account(account);
    // Notification goes out unconditionally; no confirmation is expected
    // and an unreachable namespace is not an error.
    if (transport_)
      transport_->send(Message{Message::Kind::severance_notice, name, 0, {}, now});
    const AssociationRecord* latest = latest_record(name, account);
    uint64_t rid = (latest && latest->expiration > now) ? latest->rid : 0;
    Encoder e;
    e.u64(1, kMutSever).u64(2, account).str(3, name.to_string()).date(4, now).u64(5, rid);
    commit(e.take());
  }

  // --- resolution (Alg. 3 + multivalence) --------------------------------

  ResolutionResult resolve(const HistoricName& h, Date now) const {
    std::shared_lock lock(mu_);
    return resolve_locked(h, now);
  }

  std::vector<PeriodEntry> list_association_periods(const PrimaryName& name,
                                                    Date now) const {
    std::shared_lock lock(mu_);
    std::vector<PeriodEntry> out;
    std::map<AccountId, int> ordinals;
    auto it = by_name_.lower_bound(NameKey{name.to_string(), 0, 0});
    for (; it != by_name_.end() && std::get<0>(*it) == name.to_string(); ++it) {
      const AssociationRecord& r = records_.at(std::get<2>(*it));
      auto [oit, fresh] = ordinals.emplace(r.person, int(ordinals.size()) + 1);
      out.push_back(PeriodEntry{r.valid_interval(now), oit->second});
    }
    return out;
  }

  // --- reestablishment -----------------------------------------------------

  // For every active record whose reconfirmation has fallen due, issue one
  // challenge to the name (at most one outstanding per record); report
  // records newly observed to have expired unconfirmed. Idempotent at a
  // fixed date.
  std::vector<SweepAction> reestablish_sweep(Date now) {
    std::unique_lock lock(mu_);
    std::vector<SweepAction> actions;
    // Deterministic order: the [name, start] index.
    for (const auto& key : by_name_) {
      AssociationRecord& r = records_.at(std::get<2>(key));
      if (!r.active_at(now)) {
        if (r.end < r.expiration && r.expiration <= now &&
            !reported_archived_.count(r.rid)) {
          Encoder e;
          e.u64(1, kMutArchiveNote).u64(2, r.rid);
          commit(e.take());
          actions.push_back(SweepAction{SweepAction::Kind::archived, r.rid, r.name, false});
        }
        continue;
      }
      if (r.next_assign > now && r.next_link > now) continue;
      if (outstanding_reestablish_.count(r.rid)) continue;
      Challenge ch;
      ch.id = next_challenge_;
      ch.account = r.person;
      ch.name = r.name;
      ch.nonce = rng_->bytes(16);
      ch.issued = now;
      ch.deadline = advance(now, cfg_.challenge_timeout);
      ch.purpose = ChallengePurpose::reestablish;
      ch.record_rid = r.rid;
      bool delivered =
          transport_ && transport_->send(Message{Message::Kind::challenge, r.name,
                                                 ch.id, ch.nonce, now});
      commit(encode_challenge(ch));
      actions.push_back(
          SweepAction{SweepAction::Kind::challenge_issued, r.rid, r.name, delivered});
    }
    return actions;
  }

  // Drop challenges whose response window has closed.
  std::vector<uint64_t> expire_challenges(Date now) {
    std::unique_lock lock(mu_);
    std::vector<uint64_t> dropped;
    for (const auto& [id, ch] : challenges_)
      if (ch.deadline < now) dropped.push_back(id);
    for (uint64_t id : dropped) {
      Encoder e;
      e.u64(1, kMutExpireChallenge).u64(2, id);
      commit(e.take());
    }
    return dropped;
  }

  // --- inspection -----------------------------------------------------------

  std::vector<AssociationRecord> snapshot_records() const {
    std::shared_lock lock(mu_);
    std::vector<AssociationRecord> out;
    out.reserve(records_.size());
    for (const auto& [rid, r] : records_) out.push_back(r);
    return out;
  }

  std::optional<AssociationRecord> record(uint64_t rid) const {
    std::shared_lock lock(mu_);
    auto it = records_.find(rid);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<Challenge> pending_challenges() const {
    std::shared_lock lock(mu_);
    std::vector<Challenge> out;
    for (const auto& [id, ch] : challenges_) out.push_back(ch);
    return out;
  }

  // Both indices rebuilt from scratch and compared against the maintained
  // ones; used by tests after every mutation batch.
  bool indices_consistent() const {
    std::shared_lock lock(mu_);
    std::set<NameKey> names;
    std::set<PersonKey> persons;
    for (const auto& [rid, r] : records_) {
      names.insert(NameKey{r.name.to_string(), r.start.days_since_epoch(), rid});
      persons.insert(PersonKey{r.person, r.start.days_since_epoch(), rid});
    }
    return names == by_name_ && persons == by_person_;
  }

  // Fingerprint of the whole database (records, accounts, pending
  // challenges), for byte-identity checks.
  Digest256 state_digest() const {
    std::shared_lock lock(mu_);
    Encoder e;
    for (const auto& [rid, r] : records_) {
      Encoder one;
      one.u64(1, rid).str(2, r.name.to_string()).u64(3, r.person);
      one.date(4, r.start).date(5, r.end).date(6, r.expiration);
      one.date(7, r.next_link).date(8, r.next_assign);
      e.nested(1, one.take());
    }
    for (const auto& [id, a] : accounts_) {
      Encoder one;
      one.u64(1, id).digest(2, a.auth_secret_digest).str(3, a.display_hint);
      e.nested(2, one.take());
    }
    for (const auto& [id, ch] : challenges_) {
      Encoder one;
      one.u64(1, id).u64(2, ch.account).str(3, ch.name.to_string()).raw(4, ch.nonce);
      one.date(5, ch.issued).date(6, ch.deadline);
      one.u64(7, static_cast<uint64_t>(ch.purpose)).u64(8, ch.record_rid);
      e.nested(3, one.take());
    }
    for (uint64_t rid : reported_archived_) e.u64(4, rid);
    return sha256(e.take());
  }

 private:
  // Mutation tags. Every state change is one journal record; live
  // operations construct the record and commit() both journals and applies
  // it, so replay exercises the only mutation path there is.
  static constexpr uint64_t kMutCreateAccount = 1;
  static constexpr uint64_t kMutChallenge = 2;
  static constexpr uint64_t kMutConfirm = 3;
  static constexpr uint64_t kMutSever = 4;
  static constexpr uint64_t kMutExpireChallenge = 5;
  static constexpr uint64_t kMutArchiveNote = 6;

  using NameKey = std::tuple<std::string, int32_t, uint64_t>;  // name, start, rid
  using PersonKey = std::tuple<AccountId, int32_t, uint64_t>;

  void require_account(AccountId id) const {
    if (!accounts_.count(id)) fail(Errc::unauthorized, "unknown account");
  }

  AssociationRecord fresh_record(const PrimaryName& name, AccountId account,
                                 Date now) const {
    AssociationRecord r;
    r.rid = next_rid_;
    r.name = name;
    r.person = account;
    r.start = now;
    r.end = now;
    r.expiration = advance(now, cfg_.link_ttl);
    r.next_link = r.next_assign = advance(r.expiration, cfg_.reconfirm_lead.negated());
    return r;
  }

  const AssociationRecord* latest_record(const PrimaryName& name,
                                         AccountId account) const {
    // Greatest start for this (name, person) pair, walking the name index
    // backwards.
    const AssociationRecord* best = nullptr;
    auto it = by_name_.upper_bound(NameKey{name.to_string(), INT32_MAX, UINT64_MAX});
    while (it != by_name_.begin()) {
      --it;
      if (std::get<0>(*it) != name.to_string()) break;
      const AssociationRecord& r = records_.at(std::get<2>(*it));
      if (r.person != account) continue;
      if (!best || r.start > best->start ||
          (r.start == best->start && r.rid < best->rid))
        best = &r;
    }
    return best;
  }

  Bytes encode_challenge(const Challenge& ch) const {
    Encoder e;
    e.u64(1, kMutChallenge).u64(2, ch.id).u64(3, ch.account).str(4, ch.name.to_string());
    e.raw(5, ch.nonce).date(6, ch.issued).date(7, ch.deadline);
    e.u64(8, static_cast<uint64_t>(ch.purpose)).u64(9, ch.record_rid);
    return e.take();
  }

  Bytes encode_confirm(uint64_t challenge_id, const AssociationRecord& after,
                       bool inserted) const {
    Encoder e;
    e.u64(1, kMutConfirm).u64(2, challenge_id).u64(3, after.rid);
    e.str(4, after.name.to_string()).u64(5, after.person);
    e.date(6, after.start).date(7, after.end).date(8, after.expiration);
    e.date(9, after.next_link).date(10, after.next_assign);
    e.u64(11, inserted ? 1 : 0);
    return e.take();
  }

  // Journal (if any) first, then apply. The only way state changes.
  void commit(Bytes mutation) {
    if (journal_) journal_->append(mutation);
    apply(mutation);
  }

  void apply(ByteView mutation) {
    Decoder d(mutation);
    uint64_t tag = d.u64(1);
    switch (tag) {
      case kMutCreateAccount: {
        PersonAccount a;
        a.id = d.u64(2);
        a.auth_secret_digest = d.digest(3);
        a.display_hint = d.str(4);
        d.expect_done();
        accounts_.emplace(a.id, a);
        next_account_ = std::max(next_account_, a.id + 1);
        break;
      }
      case kMutChallenge: {
        Challenge ch;
        ch.id = d.u64(2);
        ch.account = d.u64(3);
        ch.name = PrimaryName::parse(d.str(4));
        ch.nonce = d.bytes_field(5);
        ch.issued = d.date(6);
        ch.deadline = d.date(7);
        ch.purpose = static_cast<ChallengePurpose>(d.u64(8));
        ch.record_rid = d.u64(9);
        d.expect_done();
        if (ch.purpose == ChallengePurpose::reestablish)
          outstanding_reestablish_.insert(ch.record_rid);
        challenges_.emplace(ch.id, ch);
        next_challenge_ = std::max(next_challenge_, ch.id + 1);
        break;
      }
      case kMutConfirm: {
        uint64_t challenge_id = d.u64(2);
        AssociationRecord r;
        r.rid = d.u64(3);
        r.name = PrimaryName::parse(d.str(4));
        r.person = d.u64(5);
        r.start = d.date(6);
        r.end = d.date(7);
        r.expiration = d.date(8);
        r.next_link = d.date(9);
        r.next_assign = d.date(10);
        bool inserted = d.u64(11) != 0;
        d.expect_done();
        drop_challenge(challenge_id);
        if (inserted) {
          records_.emplace(r.rid, r);
          by_name_.insert(NameKey{r.name.to_string(), r.start.days_since_epoch(), r.rid});
          by_person_.insert(PersonKey{r.person, r.start.days_since_epoch(), r.rid});
          next_rid_ = std::max(next_rid_, r.rid + 1);
        } else {
          records_.at(r.rid) = r;  // start unchanged, index keys stable
        }
        break;
      }
      case kMutSever: {
        (void)d.u64(2);
        (void)d.str(3);
        Date now = d.date(4);
        uint64_t rid = d.u64(5);
        d.expect_done();
        if (rid) {
          AssociationRecord& r = records_.at(rid);
          r.end = r.expiration = r.next_link = r.next_assign = now;
        }
        break;
      }
      case kMutExpireChallenge: {
        uint64_t id = d.u64(2);
        d.expect_done();
        drop_challenge(id);
        break;
      }
      case kMutArchiveNote: {
        uint64_t rid = d.u64(2);
        d.expect_done();
        reported_archived_.insert(rid);
        break;
      }
      default:
        fail(Errc::corrupt_journal, "unknown mutation tag " + std::to_string(tag));
    }
  }

  void drop_challenge(uint64_t id) {
    auto it = challenges_.find(id);
    if (it == challenges_.end()) return;
    if (it->second.purpose == ChallengePurpose::reestablish) {
      auto oit = outstanding_reestablish_.find(it->second.record_rid);
      if (oit != outstanding_reestablish_.end()) outstanding_reestablish_.erase(oit);
    }
    challenges_.erase(it);
  }

  // The record a historic day t belongs to: greatest start <= t, and in
  // bounded mode t must also fall inside the record's valid interval.
  // Ties on start go to the oldest record.
  const AssociationRecord* record_for_day(const std::string& name_text, Date t,
                                          Date now) const {
    const AssociationRecord* winner = nullptr;
    auto it = by_name_.upper_bound(NameKey{name_text, t.days_since_epoch(), UINT64_MAX});
    std::optional<int32_t> winning_start;
    while (it != by_name_.begin()) {
      --it;
      if (std::get<0>(*it) != name_text) break;
      int32_t start = std::get<1>(*it);
      if (winning_start && start < *winning_start) break;
      const AssociationRecord& r = records_.at(std::get<2>(*it));
      if (!cfg_.loose_resolution && !r.valid_interval(now).contains(t)) continue;
      if (!winning_start) winning_start = start;
      // within the winning start group, smallest rid wins
      if (!winner || r.rid < winner->rid) winner = &r;
    }
    return winner;
  }

  std::optional<PrimaryName> current_name_of(AccountId person, Date now) const {
    const AssociationRecord* best = nullptr;
    auto it = by_person_.lower_bound(PersonKey{person, 0, 0});
    for (; it != by_person_.end() && std::get<0>(*it) == person; ++it) {
      const AssociationRecord& r = records_.at(std::get<2>(*it));
      if (!(r.expiration > now)) continue;  // the latest still-valid association
      if (!best || r.start > best->start ||
          (r.start == best->start && r.name.to_string() < best->name.to_string()) ||
          (r.start == best->start && r.name == best->name && r.rid < best->rid))
        best = &r;
    }
    if (!best) return std::nullopt;
    return best->name;
  }

  ResolutionResult resolve_locked(const HistoricName& h, Date now) const {
    DateInterval window = h.when.interval();
    std::string name_text = h.name.to_string();

    // Day-by-day attribution over the designation window.
    struct Run {
      AccountId person;
      DateInterval days;
    };
    std::vector<Run> runs;
    for (Date t = window.first; t <= window.last; t = t.plus_days(1)) {
      const AssociationRecord* r = record_for_day(name_text, t, now);
      if (!r) continue;
      if (!runs.empty() && runs.back().person == r->person &&
          runs.back().days.last.plus_days(1) == t) {
        runs.back().days.last = t;
      } else {
        runs.push_back(Run{r->person, DateInterval{t, t}});
      }
    }

    ResolutionResult out;
    if (runs.empty()) {
      out.kind = ResolutionResult::Kind::no_history;
      return out;
    }

    // Distinct holders in order of first attributed day.
    std::vector<AccountId> order;
    for (const Run& run : runs)
      if (std::find(order.begin(), order.end(), run.person) == order.end())
        order.push_back(run.person);

    if (order.size() == 1) {
      std::optional<PrimaryName> current = current_name_of(order[0], now);
      if (!current) {
        out.kind = ResolutionResult::Kind::no_current_name;
        return out;
      }
      out.kind = ResolutionResult::Kind::resolved;
      out.current = current;
      return out;
    }

    out.kind = ResolutionResult::Kind::multivalent;
    for (size_t i = 0; i < order.size(); ++i) {
      HolderView v;
      v.ordinal = static_cast<int>(i) + 1;
      for (const Run& run : runs)
        if (run.person == order[i]) v.periods.push_back(run.days);
      v.current = current_name_of(order[i], now);
      out.holders.push_back(std::move(v));
    }
    return out;
  }

  HistorianConfig cfg_;
  Transport* transport_;
  Rng* rng_;
  Journal* journal_;

  mutable std::shared_mutex mu_;
  std::map<AccountId, PersonAccount> accounts_;
  std::map<uint64_t, AssociationRecord> records_;
  std::set<NameKey> by_name_;
  std::set<PersonKey> by_person_;
  std::map<uint64_t, Challenge> challenges_;
  std::multiset<uint64_t> outstanding_reestablish_;  // rids with a pending reconfirmation
  std::set<uint64_t> reported_archived_;
  AccountId next_account_ = 1;
  uint64_t next_challenge_ = 1;
  uint64_t next_rid_ = 1;
};

}  // namespace hints
