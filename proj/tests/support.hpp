// SPDX-License-Identifier: Apache-2.0
//
// Shared test scaffolding: a recording transport double, a brute-force
// linear-scan resolution oracle kept deliberately independent of the
// historian's indexed lookup path, and a randomized history generator.
#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hints/historian.hpp"

namespace hints::testsupport {

class AcceptTransport final : public Transport {
 public:
  bool send(const Message& m) override {
    if (dead_namespaces.count(m.to.namespace_part)) return false;
    sent.push_back(m);
    return true;
  }
  std::vector<Message> sent;
  std::set<std::string> dead_namespaces;
};

// --- brute-force oracle -------------------------------------------------------

// Linear scan over a plain snapshot of records, applying the same validity
// predicate as the historian's documented resolution rules: per day t, the
// record with the greatest start <= t (covering t unless loose), ties to the
// smallest rid; one current name per holder (expiration > now, greatest
// start, then lexicographically smallest name, then smallest rid).
inline const AssociationRecord* oracle_record_for_day(
    const std::vector<AssociationRecord>& records, const PrimaryName& name,
    Date t, Date now, bool loose) {
  const AssociationRecord* best = nullptr;
  for (const AssociationRecord& r : records) {
    if (!(r.name == name)) continue;
    if (r.start > t) continue;
    if (!loose) {
      Date valid_to = r.active_at(now) ? r.expiration : r.end;
      if (t > valid_to) continue;
    }
    if (!best || r.start > best->start ||
        (r.start == best->start && r.rid < best->rid))
      best = &r;
  }
  return best;
}

inline std::optional<PrimaryName> oracle_current_name(
    const std::vector<AssociationRecord>& records, AccountId person, Date now) {
  const AssociationRecord* best = nullptr;
  for (const AssociationRecord& r : records) {
    if (r.person != person) continue;
    if (!(r.expiration > now)) continue;
    if (!best || r.start > best->start ||
        (r.start == best->start && r.name.to_string() < best->name.to_string()) ||
        (r.start == best->start && r.name == best->name && r.rid < best->rid))
      best = &r;
  }
  if (!best) return std::nullopt;
  return best->name;
}

inline ResolutionResult oracle_resolve(const std::vector<AssociationRecord>& records,
                                       const HistoricName& h, Date now, bool loose) {
  DateInterval window = h.when.interval();
  struct Run {
    AccountId person;
    DateInterval days;
  };
  std::vector<Run> runs;
  for (Date t = window.first; t <= window.last; t = t.plus_days(1)) {
    const AssociationRecord* r =
        oracle_record_for_day(records, h.name, t, now, loose);
    if (!r) continue;
    if (!runs.empty() && runs.back().person == r->person &&
        runs.back().days.last.plus_days(1) == t)
      runs.back().days.last = t;
    else
      runs.push_back(Run{r->person, DateInterval{t, t}});
  }

  ResolutionResult out;
  if (runs.empty()) {
    out.kind = ResolutionResult::Kind::no_history;
    return out;
  }
  std::vector<AccountId> order;
  for (const Run& run : runs)
    if (std::find(order.begin(), order.end(), run.person) == order.end())
      order.push_back(run.person);
  if (order.size() == 1) {
    auto current = oracle_current_name(records, order[0], now);
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
    v.current = oracle_current_name(records, order[i], now);
    out.holders.push_back(std::move(v));
  }
  return out;
}

// --- randomized histories -----------------------------------------------------

// Drives a historian through random link/confirm/sever/sweep traffic and
// keeps the final date. Confirmation responses read the parked nonce from
// the pending-challenge table, which is exactly what a cooperating mailbox
// holder would echo back.
struct RandomHistory {
  HistorianConfig cfg;
  AcceptTransport transport;
  SeededRng rng;
  Historian historian;
  Date now = Date::from_ymd(2000, 1, 1);
  std::vector<AccountId> accounts;
  std::vector<PrimaryName> names;

  RandomHistory(uint64_t seed, bool loose, int max_accounts, int max_names,
                int ops, std::mt19937_64& gen)
      : cfg{Duration{2, 0}, Duration{0, 7}, Duration{0, 2}, loose},
        rng(seed),
        historian(cfg, &transport, &rng) {
    auto pick = [&](int n) { return int(gen() % uint64_t(n)); };
    int naccounts = 1 + pick(max_accounts);
    for (int i = 0; i < naccounts; ++i)
      accounts.push_back(historian.create_account("s" + std::to_string(i)));
    int nnames = 1 + pick(max_names);
    for (int i = 0; i < nnames; ++i)
      names.push_back(PrimaryName("u" + std::to_string(i), "ns.example"));

    for (int step = 0; step < ops; ++step) {
      now = now.plus_days(pick(45));
      AccountId acct = accounts[size_t(pick(int(accounts.size())))];
      PrimaryName name = names[size_t(pick(int(names.size())))];
      switch (pick(6)) {
        case 0:
        case 1: {  // request + correct confirmation
          uint64_t ch = historian.request_link(acct, name, now);
          now = now.plus_days(pick(6));
          confirm(ch);
          break;
        }
        case 2: {  // request + wrong nonce
          uint64_t ch = historian.request_link(acct, name, now);
          Bytes wrong(16, 0xee);
          try {
            historian.confirm_link(ch, wrong, now);
          } catch (const Error&) {
          }
          break;
        }
        case 3:
          historian.sever_link(acct, name, now);
          break;
        case 4: {
          historian.expire_challenges(now);
          for (const SweepAction& a : historian.reestablish_sweep(now)) {
            if (a.kind != SweepAction::Kind::challenge_issued) continue;
            if (pick(2)) continue;  // half the reconfirmations go unanswered
            confirm_for_record(a.rid);
          }
          break;
        }
        default:
          historian.expire_challenges(now);
          break;
      }
    }
  }

  void confirm(uint64_t challenge_id) {
    for (const Challenge& ch : historian.pending_challenges()) {
      if (ch.id != challenge_id) continue;
      try {
        historian.confirm_link(challenge_id, ch.nonce, now);
      } catch (const Error&) {
      }
      return;
    }
  }

  void confirm_for_record(uint64_t rid) {
    for (const Challenge& ch : historian.pending_challenges()) {
      if (ch.purpose != ChallengePurpose::reestablish || ch.record_rid != rid)
        continue;
      try {
        historian.confirm_link(ch.id, ch.nonce, now);
      } catch (const Error&) {
      }
      return;
    }
  }
};

inline bool same_result(const ResolutionResult& a, const ResolutionResult& b) {
  if (a.kind != b.kind) return false;
  if (a.current != b.current) return false;
  if (a.holders.size() != b.holders.size()) return false;
  for (size_t i = 0; i < a.holders.size(); ++i) {
    if (a.holders[i].ordinal != b.holders[i].ordinal) return false;
    if (a.holders[i].periods != b.holders[i].periods) return false;
    if (a.holders[i].current != b.holders[i].current) return false;
  }
  return true;
}

}  // namespace hints::testsupport
