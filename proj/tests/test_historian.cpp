// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <random>

using namespace hints;
using namespace hints::testsupport;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date::from_ymd(y, m, d); }

struct Harness {
  AcceptTransport transport;
  SeededRng rng{17};
  HistorianConfig cfg{};
  Historian historian{cfg, &transport, &rng};

  // Complete a link: request then echo back the parked nonce.
  AssociationRecord link(AccountId acct, const PrimaryName& name, Date at,
                         Date confirm_at) {
    uint64_t id = historian.request_link(acct, name, at);
    for (const Challenge& ch : historian.pending_challenges()) {
      if (ch.id == id) {
        auto rec = historian.confirm_link(id, ch.nonce, confirm_at);
        REQUIRE(rec.has_value());
        return *rec;
      }
    }
    FAIL("challenge not parked");
    return {};
  }
  AssociationRecord link(AccountId acct, const PrimaryName& name, Date at) {
    return link(acct, name, at, at);
  }

  // Hold a name across [from, to] by reconfirming well inside every TTL,
  // ending with a confirmation exactly at `to`.
  AssociationRecord hold(AccountId acct, const PrimaryName& name, Date from,
                         Date to) {
    AssociationRecord r = link(acct, name, from);
    Date at = from;
    while (at.plus_days(45) < to) {
      at = at.plus_days(45);
      r = link(acct, name, at);
    }
    if (to > from) r = link(acct, name, to);
    return r;
  }
};

}  // namespace

TEST_CASE("accounts are unique and invisible", "[historian]") {
  Harness h;
  AccountId a = h.historian.create_account("s1");
  AccountId b = h.historian.create_account("s2");
  CHECK(a != b);
  CHECK(h.historian.authenticate(a, "s1"));
  CHECK_FALSE(h.historian.authenticate(a, "s2"));

  // resolve before any link: no history
  auto r = h.historian.resolve(parse_historic_name("x@ns.example?1999"),
                               ymd(2000, 1, 1));
  CHECK(r.kind == ResolutionResult::Kind::no_history);
}

TEST_CASE("Alg. 1: confirmation writes the expected record", "[historian]") {
  Harness h;
  AccountId jane = h.historian.create_account("jane");
  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");

  SECTION("first confirmation: fresh record with a 2-month TTL") {
    AssociationRecord r = h.link(jane, jmobile, ymd(2000, 3, 2));
    CHECK(r.start == ymd(2000, 3, 2));
    CHECK(r.end == ymd(2000, 3, 2));
    CHECK(r.expiration == ymd(2000, 5, 2));
    CHECK(r.next_link == ymd(2000, 4, 30));   // expiration minus the 2-day lead
    CHECK(r.next_assign == ymd(2000, 4, 30));
  }

  SECTION("re-confirmation extends in place, reproducing the May-1 record") {
    h.link(jane, jmobile, ymd(2000, 3, 2));
    AssociationRecord r = h.link(jane, jmobile, ymd(2000, 5, 1));
    // the association record: start March 2, end May 1, expiration July 1,
    // next link/assign June 29
    CHECK(r.start == ymd(2000, 3, 2));
    CHECK(r.end == ymd(2000, 5, 1));
    CHECK(r.expiration == ymd(2000, 7, 1));
    CHECK(r.next_link == ymd(2000, 6, 29));
    CHECK(r.next_assign == ymd(2000, 6, 29));
    CHECK(h.historian.snapshot_records().size() == 1);  // update, not insert
  }

  SECTION("confirmation after expiration starts a new record") {
    AssociationRecord first = h.link(jane, jmobile, ymd(2000, 3, 2));
    AssociationRecord second = h.link(jane, jmobile, ymd(2000, 8, 1));
    CHECK(second.rid != first.rid);
    CHECK(h.historian.snapshot_records().size() == 2);
  }

  SECTION("wrong nonce leaves the database bit-identical") {
    h.link(jane, jmobile, ymd(2000, 3, 2));
    Digest256 before = h.historian.state_digest();
    uint64_t id = h.historian.request_link(jane, jmobile, ymd(2000, 3, 10));
    Digest256 with_challenge = h.historian.state_digest();
    Bytes wrong(16, 0xab);
    auto rec = h.historian.confirm_link(id, wrong, ymd(2000, 3, 10));
    CHECK_FALSE(rec.has_value());
    CHECK(h.historian.state_digest() == with_challenge);
    CHECK(with_challenge != before);  // the pending challenge itself is state
  }

  SECTION("two concurrent requests: independent nonces, either confirms") {
    uint64_t c1 = h.historian.request_link(jane, jmobile, ymd(2000, 3, 2));
    uint64_t c2 = h.historian.request_link(jane, jmobile, ymd(2000, 3, 2));
    auto pending = h.historian.pending_challenges();
    REQUIRE(pending.size() == 2);
    CHECK(pending[0].nonce != pending[1].nonce);
    Bytes n2;
    for (const auto& ch : pending)
      if (ch.id == c2) n2 = ch.nonce;
    auto rec = h.historian.confirm_link(c2, n2, ymd(2000, 3, 3));
    CHECK(rec.has_value());
    (void)c1;
  }

  SECTION("timed-out challenge is stale") {
    uint64_t id = h.historian.request_link(jane, jmobile, ymd(2000, 3, 2));
    Bytes nonce = h.historian.pending_challenges()[0].nonce;
    try {
      h.historian.confirm_link(id, nonce, ymd(2000, 3, 10));  // 8 days > 7
      FAIL("expected StaleChallenge");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::stale_challenge);
    }
    // and the challenge is gone now
    CHECK_THROWS_AS(h.historian.confirm_link(id, nonce, ymd(2000, 3, 10)), Error);
  }

  SECTION("unknown challenge") {
    CHECK_THROWS_AS(h.historian.confirm_link(999, Bytes{}, ymd(2000, 1, 1)), Error);
  }

  SECTION("unreachable namespace is TransportDown") {
    h.transport.dead_namespaces.insert("nowhere.test");
    try {
      h.historian.request_link(jane, PrimaryName::parse("x@nowhere.test"),
                               ymd(2000, 1, 1));
      FAIL("expected TransportDown");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::transport_down);
    }
  }
}

TEST_CASE("Alg. 2: severance", "[historian]") {
  Harness h;
  AccountId jane = h.historian.create_account("jane");
  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");

  SECTION("severing a live link ends and archives it at once") {
    h.link(jane, jmobile, ymd(2000, 3, 2));
    h.link(jane, jmobile, ymd(2000, 5, 1));
    h.historian.sever_link(jane, jmobile, ymd(2000, 4, 25));
    // note: severance date from the worked example, April 25
    auto records = h.historian.snapshot_records();
    REQUIRE(records.size() == 1);
    CHECK(records[0].end == ymd(2000, 4, 25));
    CHECK(records[0].expiration == ymd(2000, 4, 25));
    CHECK_FALSE(records[0].active_at(ymd(2000, 4, 25)));
    // notification went out
    REQUIRE_FALSE(h.transport.sent.empty());
    CHECK(h.transport.sent.back().kind == Message::Kind::severance_notice);
  }

  SECTION("severing a never-linked name notifies but changes nothing") {
    Digest256 before = h.historian.state_digest();
    size_t sent_before = h.transport.sent.size();
    h.historian.sever_link(jane, PrimaryName::parse("ghost@yahoo.com"),
                           ymd(2000, 1, 1));
    CHECK(h.historian.state_digest() == before);
    CHECK(h.transport.sent.size() == sent_before + 1);
  }

  SECTION("resolution through a severed period still works for earlier days") {
    h.link(jane, jmobile, ymd(2000, 3, 2));
    h.historian.sever_link(jane, jmobile, ymd(2000, 4, 25));
    h.link(jane, PrimaryName::parse("jane@sample.edu"), ymd(2000, 5, 1));
    auto r = h.historian.resolve(parse_historic_name("jmobile@yahoo.com?2000-03-15"),
                                 ymd(2000, 6, 1));
    REQUIRE(r.kind == ResolutionResult::Kind::resolved);
    CHECK(r.current->to_string() == "jane@sample.edu");
  }
}

TEST_CASE("resolution over the worked name history", "[historian]") {
  // Jane: jmobile@yahoo.com 1999-08..2000-05, janem@hotmail.com
  // 2000-07..2001-10, jane@sample.edu current.
  Harness h;
  AccountId jane = h.historian.create_account("jane");
  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");
  h.hold(jane, jmobile, ymd(1999, 8, 1), ymd(2000, 5, 1));
  h.hold(jane, PrimaryName::parse("janem@hotmail.com"), ymd(2000, 7, 1),
         ymd(2001, 10, 1));
  h.link(jane, PrimaryName::parse("jane@sample.edu"), ymd(2002, 1, 10));
  Date now = ymd(2002, 2, 1);  // sample.edu association still active

  SECTION("historic month resolves to the current name") {
    auto r = h.historian.resolve(parse_historic_name("jmobile@yahoo.com?2000-03"), now);
    REQUIRE(r.kind == ResolutionResult::Kind::resolved);
    CHECK(r.current->to_string() == "jane@sample.edu");
  }

  SECTION("James takes the name over: the year designation is multivalent") {
    AccountId james = h.historian.create_account("james");
    h.hold(james, jmobile, ymd(2000, 9, 1), ymd(2002, 1, 20));  // still holds it
    auto r = h.historian.resolve(parse_historic_name("jmobile@yahoo.com?2000"), now);
    REQUIRE(r.kind == ResolutionResult::Kind::multivalent);
    REQUIRE(r.holders.size() == 2);
    CHECK(r.holders[0].current->to_string() == "jane@sample.edu");
    CHECK(r.holders[1].current->to_string() == "jmobile@yahoo.com");
    // narrow designation recovers the single-holder answer
    auto narrow =
        h.historian.resolve(parse_historic_name("jmobile@yahoo.com?2000-03-15"), now);
    CHECK(narrow.kind == ResolutionResult::Kind::resolved);
  }

  SECTION("no history at all") {
    auto r = h.historian.resolve(parse_historic_name("nobody@nowhere.org?1998"), now);
    CHECK(r.kind == ResolutionResult::Kind::no_history);
  }

  SECTION("holder with every record expired has no current name") {
    auto r = h.historian.resolve(parse_historic_name("jmobile@yahoo.com?2000-03"),
                                 ymd(2005, 1, 1));
    CHECK(r.kind == ResolutionResult::Kind::no_current_name);
  }

  SECTION("period listing anonymizes holders") {
    AccountId james = h.historian.create_account("james");
    h.link(james, jmobile, ymd(2000, 9, 1));
    auto periods = h.historian.list_association_periods(jmobile, now);
    REQUIRE(periods.size() == 2);
    CHECK(periods[0].person_ordinal == 1);
    CHECK(periods[0].period.first == ymd(1999, 8, 1));
    CHECK(periods[0].period.last == ymd(2000, 5, 1));
    CHECK(periods[1].person_ordinal == 2);
    // unknown names list nothing
    CHECK(h.historian.list_association_periods(PrimaryName::parse("z@q.org"), now)
              .empty());
  }
}

TEST_CASE("period listing narrows a remembered time frame", "[historian]") {
  // A correspondent who only remembers "the late 90's" can see that the
  // name belonged to someone from 1995 to 2000 and to someone else from
  // 2000 to 2002, and pick the year designation accordingly.
  Harness h;
  PrimaryName name = PrimaryName::parse("jmobile@yahoo.com");
  AccountId first = h.historian.create_account("first");
  AccountId second = h.historian.create_account("second");
  h.hold(first, name, ymd(1995, 1, 1), ymd(2000, 1, 1));
  h.hold(second, name, ymd(2000, 6, 1), ymd(2002, 1, 1));
  Date now = ymd(2003, 1, 1);

  auto periods = h.historian.list_association_periods(name, now);
  REQUIRE(periods.size() == 2);
  CHECK(periods[0].person_ordinal == 1);
  CHECK(periods[0].period.first.year() == 1995);
  CHECK(periods[0].period.last.year() == 2000);
  CHECK(periods[1].person_ordinal == 2);
  CHECK(periods[1].period.first.year() == 2000);
  CHECK(periods[1].period.last.year() == 2002);

  // sorted chronologically, holders never overlap per person
  CHECK(periods[0].period.first <= periods[1].period.first);
}

TEST_CASE("property: periods are sorted and non-overlapping per person",
          "[historian][property]") {
  std::mt19937_64 gen(555);
  for (int trial = 0; trial < 120; ++trial) {
    RandomHistory rh(uint64_t(trial) * 31 + 5, false, 4, 6, 22, gen);
    for (const PrimaryName& name : rh.names) {
      auto periods = rh.historian.list_association_periods(name, rh.now);
      std::map<int, Date> last_end_by_person;
      Date prev_start = Date::from_days(INT32_MIN / 2);
      for (const auto& p : periods) {
        REQUIRE(prev_start <= p.period.first);  // chronological
        prev_start = p.period.first;
        auto it = last_end_by_person.find(p.person_ordinal);
        if (it != last_end_by_person.end())
          REQUIRE(it->second < p.period.first);  // per-person non-overlap
        last_end_by_person[p.person_ordinal] = p.period.last;
      }
    }
  }
}

TEST_CASE("reestablishment lifecycle", "[historian]") {
  Harness h;
  AccountId jane = h.historian.create_account("jane");
  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");
  h.link(jane, jmobile, ymd(2000, 3, 2));
  h.link(jane, jmobile, ymd(2000, 5, 1));  // record now [3-2, 5-1, exp 7-1, next 6-29]

  SECTION("sweep issues one challenge when the reconfirmation falls due") {
    CHECK(h.historian.reestablish_sweep(ymd(2000, 6, 28)).empty());
    auto actions = h.historian.reestablish_sweep(ymd(2000, 6, 29));
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].kind == SweepAction::Kind::challenge_issued);
    // idempotent while the challenge is outstanding
    CHECK(h.historian.reestablish_sweep(ymd(2000, 6, 29)).empty());
    CHECK(h.historian.reestablish_sweep(ymd(2000, 6, 30)).empty());
  }

  SECTION("answered reconfirmation pushes end to the old expiration") {
    h.historian.reestablish_sweep(ymd(2000, 6, 29));
    auto pending = h.historian.pending_challenges();
    REQUIRE(pending.size() == 1);
    auto rec = h.historian.confirm_link(pending[0].id, pending[0].nonce,
                                        ymd(2000, 6, 29));
    REQUIRE(rec.has_value());
    CHECK(rec->start == ymd(2000, 3, 2));
    CHECK(rec->end == ymd(2000, 7, 1));         // the previously promised end
    CHECK(rec->expiration == ymd(2000, 8, 29)); // fresh TTL from the response
    CHECK(rec->next_link == ymd(2000, 8, 27));
  }

  SECTION("unanswered reconfirmation archives at the last agreed end") {
    h.historian.reestablish_sweep(ymd(2000, 6, 29));
    auto actions = h.historian.reestablish_sweep(ymd(2000, 7, 1));
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].kind == SweepAction::Kind::archived);
    auto records = h.historian.snapshot_records();
    REQUIRE(records.size() == 1);
    CHECK(records[0].end == ymd(2000, 5, 1));  // archived ending May 1st
    CHECK_FALSE(records[0].active_at(ymd(2000, 7, 1)));
    // archival reported exactly once
    CHECK(h.historian.reestablish_sweep(ymd(2000, 7, 1)).empty());
    CHECK(h.historian.reestablish_sweep(ymd(2000, 7, 2)).empty());
  }

  SECTION("reconfirmation after expiry is stale and changes nothing") {
    h.historian.reestablish_sweep(ymd(2000, 6, 29));
    auto pending = h.historian.pending_challenges();
    REQUIRE(pending.size() == 1);
    try {
      h.historian.confirm_link(pending[0].id, pending[0].nonce, ymd(2000, 7, 2));
      FAIL("expected StaleChallenge");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::stale_challenge);
    }
    auto records = h.historian.snapshot_records();
    CHECK(records[0].end == ymd(2000, 5, 1));
  }
}

TEST_CASE("archived records are immutable", "[historian][property]") {
  Harness h;
  AccountId jane = h.historian.create_account("jane");
  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");
  h.link(jane, jmobile, ymd(2000, 3, 2));
  Date later = ymd(2000, 8, 1);  // record expired 2000-05-02

  auto archived_before = h.historian.snapshot_records().at(0);
  REQUIRE_FALSE(archived_before.active_at(later));

  // hammer the same (name, account) with everything available
  h.historian.sever_link(jane, jmobile, later);
  h.link(jane, jmobile, later);
  h.historian.reestablish_sweep(later.plus_days(90));
  h.historian.sever_link(jane, jmobile, later.plus_days(91));

  auto records = h.historian.snapshot_records();
  bool found = false;
  for (const auto& r : records) {
    if (r.rid == archived_before.rid) {
      CHECK(r == archived_before);
      found = true;
    }
  }
  CHECK(found);
  CHECK(h.historian.indices_consistent());
}

TEST_CASE("resolution agrees with the brute-force oracle", "[historian][property]") {
  std::mt19937_64 gen(20260811);
  int histories = 400;  // the acceptance suite runs the full 10k
  for (int i = 0; i < histories; ++i) {
    bool loose = (i % 2) == 1;
    RandomHistory rh(uint64_t(i) * 7919 + 3, loose, 4, 8, 25, gen);
    auto records = rh.historian.snapshot_records();
    REQUIRE(rh.historian.indices_consistent());
    for (int q = 0; q < 12; ++q) {
      PrimaryName name =
          rh.names[size_t(gen() % uint64_t(rh.names.size()))];
      int year = 2000 + int(gen() % 3);
      TimeDesignation when;
      switch (gen() % 3) {
        case 0: when = TimeDesignation::whole_year(year); break;
        case 1:
          when = TimeDesignation::year_month(year, unsigned(1 + gen() % 12));
          break;
        default:
          when = TimeDesignation::single_day(year, unsigned(1 + gen() % 12),
                                             unsigned(1 + gen() % 28));
      }
      HistoricName h{name, when};
      ResolutionResult got = rh.historian.resolve(h, rh.now);
      ResolutionResult want = oracle_resolve(records, h, rh.now, loose);
      INFO("history " << i << " query " << h.to_string() << " now "
                      << rh.now.to_string());
      INFO("got " << got.to_line() << " want " << want.to_line());
      REQUIRE(same_result(got, want));
    }
  }
}

TEST_CASE("no output path leaks account ids", "[historian]") {
  // Account ids are small integers; make the smallest one distinctive and
  // grep every rendered output for it.
  Harness h;
  for (int i = 0; i < 5; ++i) h.historian.create_account("filler" + std::to_string(i));
  AccountId jane = h.historian.create_account("jane");
  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");
  h.link(jane, jmobile, ymd(2000, 3, 2));
  AccountId james = h.historian.create_account("james");
  h.link(james, jmobile, ymd(2000, 9, 1));

  std::string needle = std::to_string(jane);
  auto r = h.historian.resolve(parse_historic_name("jmobile@yahoo.com?2000"),
                               ymd(2000, 10, 1));
  std::string line = r.to_line();
  // ordinals are #1/#2 regardless of the underlying ids
  CHECK(line.find("person#1") != std::string::npos);
  CHECK(line.find("id") == std::string::npos);
  CHECK(line.find("account") == std::string::npos);
  for (const auto& p :
       h.historian.list_association_periods(jmobile, ymd(2000, 10, 1)))
    CHECK((p.person_ordinal == 1 || p.person_ordinal == 2));
}
