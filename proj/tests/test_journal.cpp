// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <cstdio>
#include <fstream>
#include <random>

using namespace hints;
using namespace hints::testsupport;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date::from_ymd(y, m, d); }

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) { std::remove(path.c_str()); }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("empty journal rebuilds an empty historian", "[journal]") {
  TempFile f("journal_empty.log");
  Journal j = Journal::open(f.path);
  AcceptTransport t;
  SeededRng rng(1);
  Historian h(HistorianConfig{}, &t, &rng, &j);
  CHECK(h.snapshot_records().empty());
  CHECK(h.pending_challenges().empty());
}

TEST_CASE("replay reproduces the exact state", "[journal]") {
  TempFile f("journal_replay.log");
  Digest256 live_digest;
  {
    Journal j = Journal::open(f.path);
    AcceptTransport t;
    SeededRng rng(7);
    Historian h(HistorianConfig{}, &t, &rng, &j);
    AccountId a = h.create_account("s1", "display");
    AccountId b = h.create_account("s2");
    PrimaryName n1 = PrimaryName::parse("x@ns.example");
    PrimaryName n2 = PrimaryName::parse("y@ns.example");
    uint64_t c1 = h.request_link(a, n1, ymd(2000, 1, 1));
    h.confirm_link(c1, h.pending_challenges()[0].nonce, ymd(2000, 1, 2));
    uint64_t c2 = h.request_link(b, n2, ymd(2000, 2, 1));
    h.confirm_link(c2, h.pending_challenges()[0].nonce, ymd(2000, 2, 2));
    h.sever_link(a, n1, ymd(2000, 3, 1));
    h.request_link(b, n1, ymd(2000, 4, 1));  // left pending
    h.reestablish_sweep(ymd(2000, 4, 2));
    live_digest = h.state_digest();
  }
  {
    Journal j = Journal::open(f.path);
    AcceptTransport t;
    SeededRng rng(999);  // replay must not consult the rng
    Historian h(HistorianConfig{}, &t, &rng, &j);
    CHECK(h.state_digest() == live_digest);
    CHECK(h.indices_consistent());
    // replay sends nothing
    CHECK(t.sent.empty());
  }
  SECTION("replay is idempotent: a second reopen gives the same state") {
    Journal j = Journal::open(f.path);
    AcceptTransport t;
    SeededRng rng(0);
    Historian h(HistorianConfig{}, &t, &rng, &j);
    CHECK(h.state_digest() == live_digest);
  }
}

TEST_CASE("a flipped bit is CorruptJournal naming the line", "[journal]") {
  TempFile f("journal_corrupt.log");
  {
    Journal j = Journal::open(f.path);
    AcceptTransport t;
    SeededRng rng(3);
    Historian h(HistorianConfig{}, &t, &rng, &j);
    AccountId a = h.create_account("s1");
    uint64_t c = h.request_link(a, PrimaryName::parse("x@ns.example"), ymd(2000, 1, 1));
    h.confirm_link(c, h.pending_challenges()[0].nonce, ymd(2000, 1, 1));
  }
  // flip one bit inside the base64 payload of line 2
  std::ifstream in(f.path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  REQUIRE(lines.size() >= 2);
  lines[1][lines[1].size() - 2] ^= 0x01;
  std::ofstream out(f.path, std::ios::trunc);
  for (const auto& l : lines) out << l << "\n";
  out.close();

  try {
    Journal::read_all(f.path);
    FAIL("expected CorruptJournal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::corrupt_journal);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("ten thousand mutations survive kill and replay", "[journal][scale]") {
  TempFile f("journal_scale.log");
  std::mt19937_64 gen(20260811);
  std::vector<std::string> probes;
  std::vector<std::string> live_answers;
  Date now;
  {
    Journal j = Journal::open(f.path);
    AcceptTransport t;
    SeededRng rng(1);
    Historian h(HistorianConfig{}, &t, &rng, &j);
    std::vector<AccountId> accounts;
    for (int i = 0; i < 8; ++i)
      accounts.push_back(h.create_account("s" + std::to_string(i)));
    std::vector<PrimaryName> names;
    for (int i = 0; i < 30; ++i)
      names.push_back(PrimaryName("u" + std::to_string(i), "ns.example"));
    now = ymd(2000, 1, 1);
    while (j.size() < 10000) {
      now = now.plus_days(int(gen() % 9));
      AccountId acct = accounts[gen() % accounts.size()];
      PrimaryName name = names[gen() % names.size()];
      switch (gen() % 5) {
        case 0:
        case 1: {
          uint64_t c = h.request_link(acct, name, now);
          for (const auto& ch : h.pending_challenges())
            if (ch.id == c) {
              h.confirm_link(c, ch.nonce, now);
              break;
            }
          break;
        }
        case 2:
          h.sever_link(acct, name, now);
          break;
        case 3:
          h.reestablish_sweep(now);
          break;
        default:
          h.expire_challenges(now);
          break;
      }
    }
    for (int i = 0; i < 100; ++i) {
      PrimaryName name = names[gen() % names.size()];
      int year = 2000 + int(gen() % 3);
      HistoricName q{name, TimeDesignation::year_month(year, unsigned(1 + gen() % 12))};
      probes.push_back(q.to_string());
      live_answers.push_back(h.resolve(q, now).to_line());
    }
  }  // "kill": writer goes away without any shutdown step

  Journal j = Journal::open(f.path);
  REQUIRE(j.size() >= 10000);
  AcceptTransport t;
  SeededRng rng(77);
  Historian h(HistorianConfig{}, &t, &rng, &j);
  for (size_t i = 0; i < probes.size(); ++i) {
    CHECK(h.resolve(parse_historic_name(probes[i]), now).to_line() ==
          live_answers[i]);
  }
}
