// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "hints/histname.hpp"

#include <random>

using namespace hints;

TEST_CASE("historic name grammar", "[histname]") {
  SECTION("month designation") {
    HistoricName h = parse_historic_name("jmobile@yahoo.com?2000-03");
    CHECK(h.name.local == "jmobile");
    CHECK(h.name.namespace_part == "yahoo.com");
    CHECK(h.when.granularity == Granularity::month);
    CHECK(h.when.year == 2000);
    CHECK(h.when.month == 3);
    CHECK(h.to_string() == "jmobile@yahoo.com?2000-03");
  }

  SECTION("whole year designation") {
    HistoricName h = parse_historic_name("a@b.org?1999");
    CHECK(h.when.granularity == Granularity::year);
    CHECK(h.when.interval() ==
          DateInterval{Date::from_ymd(1999, 1, 1), Date::from_ymd(1999, 12, 31)});
  }

  SECTION("impossible month is BadDate") {
    try {
      parse_historic_name("a@b.org?2000-13");
      FAIL("expected BadDate");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_date);
    }
  }

  SECTION("February 30 is BadDate") {
    CHECK_THROWS_AS(parse_historic_name("a@b.org?2001-02-30"), Error);
    try {
      parse_historic_name("a@b.org?2001-02-30");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_date);
    }
  }

  SECTION("structural faults are MalformedName") {
    for (const char* bad :
         {"a@b.org", "ab.org?1999", "a@b@c.org?1999", "a@b.org?99",
          "a@b.org?1999-1", "@b.org?1999", "a@?1999", "a@b..org?1999",
          "a@b.org?1999?2000", "a b@c.org?1999", "a@b.org?1999-02-1"}) {
      INFO(bad);
      try {
        parse_historic_name(bad);
        FAIL("expected MalformedName");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::malformed_name);
      }
    }
  }

  SECTION("pre-1970 years rejected") {
    try {
      parse_historic_name("a@b.org?1969");
      FAIL("expected BadDate");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_date);
    }
  }
}

TEST_CASE("designation intervals", "[histname]") {
  CHECK(TimeDesignation::whole_year(2000).interval() ==
        DateInterval{Date::from_ymd(2000, 1, 1), Date::from_ymd(2000, 12, 31)});
  // leap-year February, cross-checked against the calendar below
  CHECK(TimeDesignation::year_month(2000, 2).interval() ==
        DateInterval{Date::from_ymd(2000, 2, 1), Date::from_ymd(2000, 2, 29)});
  CHECK(TimeDesignation::year_month(2001, 2).interval().last ==
        Date::from_ymd(2001, 2, 28));
  CHECK(TimeDesignation::single_day(1999, 8, 9).interval() ==
        DateInterval{Date::from_ymd(1999, 8, 9), Date::from_ymd(1999, 8, 9)});

  SECTION("month lengths agree with a day-counting oracle") {
    // Oracle: walk days one at a time and count how many fall in the month.
    for (int y : {1999, 2000, 2004, 2100}) {
      for (unsigned m = 1; m <= 12; ++m) {
        DateInterval iv = TimeDesignation::year_month(y, m).interval();
        int count = 0;
        for (Date d = Date::from_ymd(y, 1, 1); d <= Date::from_ymd(y, 12, 31);
             d = d.plus_days(1)) {
          if (d.year() == y && d.month() == m) ++count;
        }
        CHECK(iv.length_days() == count);
      }
    }
  }

  SECTION("day within month within year") {
    auto day = TimeDesignation::single_day(2000, 2, 29).interval();
    auto month = TimeDesignation::year_month(2000, 2).interval();
    auto year = TimeDesignation::whole_year(2000).interval();
    CHECK(month.contains(day.first));
    CHECK(year.contains(month.first));
    CHECK(year.contains(month.last));
  }
}

TEST_CASE("rendering is canonical", "[histname]") {
  HistoricName h{PrimaryName("jmobile", "yahoo.com"),
                 TimeDesignation::year_month(2000, 3)};
  CHECK(render_historic_name(h) == "jmobile@yahoo.com?2000-03");

  HistoricName upper{PrimaryName("a", "B.ORG"), TimeDesignation::whole_year(1999)};
  CHECK(render_historic_name(upper) == "a@b.org?1999");

  // local part stays case-sensitive
  HistoricName local{PrimaryName("Ab", "b.org"), TimeDesignation::whole_year(1999)};
  CHECK(render_historic_name(local) == "Ab@b.org?1999");
}

TEST_CASE("parse/render round-trip on random names", "[histname][property]") {
  std::mt19937_64 gen(20260811);
  auto rand_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  };
  static const char* locals = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJ0123456789._+-";
  static const char* labels = "abcdefghijklmnopqrstuvwxyz0123456789";

  for (int i = 0; i < 1000; ++i) {
    std::string local;
    int ln = rand_int(1, 12);
    for (int j = 0; j < ln; ++j) local.push_back(locals[rand_int(0, 49)]);
    std::string ns;
    int nlabels = rand_int(1, 3);
    for (int j = 0; j < nlabels; ++j) {
      if (j) ns.push_back('.');
      int ll = rand_int(1, 8);
      for (int k = 0; k < ll; ++k) ns.push_back(labels[rand_int(0, 35)]);
    }
    TimeDesignation when;
    int y = rand_int(1970, 2100);
    switch (rand_int(0, 2)) {
      case 0: when = TimeDesignation::whole_year(y); break;
      case 1: when = TimeDesignation::year_month(y, rand_int(1, 12)); break;
      default: {
        unsigned m = static_cast<unsigned>(rand_int(1, 12));
        DateInterval iv = TimeDesignation::year_month(y, m).interval();
        when = TimeDesignation::single_day(
            y, m, static_cast<unsigned>(rand_int(1, iv.length_days())));
      }
    }
    HistoricName h{PrimaryName(local, ns), when};
    HistoricName back = parse_historic_name(render_historic_name(h));
    REQUIRE(back == h);
    REQUIRE(render_historic_name(back) == render_historic_name(h));
  }
}

TEST_CASE("designation overlap matches interval overlap", "[histname][property]") {
  std::mt19937_64 gen(7);
  auto rand_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  };
  auto random_designation = [&]() {
    int y = rand_int(1999, 2003);
    switch (rand_int(0, 2)) {
      case 0: return TimeDesignation::whole_year(y);
      case 1: return TimeDesignation::year_month(y, rand_int(1, 12));
      default: return TimeDesignation::single_day(y, rand_int(1, 12), rand_int(1, 28));
    }
  };
  for (int i = 0; i < 2000; ++i) {
    TimeDesignation a = random_designation();
    TimeDesignation b = random_designation();
    bool shared_day = false;
    DateInterval ia = a.interval(), ib = b.interval();
    for (Date d = ia.first; d <= ia.last; d = d.plus_days(1)) {
      if (ib.contains(d)) {
        shared_day = true;
        break;
      }
    }
    REQUIRE(ia.overlaps(ib) == shared_day);
  }
}

TEST_CASE("date arithmetic", "[date]") {
  CHECK(Date::from_ymd(2000, 5, 1).plus_months(2) == Date::from_ymd(2000, 7, 1));
  CHECK(Date::from_ymd(2000, 3, 2).plus_months(2) == Date::from_ymd(2000, 5, 2));
  CHECK(Date::from_ymd(2000, 1, 31).plus_months(1) == Date::from_ymd(2000, 2, 29));
  CHECK(Date::from_ymd(2001, 1, 31).plus_months(1) == Date::from_ymd(2001, 2, 28));
  CHECK(Date::from_ymd(2000, 7, 1).plus_months(-2) == Date::from_ymd(2000, 5, 1));
  CHECK(Date::parse("1999-08-09") == Date::from_ymd(1999, 8, 9));
  CHECK(Date::from_ymd(1999, 8, 9).to_string() == "1999-08-09");
  CHECK(advance(Date::from_ymd(2000, 5, 1), Duration{2, 0}) ==
        Date::from_ymd(2000, 7, 1));
  CHECK(advance(Date::from_ymd(2000, 7, 1), Duration{0, -2}) ==
        Date::from_ymd(2000, 6, 29));
  CHECK_THROWS_AS(Date::parse("2000-2-01"), Error);
  CHECK_THROWS_AS(Date::from_ymd(2001, 2, 29), Error);
}
