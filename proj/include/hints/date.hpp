// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "hints/errors.hpp"

namespace hints {

// Calendar date at day granularity (proleptic Gregorian), stored as days
// since 1970-01-01. All timestamps in the system are dates; the model
// assumes clocks agree on what day it is.
//
// Value type, safe to copy and compare across threads.
class Date {
 public:
  constexpr Date() = default;

  static Date from_ymd(int year, unsigned month, unsigned day) {
    auto d = try_from_ymd(year, month, day);
    if (!d) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
      fail(Errc::bad_date, buf);
    }
    return *d;
  }

  static std::optional<Date> try_from_ymd(int year, unsigned month,
                                          unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year},
                                    std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) return std::nullopt;
    return Date(static_cast<int32_t>(
        std::chrono::sys_days{ymd}.time_since_epoch().count()));
  }

  // Parse strictly as "YYYY-MM-DD".
  static Date parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
      fail(Errc::bad_date, "expected YYYY-MM-DD: " + std::string(iso));
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
      if (iso[i] < '0' || iso[i] > '9')
        fail(Errc::bad_date, "expected YYYY-MM-DD: " + std::string(iso));
    int y = (iso[0] - '0') * 1000 + (iso[1] - '0') * 100 +
            (iso[2] - '0') * 10 + (iso[3] - '0');
    unsigned m = static_cast<unsigned>((iso[5] - '0') * 10 + (iso[6] - '0'));
    unsigned d = static_cast<unsigned>((iso[8] - '0') * 10 + (iso[9] - '0'));
    return from_ymd(y, m, d);
  }

  static constexpr Date from_days(int32_t days) { return Date(days); }

  constexpr int32_t days_since_epoch() const { return days_; }

  int year() const { return static_cast<int>(ymd().year()); }
  unsigned month() const { return static_cast<unsigned>(ymd().month()); }
  unsigned day() const { return static_cast<unsigned>(ymd().day()); }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
  }

  constexpr Date plus_days(int n) const { return Date(days_ + n); }

  // Calendar month arithmetic with day-of-month clamping
  // (2000-01-31 + 1 month = 2000-02-29). Negative n steps backwards.
  Date plus_months(int n) const {
    auto cur = ymd();
    int linear = year() * 12 + static_cast<int>(month()) - 1 + n;
    int y = linear / 12;
    int m = linear % 12;
    if (m < 0) {
      m += 12;
      y -= 1;
    }
    std::chrono::year_month ym{std::chrono::year{y},
                               std::chrono::month{static_cast<unsigned>(m + 1)}};
    unsigned last =
        static_cast<unsigned>(std::chrono::year_month_day_last{
                                  ym.year(), std::chrono::month_day_last{ym.month()}}
                                  .day());
    unsigned d = std::min(static_cast<unsigned>(cur.day()), last);
    return from_ymd(y, static_cast<unsigned>(m + 1), d);
  }

  auto operator<=>(const Date&) const = default;

 private:
  explicit constexpr Date(int32_t days) : days_(days) {}
  std::chrono::year_month_day ymd() const {
    return std::chrono::year_month_day{
        std::chrono::sys_days{std::chrono::days{days_}}};
  }

  int32_t days_ = 0;  // 1970-01-01
};

// Calendar duration applied months-first, then days. Both components may be
// negative (used when stepping back from an expiration to its reconfirmation
// due date).
struct Duration {
  int months = 0;
  int days = 0;

  constexpr bool positive() const { return months > 0 || (months == 0 && days > 0); }
  constexpr Duration negated() const { return {-months, -days}; }
  bool operator==(const Duration&) const = default;
};

inline Date advance(Date d, Duration by) {
  return d.plus_months(by.months).plus_days(by.days);
}

// Closed interval of calendar days, first <= last.
struct DateInterval {
  Date first;
  Date last;

  DateInterval() = default;
  DateInterval(Date f, Date l) : first(f), last(l) {
    if (last < first) fail(Errc::bad_date, "interval ends before it starts");
  }

  bool contains(Date d) const { return first <= d && d <= last; }
  bool overlaps(const DateInterval& o) const {
    return first <= o.last && o.first <= last;
  }
  std::optional<DateInterval> intersect(const DateInterval& o) const {
    Date f = std::max(first, o.first);
    Date l = std::min(last, o.last);
    if (l < f) return std::nullopt;
    return DateInterval{f, l};
  }
  int length_days() const {
    return last.days_since_epoch() - first.days_since_epoch() + 1;
  }
  bool operator==(const DateInterval&) const = default;
};

}  // namespace hints
