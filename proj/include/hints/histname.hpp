// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "hints/date.hpp"
#include "hints/errors.hpp"

namespace hints {

// Grammar of the historic name space.
//
// Surface syntax:   local@namespace?YYYY[-MM[-DD]]
//
// The text form below is the wire form used everywhere: the service API,
// the CLI, scenario scripts, and the canonical encodings that get signed.
// parse/render round-trip exactly; render always produces the canonical
// (namespace-lowercased) form.

namespace detail {

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_label_char(char c) {
  return is_ascii_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c == '-';
}
inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace detail

// A primary name: an application identifier such as an email address, owned
// by the name-space provider for `namespace_part`, loaned to a person.
// Namespace comparison is case-insensitive (normalized to lowercase on
// construction); the local part is case-sensitive.
struct PrimaryName {
  std::string local;
  std::string namespace_part;

  PrimaryName() = default;
  PrimaryName(std::string_view loc, std::string_view ns) {
    if (loc.empty()) fail(Errc::malformed_name, "empty local part");
    for (char c : loc) {
      if (c == '@' || c == '?' || static_cast<unsigned char>(c) <= 0x20)
        fail(Errc::malformed_name, "bad character in local part");
    }
    local.assign(loc);
    namespace_part = normalize_namespace(ns);
  }

  static PrimaryName parse(std::string_view text) {
    size_t at = text.find('@');
    if (at == std::string_view::npos)
      fail(Errc::malformed_name, "missing '@': " + std::string(text));
    if (text.find('@', at + 1) != std::string_view::npos)
      fail(Errc::malformed_name, "more than one '@'");
    return PrimaryName(text.substr(0, at), text.substr(at + 1));
  }

  std::string to_string() const { return local + "@" + namespace_part; }

  auto operator<=>(const PrimaryName&) const = default;

 private:
  // Dotted labels of [A-Za-z0-9-], no empty label, no leading/trailing
  // hyphen in a label. Lowercased.
  static std::string normalize_namespace(std::string_view ns) {
    if (ns.empty()) fail(Errc::malformed_name, "empty namespace");
    std::string out;
    out.reserve(ns.size());
    size_t label_len = 0;
    char prev = '.';
    for (size_t i = 0; i < ns.size(); ++i) {
      char c = ns[i];
      if (c == '.') {
        if (label_len == 0) fail(Errc::malformed_name, "empty namespace label");
        if (prev == '-') fail(Errc::malformed_name, "label ends with '-'");
        label_len = 0;
      } else {
        if (!detail::is_label_char(c))
          fail(Errc::malformed_name, "bad character in namespace");
        if (label_len == 0 && c == '-')
          fail(Errc::malformed_name, "label starts with '-'");
        if (++label_len > 63) fail(Errc::malformed_name, "namespace label too long");
      }
      prev = c;
      out.push_back(detail::ascii_lower(c));
    }
    if (label_len == 0) fail(Errc::malformed_name, "empty namespace label");
    if (prev == '-') fail(Errc::malformed_name, "label ends with '-'");
    return out;
  }
};

enum class Granularity : uint8_t { year = 1, month = 2, day = 3 };

// A coarse time designation: an entire year, a year and a month, or a full
// date. Never finer than one day. Years before 1970 are rejected.
struct TimeDesignation {
  Granularity granularity = Granularity::year;
  int year = 1970;
  unsigned month = 1;  // meaningful when granularity >= month
  unsigned day = 1;    // meaningful when granularity == day

  static TimeDesignation whole_year(int y) {
    check_year(y);
    return {Granularity::year, y, 1, 1};
  }
  static TimeDesignation year_month(int y, unsigned m) {
    check_year(y);
    if (m < 1 || m > 12) fail(Errc::bad_date, "month out of range");
    return {Granularity::month, y, m, 1};
  }
  static TimeDesignation single_day(int y, unsigned m, unsigned d) {
    check_year(y);
    Date::from_ymd(y, m, d);  // validates
    return {Granularity::day, y, m, d};
  }
  static TimeDesignation on(Date d) {
    return single_day(d.year(), d.month(), d.day());
  }

  // The closed date interval covering exactly the designated year, month,
  // or single day.
  DateInterval interval() const {
    switch (granularity) {
      case Granularity::year:
        return {Date::from_ymd(year, 1, 1), Date::from_ymd(year, 12, 31)};
      case Granularity::month: {
        Date first = Date::from_ymd(year, month, 1);
        return {first, first.plus_months(1).plus_days(-1)};
      }
      case Granularity::day: {
        Date d = Date::from_ymd(year, month, day);
        return {d, d};
      }
    }
    fail(Errc::bad_date, "bad granularity");
  }

  std::string to_string() const {
    char buf[16];
    switch (granularity) {
      case Granularity::year:
        std::snprintf(buf, sizeof(buf), "%04d", year);
        break;
      case Granularity::month:
        std::snprintf(buf, sizeof(buf), "%04d-%02u", year, month);
        break;
      case Granularity::day:
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
        break;
    }
    return buf;
  }

  // "YYYY", "YYYY-MM" or "YYYY-MM-DD". Structural faults are MalformedName,
  // impossible calendar values are BadDate.
  static TimeDesignation parse(std::string_view text) {
    auto all_digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (!detail::is_ascii_digit(c)) return false;
      return true;
    };
    std::string_view y = text.substr(0, std::min<size_t>(4, text.size()));
    if (y.size() != 4 || !all_digits(y))
      fail(Errc::malformed_name, "expected 4-digit year");
    int yr = (y[0] - '0') * 1000 + (y[1] - '0') * 100 + (y[2] - '0') * 10 +
             (y[3] - '0');
    if (text.size() == 4) return whole_year(yr);
    if (text[4] != '-') fail(Errc::malformed_name, "expected '-' after year");
    std::string_view m = text.substr(5, std::min<size_t>(2, text.size() - 5));
    if (m.size() != 2 || !all_digits(m))
      fail(Errc::malformed_name, "expected 2-digit month");
    unsigned mo = static_cast<unsigned>((m[0] - '0') * 10 + (m[1] - '0'));
    if (text.size() == 7) return year_month(yr, mo);
    if (text[7] != '-') fail(Errc::malformed_name, "expected '-' after month");
    std::string_view d = text.substr(8);
    if (d.size() != 2 || !all_digits(d))
      fail(Errc::malformed_name, "expected 2-digit day");
    unsigned da = static_cast<unsigned>((d[0] - '0') * 10 + (d[1] - '0'));
    return single_day(yr, mo, da);
  }

  auto operator<=>(const TimeDesignation&) const = default;

 private:
  static void check_year(int y) {
    if (y < 1970 || y > 9999) fail(Errc::bad_date, "year out of range");
  }
};

// A historic name: a primary name qualified with a coarse time designation
// at which it validly named someone.
struct HistoricName {
  PrimaryName name;
  TimeDesignation when;

  std::string to_string() const {
    return name.to_string() + "?" + when.to_string();
  }

  auto operator<=>(const HistoricName&) const = default;
};

inline HistoricName parse_historic_name(std::string_view text) {
  size_t q = text.find('?');
  if (q == std::string_view::npos)
    fail(Errc::malformed_name, "missing '?': " + std::string(text));
  if (text.find('?', q + 1) != std::string_view::npos)
    fail(Errc::malformed_name, "more than one '?'");
  return HistoricName{PrimaryName::parse(text.substr(0, q)),
                      TimeDesignation::parse(text.substr(q + 1))};
}

inline DateInterval designation_interval(const TimeDesignation& d) {
  return d.interval();
}

inline std::string render_historic_name(const HistoricName& h) {
  return h.to_string();
}

}  // namespace hints
