// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/time.hpp"

#include <charconv>
#include <cstdio>

#include "thermwatch/errors.hpp"

namespace thermwatch {

namespace chr = std::chrono;

std::string format_iso8601(Instant t) {
  const auto day = chr::floor<chr::days>(t);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()) % 100u, static_cast<unsigned>(ymd.day()) % 100u,
                static_cast<int>(hms.hours().count()) % 100, static_cast<int>(hms.minutes().count()) % 100,
                static_cast<int>(hms.seconds().count()) % 100);
  return buf;
}

namespace {

int field(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || *first == '-' || *first == '+') {
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Instant parse_iso8601(std::string_view text) {
  // 2024-06-01T12:34:56Z
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  }
  const chr::year_month_day ymd{chr::year{field(text, 0, 4)},
                                chr::month{static_cast<unsigned>(field(text, 5, 2))},
                                chr::day{static_cast<unsigned>(field(text, 8, 2))}};
  const int hh = field(text, 11, 2);
  const int mm = field(text, 14, 2);
  const int ss = field(text, 17, 2);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
    throw ParseError("timestamp out of range '" + std::string(text) + "'");
  }
  return chr::sys_days{ymd} + chr::hours{hh} + chr::minutes{mm} + Seconds{ss};
}

Seconds time_of_day(Instant t) { return t - chr::floor<chr::days>(t); }

}  // namespace thermwatch
