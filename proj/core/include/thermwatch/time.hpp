// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace thermwatch {

/// UTC instant with one-second resolution.
using Instant = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

inline constexpr Seconds kDay{86400};

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Instant t);

/// Parses `YYYY-MM-DDTHH:MM:SSZ` (the `Z` suffix is mandatory). Throws ParseError.
Instant parse_iso8601(std::string_view text);

/// Seconds since UTC midnight, in [0, 86400).
Seconds time_of_day(Instant t);

inline Instant from_unix(long long secs) { return Instant{Seconds{secs}}; }
inline long long to_unix(Instant t) { return t.time_since_epoch().count(); }

}  // namespace thermwatch
