#pragma once

// ISO-8601 timestamps with an explicit UTC offset, e.g. 2024-10-01T00:00:00-04:00.
//
// Stored as (seconds since Unix epoch, offset minutes). Ordering and spacing
// checks use the epoch value, so a series that crosses a DST changeover is
// still hourly if the instants are 3600 s apart. The offset is kept purely so
// that serialization reproduces the input text.
//
// Civil <-> day-count conversions follow Howard Hinnant's well known
// chronology algorithms (exact over the proleptic Gregorian calendar).

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "essmei/errors.hpp"

namespace essmei {

namespace detail {

constexpr int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

struct CivilDate {
  int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(int64_t z) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {y + (m <= 2), m, d};
}

inline bool parse_fixed_uint(std::string_view s, size_t pos, size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

struct Timestamp {
  int64_t epoch_seconds = 0;  // instant, UTC
  int offset_minutes = 0;     // local - UTC, for round-trip formatting

  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.epoch_seconds == b.epoch_seconds && a.offset_minutes == b.offset_minutes;
  }
  friend bool operator<(const Timestamp& a, const Timestamp& b) {
    return a.epoch_seconds < b.epoch_seconds;
  }
};

// Accepts YYYY-MM-DDThh:mm:ss followed by Z or +hh:mm / -hh:mm.
inline Timestamp parse_timestamp(std::string_view s) {
  auto fail = [&]() -> Timestamp {
    raise(ErrorKind::InvalidValue, "malformed timestamp '" + std::string(s) + "'");
  };

  unsigned year, month, day, hour, minute, second;
  if (s.size() < 20) return fail();
  if (!detail::parse_fixed_uint(s, 0, 4, year) || s[4] != '-' ||
      !detail::parse_fixed_uint(s, 5, 2, month) || s[7] != '-' ||
      !detail::parse_fixed_uint(s, 8, 2, day) || s[10] != 'T' ||
      !detail::parse_fixed_uint(s, 11, 2, hour) || s[13] != ':' ||
      !detail::parse_fixed_uint(s, 14, 2, minute) || s[16] != ':' ||
      !detail::parse_fixed_uint(s, 17, 2, second)) {
    return fail();
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 59) {
    return fail();
  }

  int offset_minutes = 0;
  std::string_view rest = s.substr(19);
  if (rest == "Z") {
    offset_minutes = 0;
  } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
    unsigned oh, om;
    if (!detail::parse_fixed_uint(rest, 1, 2, oh) || !detail::parse_fixed_uint(rest, 4, 2, om) ||
        oh > 18 || om > 59) {
      return fail();
    }
    offset_minutes = static_cast<int>(oh * 60 + om);
    if (rest[0] == '-') offset_minutes = -offset_minutes;
  } else {
    return fail();
  }

  const int64_t days = detail::days_from_civil(year, month, day);
  const int64_t local_seconds = days * 86400 + hour * 3600 + minute * 60 + second;
  return Timestamp{local_seconds - static_cast<int64_t>(offset_minutes) * 60, offset_minutes};
}

inline std::string format_timestamp(const Timestamp& ts) {
  const int64_t local = ts.epoch_seconds + static_cast<int64_t>(ts.offset_minutes) * 60;
  int64_t days = local / 86400;
  int64_t sod = local % 86400;
  if (sod < 0) {
    sod += 86400;
    --days;
  }
  const auto date = detail::civil_from_days(days);
  const unsigned hour = static_cast<unsigned>(sod / 3600);
  const unsigned minute = static_cast<unsigned>(sod % 3600 / 60);
  const unsigned second = static_cast<unsigned>(sod % 60);

  char buf[64];
  const int off = ts.offset_minutes < 0 ? -ts.offset_minutes : ts.offset_minutes;
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02u:%02u:%02u%c%02d:%02d",
                static_cast<long long>(date.year), date.month, date.day, hour, minute, second,
                ts.offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
  return buf;
}

}  // namespace essmei
