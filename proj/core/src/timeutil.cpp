#include "spamlens/timeutil.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "spamlens/util.hpp"

namespace spamlens {
namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

int parse_fixed(const std::string& s, std::size_t pos, int width) {
  int v = 0;
  for (int i = 0; i < width; ++i) {
    const char c = pos + i < s.size() ? s[pos + i] : '\0';
    if (!is_digit(c)) return -1;
    v = v * 10 + (c - '0');
  }
  return v;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                       31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[m - 1];
}

}  // namespace

UtcSeconds parse_rfc3339(const std::string& s) {
  const auto fail = [&]() -> UtcSeconds {
    throw DataError("invalid RFC 3339 timestamp: '" + s + "'");
  };
  if (s.size() < 20) return fail();
  const int year = parse_fixed(s, 0, 4);
  if (year < 0 || s[4] != '-') return fail();
  const int month = parse_fixed(s, 5, 2);
  if (month < 1 || month > 12 || s[7] != '-') return fail();
  const int day = parse_fixed(s, 8, 2);
  if (day < 1 || s[10] != 'T' || day > static_cast<int>(days_in_month(year, month)))
    if (!(s[10] == 't' || s[10] == ' ') || day < 1 ||
        day > static_cast<int>(days_in_month(year, month)))
      return fail();
  const int hour = parse_fixed(s, 11, 2);
  const int minute = parse_fixed(s, 14, 2);
  const int second = parse_fixed(s, 17, 2);
  if (hour < 0 || hour > 23 || s[13] != ':' || minute < 0 || minute > 59 ||
      s[16] != ':' || second < 0 || second > 60)
    return fail();

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    if (pos >= s.size() || !is_digit(s[pos])) return fail();
    while (pos < s.size() && is_digit(s[pos])) ++pos;  // fraction truncated
  }
  if (pos >= s.size()) return fail();

  std::int64_t offset = 0;
  const char z = s[pos];
  if (z == 'Z' || z == 'z') {
    if (pos + 1 != s.size()) return fail();
  } else if (z == '+' || z == '-') {
    const int oh = parse_fixed(s, pos + 1, 2);
    const int om = parse_fixed(s, pos + 4, 2);
    if (oh < 0 || oh > 23 || om < 0 || om > 59 || pos + 3 >= s.size() ||
        s[pos + 3] != ':' || pos + 6 != s.size())
      return fail();
    offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
    if (z == '-') offset = -offset;
  } else {
    return fail();
  }

  const std::int64_t days = days_from_civil(year, month, day);
  const std::int64_t secs =
      days * 86400 + hour * 3600 + minute * 60 + std::min(second, 59);
  return secs - offset;
}

std::string format_rfc3339(UtcSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const int hh = static_cast<int>(rem / 3600);
  const int mm = static_cast<int>(rem % 3600 / 60);
  const int ss = static_cast<int>(rem % 60);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(y), m, d, hh, mm, ss);
  return buf;
}

}  // namespace spamlens
