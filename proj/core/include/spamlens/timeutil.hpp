#pragma once

#include <cstdint>
#include <string>

namespace spamlens {

/// Seconds since the Unix epoch, UTC. Sub-second precision is not kept;
/// RFC 3339 fractional seconds are truncated on parse.
using UtcSeconds = std::int64_t;

/// Parses an RFC 3339 timestamp ("2020-01-01T00:00:00Z", offsets and
/// fractional seconds accepted). Throws DataError on malformed input.
UtcSeconds parse_rfc3339(const std::string& s);

/// Renders a timestamp as "YYYY-MM-DDThh:mm:ssZ".
std::string format_rfc3339(UtcSeconds t);

inline double days_between(UtcSeconds from, UtcSeconds to) {
  return static_cast<double>(to - from) / 86400.0;
}

}  // namespace spamlens
