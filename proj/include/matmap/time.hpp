#ifndef MATMAP_TIME_HPP
#define MATMAP_TIME_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace matmap {

/// Instant or span on the simulation clock, in signed integer microseconds.
///
/// All internal arithmetic is exact integer arithmetic; nothing is ever
/// rounded inside the core. Decimal seconds appear only at the I/O boundary:
/// `parse_seconds` accepts at most six fractional digits (finer text is an
/// error, never silently rounded), while `time_from_seconds` converts a
/// floating-point value by rounding half away from zero.
struct Time {
    std::int64_t us = 0;

    friend constexpr auto operator<=>(const Time&, const Time&) = default;
};

/// Strict decimal-seconds parser for file and flag input.
/// Grammar: [+-] digits [ '.' digits{1,6} ]. Anything else, including a
/// seventh fractional digit, is rejected with a parse error.
Time parse_seconds(std::string_view text);

/// Converts floating-point seconds to microseconds, rounding half away from
/// zero. Rejects NaN, infinities and values outside the representable range.
Time time_from_seconds(double seconds);

/// Exact decimal rendering of `t` in seconds, trailing zeros trimmed
/// ("20", "-0.5", "0.000001"). Inverse of parse_seconds.
std::string format_seconds(Time t);

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;

} // namespace matmap

#endif
