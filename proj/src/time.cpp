#include "matmap/time.hpp"

#include "matmap/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace matmap {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

} // namespace

Time parse_seconds(std::string_view text) {
    const std::string_view original = text;
    auto fail = [&](const char* why) {
        throw_parse("invalid time \"" + std::string(original) + "\": " + why);
    };

    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) fail("missing digits");

    std::string_view whole = text;
    std::string_view frac;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        whole = text.substr(0, dot);
        frac = text.substr(dot + 1);
        if (frac.empty()) fail("trailing decimal point");
        if (frac.size() > 6) fail("at most 6 fractional digits (microsecond resolution)");
    }
    if (!all_digits(whole)) fail("seconds must be decimal digits");
    if (!frac.empty() && !all_digits(frac)) fail("fraction must be decimal digits");

    __int128 micros = 0;
    for (char c : whole) {
        micros = micros * 10 + (c - '0');
        if (micros > std::numeric_limits<std::int64_t>::max()) fail("out of range");
    }
    micros *= kMicrosPerSecond;

    std::int64_t frac_us = 0;
    std::int64_t scale = kMicrosPerSecond / 10;
    for (char c : frac) {
        frac_us += static_cast<std::int64_t>(c - '0') * scale;
        scale /= 10;
    }
    micros += frac_us;
    if (negative) micros = -micros;

    if (micros > std::numeric_limits<std::int64_t>::max() ||
        micros < std::numeric_limits<std::int64_t>::min()) {
        fail("out of range");
    }
    return Time{static_cast<std::int64_t>(micros)};
}

Time time_from_seconds(double seconds) {
    if (!std::isfinite(seconds)) throw_invalid("time must be finite");
    const double scaled = seconds * static_cast<double>(kMicrosPerSecond);
    // Margin below INT64_MAX so llround cannot leave the representable range.
    if (std::abs(scaled) >= 9.2e18) throw_invalid("time out of range");
    return Time{std::llround(scaled)};
}

std::string format_seconds(Time t) {
    const bool negative = t.us < 0;
    // Avoid overflow on INT64_MIN by negating in unsigned space.
    std::uint64_t magnitude = negative
        ? ~static_cast<std::uint64_t>(t.us) + 1
        : static_cast<std::uint64_t>(t.us);

    const std::uint64_t whole = magnitude / kMicrosPerSecond;
    std::uint64_t frac = magnitude % kMicrosPerSecond;

    std::string out;
    if (negative) out.push_back('-');
    out += std::to_string(whole);
    if (frac != 0) {
        char digits[7];
        for (int i = 5; i >= 0; --i) {
            digits[i] = static_cast<char>('0' + frac % 10);
            frac /= 10;
        }
        digits[6] = '\0';
        std::string_view fv(digits, 6);
        while (fv.back() == '0') fv.remove_suffix(1);
        out.push_back('.');
        out += fv;
    }
    return out;
}

} // namespace matmap
