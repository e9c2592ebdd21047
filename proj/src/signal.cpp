#include "matmap/signal.hpp"

#include "matmap/error.hpp"

#include <limits>

namespace matmap {

namespace {

using detail::HalfTicks;

HalfTicks abs128(HalfTicks v) { return v < 0 ? -v : v; }

// Compares twice the distance from the window center against the duration;
// equality is the exact edge case.
PulseLevel level_from_twice_distance(HalfTicks twice_distance, std::int64_t duration_us) {
    if (twice_distance < duration_us) return PulseLevel::one;
    if (twice_distance == duration_us) return PulseLevel::half;
    return PulseLevel::zero;
}

} // namespace

RectPulse RectPulse::make(Time center, Time duration) {
    if (duration.us <= 0) {
        throw_invalid("pulse duration must be positive, got " + format_seconds(duration) + " s");
    }
    if (duration.us % 2 != 0) {
        throw_invalid("pulse duration must be an even number of microseconds so the "
                      "window edges are exact instants, got " + format_seconds(duration) + " s");
    }
    const HalfTicks lo = static_cast<HalfTicks>(center.us) - duration.us / 2;
    const HalfTicks hi = static_cast<HalfTicks>(center.us) + duration.us / 2;
    if (lo < std::numeric_limits<std::int64_t>::min() ||
        hi > std::numeric_limits<std::int64_t>::max()) {
        throw_invalid("pulse support exceeds the representable time range");
    }
    return RectPulse{center, duration};
}

PulseLevel rect(Time t, Time width) {
    if (width.us <= 0) {
        throw_domain("rect width must be positive, got " + format_seconds(width) + " s");
    }
    return level_from_twice_distance(abs128(static_cast<HalfTicks>(t.us)) * 2, width.us);
}

PulseLevel pulse_value(const RectPulse& p, Time t) {
    return detail::level_at_half_ticks(p, detail::to_half_ticks(t));
}

std::pair<Time, Time> pulse_support(const RectPulse& p) {
    const std::int64_t half = p.duration.us / 2;
    return {Time{p.center.us - half}, Time{p.center.us + half}};
}

std::array<Time, 2> pulse_breakpoints(const RectPulse& p) {
    auto [lo, hi] = pulse_support(p);
    return {lo, hi};
}

namespace detail {

PulseLevel level_at_half_ticks(const RectPulse& p, HalfTicks t2) {
    return level_from_twice_distance(abs128(t2 - to_half_ticks(p.center)), p.duration.us);
}

} // namespace detail

} // namespace matmap
