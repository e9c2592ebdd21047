#ifndef MATMAP_SIGNAL_HPP
#define MATMAP_SIGNAL_HPP

#include "matmap/time.hpp"

#include <array>
#include <compare>
#include <utility>

namespace matmap {

/// Value of the rectangular detection function at one instant. Exactly three
/// levels exist: 1 strictly inside the window, 1/2 on either edge, 0 outside.
/// The edge level is a first-class value, not a float that happens to be 0.5,
/// so boundary semantics stay exact and testable.
enum class PulseLevel { zero, half, one };

constexpr double to_double(PulseLevel level) {
    switch (level) {
        case PulseLevel::half: return 0.5;
        case PulseLevel::one: return 1.0;
        default: return 0.0;
    }
}

/// Level expressed in half-units (0, 1 or 2); lets callers accumulate pulse
/// levels in integer arithmetic.
constexpr int half_count(PulseLevel level) {
    switch (level) {
        case PulseLevel::half: return 1;
        case PulseLevel::one: return 2;
        default: return 0;
    }
}

/// One detection window: a rectangular impulse of the given duration centered
/// at `center`. Support is exactly [center - duration/2, center + duration/2].
/// Durations must be strictly positive and even in microseconds so the
/// half-duration edge is an exact instant; both edges must be representable.
struct RectPulse {
    Time center;
    Time duration;

    friend constexpr auto operator<=>(const RectPulse&, const RectPulse&) = default;

    /// Validating factory; throws ErrorKind::invalid on a bad duration.
    static RectPulse make(Time center, Time duration);
};

/// The rectangular function: 1 if |t/width| < 1/2, 1/2 if |t/width| = 1/2,
/// 0 otherwise. `width` must be positive (ErrorKind::domain otherwise).
PulseLevel rect(Time t, Time width);

/// Level of pulse `p` at instant `t`, i.e. rect(t - center, duration).
PulseLevel pulse_value(const RectPulse& p, Time t);

/// Closed support [first, last] of the pulse.
std::pair<Time, Time> pulse_support(const RectPulse& p);

/// The two instants where the pulse level changes, ascending.
std::array<Time, 2> pulse_breakpoints(const RectPulse& p);

namespace detail {

/// 128-bit clock used for interval midpoints, which sit on the half-microsecond
/// grid. One tick = 0.5 us, so an instant t is represented as 2*t.us.
using HalfTicks = __int128;

constexpr HalfTicks to_half_ticks(Time t) {
    return static_cast<HalfTicks>(t.us) * 2;
}

/// Exact pulse level at a half-tick instant. All series evaluation funnels
/// through this single comparison.
PulseLevel level_at_half_ticks(const RectPulse& p, HalfTicks t2);

} // namespace detail

} // namespace matmap

#endif
