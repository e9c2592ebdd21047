#ifndef MATMAP_UNIT_HPP
#define MATMAP_UNIT_HPP

#include "matmap/composition.hpp"
#include "matmap/signal.hpp"
#include "matmap/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace matmap {

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Where a unit sits: planar site coordinates in meters, plus an optional
/// geographic tag for units that know their GPS fix.
struct Location {
    double x_m = 0.0;
    double y_m = 0.0;
    std::optional<GeoPoint> geo;

    friend bool operator==(const Location&, const Location&) = default;
};

/// Throws on non-finite coordinates or a geo tag outside
/// lat [-90,90] / lon [-180,180].
void validate_location(const Location& loc);

/// Detection windows per object class, keyed by class id. The map keeps class
/// ids ascending, which fixes the summation order everywhere downstream.
/// A class may carry any number of pulses, including overlapping ones: each
/// open window counts as one simultaneously detected object, so the class's
/// detection signal is the sum of its pulse levels.
using DetectionSchedule = std::map<std::int32_t, std::vector<RectPulse>>;

/// One networked vision unit: identity, location, and what it detected when.
/// Immutable after scenario load; all operations on it are pure.
struct VisionUnit {
    std::int32_t id = 0;
    Location location;
    DetectionSchedule schedule;

    friend bool operator==(const VisionUnit&, const VisionUnit&) = default;
};

/// Material masses detected by the unit at instant `t`: the composition of
/// each scheduled class weighted by that class's detection signal. Summation
/// runs in ascending (class id, pulse index) order so results are
/// bit-reproducible. Throws if the schedule references an unregistered class.
MassVector unit_stock(const VisionUnit& unit, const CompositionRegistry& registry, Time t);

/// Union of all pulse edges across the schedule, ascending and deduplicated;
/// exactly the instants where unit_stock can change.
std::vector<Time> unit_breakpoints(const VisionUnit& unit);

/// Class-substitution error model: row c gives the probability of a detection
/// whose true class is c being reported as each class. Relabeling is applied
/// per detection event with a seeded deterministic generator.
struct ConfusionModel {
    std::vector<std::vector<double>> matrix;  // q x q, row-stochastic
    std::uint64_t seed = 0;

    friend bool operator==(const ConfusionModel&, const ConfusionModel&) = default;
};

/// Throws unless `matrix` is q x q with entries in [0,1] and rows summing to 1
/// within 1e-12.
void validate_confusion(const ConfusionModel& model, std::size_t class_count);

/// Returns a unit whose pulses keep their windows but carry resampled class
/// labels, each drawn from the confusion row of the pulse's true class.
/// Pure function of (unit, matrix, seed): identical inputs give the identical
/// relabeling on every run and platform.
VisionUnit apply_confusion(const VisionUnit& unit, const ConfusionModel& model);

namespace detail {

/// unit_stock on the half-microsecond grid (see signal.hpp).
MassVector unit_stock_half_ticks(const VisionUnit& unit, const CompositionRegistry& registry,
                                 HalfTicks t2);

} // namespace detail

} // namespace matmap

#endif
