#ifndef MATMAP_AGGREGATOR_HPP
#define MATMAP_AGGREGATOR_HPP

#include "matmap/composition.hpp"
#include "matmap/time.hpp"
#include "matmap/unit.hpp"

#include <cstdint>
#include <vector>

namespace matmap {

/// The whole monitoring network: units ordered by ascending id plus the
/// shared composition registry. Immutable once built.
struct Network {
    CompositionRegistry registry;
    std::vector<VisionUnit> units;
};

/// Validates and normalizes a network: sorts units by id, rejects duplicate
/// ids, and checks every scheduled class has a registered composition.
Network make_network(CompositionRegistry registry, std::vector<VisionUnit> units);

/// Exact piecewise-constant network stock trajectory.
///
/// `plateaus` has one entry per interval between consecutive breakpoints,
/// including the two unbounded end intervals (both all-zero), so
/// plateaus.size() == breakpoints.size() + 1. `boundary_values[k]` is the
/// exact evaluation at breakpoints[k], where window edges contribute their
/// half level; it is kept separate from the plateaus rather than folded in.
struct StockSeries {
    std::vector<Time> breakpoints;           // ascending, unique
    std::vector<MassVector> plateaus;        // psi-length each
    std::vector<MassVector> boundary_values; // psi-length each
};

/// One step of one material stock: delta = plateau after - plateau before.
struct StockEvent {
    Time time;
    std::int32_t material = 0;  // material id, 1-based
    double delta_kg = 0.0;      // never zero

    friend bool operator==(const StockEvent&, const StockEvent&) = default;
};

/// One row of the spatial material map.
struct SpatialRow {
    std::int32_t unit_id = 0;
    Location location;
    MassVector stock_kg;
};

/// One exact sample of the series; `at_breakpoint` flags grid times that hit
/// a window edge, where the value is the half-level boundary evaluation.
struct Sample {
    Time time;
    bool at_breakpoint = false;
    MassVector value;
};

/// Central-database aggregation: the sum of unit_stock over all units at
/// instant `t`, accumulated in ascending unit-id order.
MassVector network_stock(const Network& net, Time t);

/// Builds the exact event-driven representation: merged breakpoints of all
/// units, plateau vectors evaluated at interval midpoints, boundary vectors
/// evaluated at the breakpoints themselves.
///
/// With `parallel` set, per-unit evaluation fans out across threads; the
/// reduction still runs in ascending unit-id order, so the result is
/// bit-identical to the serial path.
StockSeries stock_series(const Network& net, bool parallel = false);

/// All nonzero plateau changes, ascending by time then material id.
std::vector<StockEvent> stock_events(const Network& net);
std::vector<StockEvent> stock_events(const StockSeries& series);

/// Exact evaluation on the grid t0, t0+step, ... <= t1. Requires t0 <= t1 and
/// step > 0.
std::vector<Sample> sample_series(const StockSeries& series, Time t0, Time t1, Time step);

/// Closed-form integral of each material stock over all time, in kg*s:
/// every pulse contributes its duration times the class composition.
MassVector mass_time_integral(const Network& net);

/// Per-unit stock at instant `t` with unit locations attached, ascending by
/// unit id. Summing the rows reproduces network_stock(net, t) exactly.
std::vector<SpatialRow> spatial_map(const Network& net, Time t, bool parallel = false);

} // namespace matmap

#endif
