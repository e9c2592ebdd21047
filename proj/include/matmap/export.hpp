#ifndef MATMAP_EXPORT_HPP
#define MATMAP_EXPORT_HPP

#include "matmap/aggregator.hpp"
#include "matmap/time.hpp"

#include <string>

namespace matmap {

/// Canonical kg rendering: up to 9 significant decimals, trailing zeros
/// trimmed, locale independent, so exact values like 0.5 print exactly.
/// Every exported number goes through this or the integer path; repeated
/// runs therefore produce byte-identical files.
std::string format_kg(double kg);

/// Event-driven series export. One row per exact evaluation of the network
/// stock: every breakpoint (carrying its edge half-values) plus an interior
/// instant of every finite inter-breakpoint interval (carrying the plateau).
/// Intervals one microsecond wide have no interior instant and get no row.
/// Columns: t_us, then one kg column per material.
std::string render_series_csv(const Network& net, const StockSeries& series);

/// Sampled series export over the grid t0, t0+step, ... <= t1; same columns.
std::string render_series_sampled_csv(const Network& net, const StockSeries& series,
                                      Time t0, Time t1, Time step);

/// Stock change log: t_us, material (id), delta_kg, tau_after_kg.
std::string render_events_csv(const Network& net, const StockSeries& series, bool header);
std::string render_events_json(const Network& net, const StockSeries& series);

/// Per-unit material map at instant t: unit_id, x_m, y_m, lat/lon columns when
/// any unit carries a geo tag, then one kg column per material.
std::string render_map_csv(const Network& net, Time t, bool parallel = false);
std::string render_map_json(const Network& net, Time t, bool parallel = false);

/// Human-readable run summary: network shape, event counts, and the
/// mass-time integral per material. Deterministic; no timestamps.
std::string render_summary(const Network& net, const StockSeries& series);

} // namespace matmap

#endif
