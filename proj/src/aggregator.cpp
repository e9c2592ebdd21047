#include "matmap/aggregator.hpp"

#include "matmap/error.hpp"
#include "matmap/signal.hpp"

#include <algorithm>
#include <cstddef>
#include <thread>
#include <utility>

namespace matmap {

namespace {

using detail::HalfTicks;

void add_into(MassVector& acc, const MassVector& v) {
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += v[j];
}

// Aggregation at one instant: per-unit stock vectors summed in ascending
// unit-id order. Every evaluation path (plateaus, boundaries, samples,
// spatial rows) reduces with exactly this association so outputs are
// bit-identical across serial and parallel runs.
MassVector eval_network(const Network& net, HalfTicks t2) {
    MassVector acc(net.registry.material_count(), 0.0);
    for (const auto& unit : net.units) {
        add_into(acc, detail::unit_stock_half_ticks(unit, net.registry, t2));
    }
    return acc;
}

// Evaluates one unit at every requested instant. Parallel mode runs these
// per-unit passes concurrently; the reduction stays ordered.
std::vector<MassVector> eval_unit_at(const VisionUnit& unit, const CompositionRegistry& registry,
                                     const std::vector<HalfTicks>& instants) {
    std::vector<MassVector> rows;
    rows.reserve(instants.size());
    for (HalfTicks t2 : instants) {
        rows.push_back(detail::unit_stock_half_ticks(unit, registry, t2));
    }
    return rows;
}

std::vector<MassVector> eval_network_at(const Network& net,
                                        const std::vector<HalfTicks>& instants, bool parallel) {
    const std::size_t psi = net.registry.material_count();
    std::vector<MassVector> totals(instants.size(), MassVector(psi, 0.0));
    if (net.units.empty() || instants.empty()) return totals;

    std::vector<std::vector<MassVector>> per_unit(net.units.size());
    if (parallel && net.units.size() > 1) {
        const std::size_t workers =
            std::min<std::size_t>(net.units.size(),
                                  std::max(2u, std::thread::hardware_concurrency()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < net.units.size(); i += workers) {
                    per_unit[i] = eval_unit_at(net.units[i], net.registry, instants);
                }
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < net.units.size(); ++i) {
            per_unit[i] = eval_unit_at(net.units[i], net.registry, instants);
        }
    }
    for (std::size_t p = 0; p < instants.size(); ++p) {
        for (std::size_t i = 0; i < net.units.size(); ++i) {
            add_into(totals[p], per_unit[i][p]);
        }
    }
    return totals;
}

std::vector<Time> merged_breakpoints(const Network& net) {
    std::vector<Time> all;
    for (const auto& unit : net.units) {
        auto points = unit_breakpoints(unit);
        all.insert(all.end(), points.begin(), points.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

} // namespace

Network make_network(CompositionRegistry registry, std::vector<VisionUnit> units) {
    std::sort(units.begin(), units.end(),
              [](const VisionUnit& a, const VisionUnit& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i > 0 && units[i].id == units[i - 1].id) {
            throw_invalid("duplicate unit id " + std::to_string(units[i].id));
        }
        validate_location(units[i].location);
        for (const auto& [class_id, pulses] : units[i].schedule) {
            if (!registry.class_registered(class_id)) {
                throw_invalid("unit " + std::to_string(units[i].id) +
                              " schedules class " + std::to_string(class_id) +
                              " which has no registered composition");
            }
            for (const auto& pulse : pulses) {
                RectPulse::make(pulse.center, pulse.duration);  // re-check invariants
            }
        }
    }
    return Network{std::move(registry), std::move(units)};
}

MassVector network_stock(const Network& net, Time t) {
    return eval_network(net, detail::to_half_ticks(t));
}

StockSeries stock_series(const Network& net, bool parallel) {
    StockSeries series;
    series.breakpoints = merged_breakpoints(net);
    const std::size_t n = series.breakpoints.size();
    const std::size_t psi = net.registry.material_count();

    series.plateaus.assign(n + 1, MassVector(psi, 0.0));
    series.boundary_values.assign(n, MassVector(psi, 0.0));
    if (n == 0) return series;

    // One evaluation per interior-interval midpoint, then one per breakpoint.
    // Midpoints live on the half-microsecond grid: 2*mid = b[k-1] + b[k].
    std::vector<HalfTicks> instants;
    instants.reserve(2 * n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        instants.push_back(static_cast<HalfTicks>(series.breakpoints[k - 1].us) +
                           series.breakpoints[k].us);
    }
    for (std::size_t k = 0; k < n; ++k) {
        instants.push_back(detail::to_half_ticks(series.breakpoints[k]));
    }

    auto values = eval_network_at(net, instants, parallel);
    for (std::size_t k = 1; k < n; ++k) {
        series.plateaus[k] = std::move(values[k - 1]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        series.boundary_values[k] = std::move(values[n - 1 + k]);
    }
    return series;
}

std::vector<StockEvent> stock_events(const Network& net) {
    return stock_events(stock_series(net));
}

std::vector<StockEvent> stock_events(const StockSeries& series) {
    std::vector<StockEvent> events;
    const std::size_t psi = series.plateaus.empty() ? 0 : series.plateaus.front().size();
    for (std::size_t k = 0; k < series.breakpoints.size(); ++k) {
        for (std::size_t j = 0; j < psi; ++j) {
            const double delta = series.plateaus[k + 1][j] - series.plateaus[k][j];
            if (delta != 0.0) {
                events.push_back({series.breakpoints[k], static_cast<std::int32_t>(j + 1), delta});
            }
        }
    }
    return events;
}

std::vector<Sample> sample_series(const StockSeries& series, Time t0, Time t1, Time step) {
    if (step.us <= 0) throw_invalid("sample step must be positive");
    if (t0 > t1) throw_invalid("sample range start must not exceed its end");

    const std::size_t psi = series.plateaus.empty() ? 0 : series.plateaus.front().size();
    std::vector<Sample> samples;
    for (__int128 cursor = t0.us; cursor <= t1.us; cursor += step.us) {
        const Time t{static_cast<std::int64_t>(cursor)};
        auto pos = std::lower_bound(series.breakpoints.begin(), series.breakpoints.end(), t);
        const auto idx = static_cast<std::size_t>(pos - series.breakpoints.begin());
        if (pos != series.breakpoints.end() && *pos == t) {
            samples.push_back({t, true, series.boundary_values[idx]});
        } else if (psi == 0) {
            samples.push_back({t, false, MassVector{}});
        } else {
            samples.push_back({t, false, series.plateaus[idx]});
        }
    }
    return samples;
}

MassVector mass_time_integral(const Network& net) {
    // Accumulate in kg*us with one division at the end, in the same fixed
    // (unit, class, pulse) order as every other reduction.
    MassVector acc(net.registry.material_count(), 0.0);
    for (const auto& unit : net.units) {
        for (const auto& [class_id, pulses] : unit.schedule) {
            const MassVector& masses = net.registry.composition(class_id);
            for (const auto& pulse : pulses) {
                const auto duration_us = static_cast<double>(pulse.duration.us);
                for (std::size_t j = 0; j < acc.size(); ++j) {
                    acc[j] += duration_us * masses[j];
                }
            }
        }
    }
    for (double& v : acc) v /= static_cast<double>(kMicrosPerSecond);
    return acc;
}

std::vector<SpatialRow> spatial_map(const Network& net, Time t, bool parallel) {
    std::vector<HalfTicks> instant{detail::to_half_ticks(t)};
    std::vector<SpatialRow> rows;
    rows.reserve(net.units.size());

    if (parallel && net.units.size() > 1) {
        std::vector<MassVector> stocks(net.units.size());
        const std::size_t workers =
            std::min<std::size_t>(net.units.size(),
                                  std::max(2u, std::thread::hardware_concurrency()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < net.units.size(); i += workers) {
                    stocks[i] = detail::unit_stock_half_ticks(net.units[i], net.registry,
                                                              instant.front());
                }
            });
        }
        for (auto& th : pool) th.join();
        for (std::size_t i = 0; i < net.units.size(); ++i) {
            rows.push_back({net.units[i].id, net.units[i].location, std::move(stocks[i])});
        }
    } else {
        for (const auto& unit : net.units) {
            rows.push_back({unit.id, unit.location,
                            detail::unit_stock_half_ticks(unit, net.registry, instant.front())});
        }
    }
    return rows;
}

} // namespace matmap
