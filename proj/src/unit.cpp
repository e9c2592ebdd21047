#include "matmap/unit.hpp"

#include "matmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace matmap {

namespace {

// splitmix64: tiny, well-known, platform-independent mixer. Used instead of
// <random> distributions because those are not bit-stable across standard
// library implementations.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One uniform draw in [0,1) keyed by (seed, unit, class, pulse index), so the
// relabeling of a detection event does not depend on any other event.
double event_uniform(std::uint64_t seed, std::int32_t unit_id, std::int32_t class_id,
                     std::size_t pulse_index) {
    std::uint64_t state = seed;
    splitmix64(state);
    state ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(static_cast<std::uint32_t>(unit_id));
    splitmix64(state);
    state ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(static_cast<std::uint32_t>(class_id));
    splitmix64(state);
    state ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(pulse_index + 1);
    const std::uint64_t bits = splitmix64(state);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::int32_t sample_row(const std::vector<double>& row, double u) {
    double cumulative = 0.0;
    std::int32_t last_positive = -1;
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] > 0.0) last_positive = static_cast<std::int32_t>(k + 1);
        cumulative += row[k];
        if (u < cumulative) return static_cast<std::int32_t>(k + 1);
    }
    // Row sums to 1 within tolerance; u can only land here through rounding.
    return last_positive;
}

} // namespace

void validate_location(const Location& loc) {
    if (!std::isfinite(loc.x_m) || !std::isfinite(loc.y_m)) {
        throw_invalid("unit location coordinates must be finite");
    }
    if (loc.geo) {
        if (!std::isfinite(loc.geo->lat_deg) || !std::isfinite(loc.geo->lon_deg)) {
            throw_invalid("geo tag must be finite");
        }
        if (loc.geo->lat_deg < -90.0 || loc.geo->lat_deg > 90.0) {
            throw_invalid("latitude must be in [-90, 90]");
        }
        if (loc.geo->lon_deg < -180.0 || loc.geo->lon_deg > 180.0) {
            throw_invalid("longitude must be in [-180, 180]");
        }
    }
}

MassVector unit_stock(const VisionUnit& unit, const CompositionRegistry& registry, Time t) {
    return detail::unit_stock_half_ticks(unit, registry, detail::to_half_ticks(t));
}

std::vector<Time> unit_breakpoints(const VisionUnit& unit) {
    std::vector<Time> points;
    for (const auto& [class_id, pulses] : unit.schedule) {
        for (const auto& pulse : pulses) {
            for (Time edge : pulse_breakpoints(pulse)) points.push_back(edge);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

void validate_confusion(const ConfusionModel& model, std::size_t class_count) {
    if (model.matrix.size() != class_count) {
        throw_invalid("confusion matrix must have one row per class (" +
                      std::to_string(class_count) + "), got " +
                      std::to_string(model.matrix.size()));
    }
    for (std::size_t r = 0; r < model.matrix.size(); ++r) {
        const auto& row = model.matrix[r];
        if (row.size() != class_count) {
            throw_invalid("confusion matrix row " + std::to_string(r + 1) + " must have " +
                          std::to_string(class_count) + " entries");
        }
        double sum = 0.0;
        for (double p : row) {
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw_invalid("confusion matrix entries must lie in [0, 1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw_invalid("confusion matrix row " + std::to_string(r + 1) +
                          " must sum to 1, got " + std::to_string(sum));
        }
    }
}

VisionUnit apply_confusion(const VisionUnit& unit, const ConfusionModel& model) {
    validate_confusion(model, model.matrix.size());
    const auto q = static_cast<std::int32_t>(model.matrix.size());

    VisionUnit relabeled{unit.id, unit.location, {}};
    for (const auto& [class_id, pulses] : unit.schedule) {
        if (class_id < 1 || class_id > q) {
            throw_invalid("schedule references class " + std::to_string(class_id) +
                          " outside the confusion matrix");
        }
        const auto& row = model.matrix[static_cast<std::size_t>(class_id) - 1];
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            const double u = event_uniform(model.seed, unit.id, class_id, k);
            const std::int32_t reported = sample_row(row, u);
            relabeled.schedule[reported].push_back(pulses[k]);
        }
    }
    return relabeled;
}

namespace detail {

MassVector unit_stock_half_ticks(const VisionUnit& unit, const CompositionRegistry& registry,
                                 HalfTicks t2) {
    MassVector stock(registry.material_count(), 0.0);
    for (const auto& [class_id, pulses] : unit.schedule) {
        const MassVector& masses = registry.composition(class_id);
        int halves = 0;
        for (const auto& pulse : pulses) {
            halves += half_count(level_at_half_ticks(pulse, t2));
        }
        if (halves == 0) continue;
        const double signal = static_cast<double>(halves) / 2.0;
        for (std::size_t j = 0; j < stock.size(); ++j) {
            stock[j] += signal * masses[j];
        }
    }
    return stock;
}

} // namespace detail

} // namespace matmap
