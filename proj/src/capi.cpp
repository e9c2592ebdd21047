#include "matmap.h"

#include "matmap/aggregator.hpp"
#include "matmap/error.hpp"
#include "matmap/export.hpp"
#include "matmap/geometry.hpp"
#include "matmap/scenario.hpp"
#include "matmap/version.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

struct mm_scenario {
    matmap::Scenario value;
};

struct mm_network {
    matmap::Network value;
    bool parallel = false;
};

struct mm_series {
    matmap::StockSeries value;
    std::vector<matmap::StockEvent> events;
    std::vector<matmap::MassVector> tau_after;  // post-event plateau, 1:1 with events
};

namespace {

thread_local std::string g_last_error;

mm_status status_of(const matmap::Error& e) {
    switch (e.kind()) {
        case matmap::ErrorKind::parse: return MM_ERR_PARSE;
        case matmap::ErrorKind::io: return MM_ERR_IO;
        case matmap::ErrorKind::domain: return MM_ERR_DOMAIN;
        default: return MM_ERR_INVALID;
    }
}

// Runs `fn`, translating exceptions into status codes + thread-local message.
template <typename Fn>
mm_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return MM_OK;
    } catch (const matmap::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MM_ERR_INVALID;
    }
}

mm_status fail_invalid(const char* message) {
    g_last_error = message;
    return MM_ERR_INVALID;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string read_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) matmap::throw_io(std::string("cannot open \"") + path + "\" for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) matmap::throw_io(std::string("failed reading \"") + path + "\"");
    return std::move(buffer).str();
}

std::string join_issues(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& issue : issues) {
        out += issue;
        out.push_back('\n');
    }
    return out;
}

void copy_vec(const matmap::MassVector& v, double* out) {
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j];
}

} // namespace

extern "C" {

const char* mm_version(void) { return matmap::kVersion; }

const char* mm_last_error(void) { return g_last_error.c_str(); }

void mm_string_free(char* s) { std::free(s); }

/* ---------------- time ---------------- */

mm_status mm_parse_seconds(const char* text, mm_time_us* out) {
    if (!text || !out) return fail_invalid("null argument");
    return guarded([&] { *out = matmap::parse_seconds(text).us; });
}

mm_status mm_time_from_seconds(double seconds, mm_time_us* out) {
    if (!out) return fail_invalid("null argument");
    return guarded([&] { *out = matmap::time_from_seconds(seconds).us; });
}

/* ---------------- scenario ---------------- */

mm_status mm_scenario_parse_text(const char* text, mm_scenario** out) {
    if (!text || !out) return fail_invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new mm_scenario{matmap::parse_scenario(text)}; });
}

mm_status mm_scenario_parse_file(const char* path, mm_scenario** out) {
    if (!path || !out) return fail_invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new mm_scenario{matmap::parse_scenario(read_file(path))}; });
}

void mm_scenario_free(mm_scenario* scenario) { delete scenario; }

mm_status mm_scenario_to_json(const mm_scenario* scenario, char** out) {
    if (!scenario || !out) return fail_invalid("null argument");
    return guarded([&] { *out = copy_string(matmap::scenario_to_json(scenario->value)); });
}

mm_status mm_scenario_merge_log_text(mm_scenario* scenario, const char* text, int strict,
                                     char** issues) {
    if (!scenario || !text) return fail_invalid("null argument");
    if (issues) *issues = nullptr;
    return guarded([&] {
        auto ingest = matmap::ingest_detection_log(text, strict != 0);
        matmap::merge_detections(scenario->value, ingest.records, strict != 0, &ingest.issues);
        if (issues) *issues = copy_string(join_issues(ingest.issues));
    });
}

mm_status mm_scenario_merge_log_file(mm_scenario* scenario, const char* path, int strict,
                                     char** issues) {
    if (!scenario || !path) return fail_invalid("null argument");
    if (issues) *issues = nullptr;
    return guarded([&] {
        auto ingest = matmap::ingest_detection_log(read_file(path), strict != 0);
        matmap::merge_detections(scenario->value, ingest.records, strict != 0, &ingest.issues);
        if (issues) *issues = copy_string(join_issues(ingest.issues));
    });
}

mm_status mm_scenario_export_options(const mm_scenario* scenario, int* has_horizon,
                                     mm_time_us* t0, mm_time_us* t1, int* has_step,
                                     mm_time_us* step) {
    if (!scenario) return fail_invalid("null argument");
    const auto& opts = scenario->value.export_options;
    if (has_horizon) *has_horizon = opts.t0.has_value() ? 1 : 0;
    if (t0 && opts.t0) *t0 = opts.t0->us;
    if (t1 && opts.t1) *t1 = opts.t1->us;
    if (has_step) *has_step = opts.step.has_value() ? 1 : 0;
    if (step && opts.step) *step = opts.step->us;
    g_last_error.clear();
    return MM_OK;
}

/* ---------------- network ---------------- */

mm_status mm_network_build(const mm_scenario* scenario, mm_network** out) {
    if (!scenario || !out) return fail_invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new mm_network{matmap::build_network(scenario->value)}; });
}

void mm_network_free(mm_network* net) { delete net; }

void mm_network_set_parallel(mm_network* net, int enabled) {
    if (net) net->parallel = enabled != 0;
}

size_t mm_network_unit_count(const mm_network* net) {
    return net ? net->value.units.size() : 0;
}

size_t mm_network_class_count(const mm_network* net) {
    return net ? net->value.registry.class_count() : 0;
}

size_t mm_network_material_count(const mm_network* net) {
    return net ? net->value.registry.material_count() : 0;
}

mm_status mm_network_material_name(const mm_network* net, int32_t material_id, const char** out) {
    if (!net || !out) return fail_invalid("null argument");
    const auto& materials = net->value.registry.materials();
    if (material_id < 1 || static_cast<size_t>(material_id) > materials.size()) {
        return fail_invalid("material id out of range");
    }
    *out = materials[static_cast<size_t>(material_id) - 1].name.c_str();
    g_last_error.clear();
    return MM_OK;
}

mm_status mm_network_stock(const mm_network* net, mm_time_us t, double* out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] { copy_vec(matmap::network_stock(net->value, matmap::Time{t}), out); });
}

mm_status mm_network_mass_time_integral(const mm_network* net, double* out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] { copy_vec(matmap::mass_time_integral(net->value), out); });
}

mm_status mm_network_unit_info(const mm_network* net, size_t index, int32_t* id, double* x_m,
                               double* y_m, int* has_geo, double* lat, double* lon) {
    if (!net) return fail_invalid("null argument");
    if (index >= net->value.units.size()) return fail_invalid("unit index out of range");
    const auto& unit = net->value.units[index];
    if (id) *id = unit.id;
    if (x_m) *x_m = unit.location.x_m;
    if (y_m) *y_m = unit.location.y_m;
    if (has_geo) *has_geo = unit.location.geo.has_value() ? 1 : 0;
    if (unit.location.geo) {
        if (lat) *lat = unit.location.geo->lat_deg;
        if (lon) *lon = unit.location.geo->lon_deg;
    }
    g_last_error.clear();
    return MM_OK;
}

mm_status mm_network_unit_stock(const mm_network* net, size_t index, mm_time_us t, double* out) {
    if (!net || !out) return fail_invalid("null argument");
    if (index >= net->value.units.size()) return fail_invalid("unit index out of range");
    return guarded([&] {
        copy_vec(matmap::unit_stock(net->value.units[index], net->value.registry, matmap::Time{t}),
                 out);
    });
}

/* ---------------- series ---------------- */

mm_status mm_series_build(const mm_network* net, mm_series** out) {
    if (!net || !out) return fail_invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        auto series = matmap::stock_series(net->value, net->parallel);
        auto handle = std::make_unique<mm_series>();
        handle->events = matmap::stock_events(series);
        handle->tau_after.reserve(handle->events.size());
        for (const auto& event : handle->events) {
            const auto pos = std::lower_bound(series.breakpoints.begin(), series.breakpoints.end(),
                                              event.time) -
                             series.breakpoints.begin();
            handle->tau_after.push_back(series.plateaus[static_cast<size_t>(pos) + 1]);
        }
        handle->value = std::move(series);
        *out = handle.release();
    });
}

void mm_series_free(mm_series* series) { delete series; }

size_t mm_series_breakpoint_count(const mm_series* series) {
    return series ? series->value.breakpoints.size() : 0;
}

mm_status mm_series_breakpoint(const mm_series* series, size_t k, mm_time_us* out) {
    if (!series || !out) return fail_invalid("null argument");
    if (k >= series->value.breakpoints.size()) return fail_invalid("breakpoint index out of range");
    *out = series->value.breakpoints[k].us;
    g_last_error.clear();
    return MM_OK;
}

mm_status mm_series_plateau(const mm_series* series, size_t k, double* out) {
    if (!series || !out) return fail_invalid("null argument");
    if (k >= series->value.plateaus.size()) return fail_invalid("plateau index out of range");
    copy_vec(series->value.plateaus[k], out);
    g_last_error.clear();
    return MM_OK;
}

mm_status mm_series_boundary(const mm_series* series, size_t k, double* out) {
    if (!series || !out) return fail_invalid("null argument");
    if (k >= series->value.boundary_values.size()) {
        return fail_invalid("boundary index out of range");
    }
    copy_vec(series->value.boundary_values[k], out);
    g_last_error.clear();
    return MM_OK;
}

mm_status mm_series_value(const mm_series* series, mm_time_us t, double* out, int* at_breakpoint) {
    if (!series || !out) return fail_invalid("null argument");
    return guarded([&] {
        auto samples = matmap::sample_series(series->value, matmap::Time{t}, matmap::Time{t},
                                             matmap::Time{1});
        copy_vec(samples.front().value, out);
        if (at_breakpoint) *at_breakpoint = samples.front().at_breakpoint ? 1 : 0;
    });
}

size_t mm_series_event_count(const mm_series* series) {
    return series ? series->events.size() : 0;
}

mm_status mm_series_event(const mm_series* series, size_t index, mm_time_us* t,
                          int32_t* material_id, double* delta_kg, double* tau_after_kg) {
    if (!series) return fail_invalid("null argument");
    if (index >= series->events.size()) return fail_invalid("event index out of range");
    const auto& event = series->events[index];
    if (t) *t = event.time.us;
    if (material_id) *material_id = event.material;
    if (delta_kg) *delta_kg = event.delta_kg;
    if (tau_after_kg) {
        *tau_after_kg = series->tau_after[index][static_cast<size_t>(event.material) - 1];
    }
    g_last_error.clear();
    return MM_OK;
}

/* ---------------- renderings ---------------- */

mm_status mm_render_series_csv(const mm_network* net, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        auto series = matmap::stock_series(net->value, net->parallel);
        *out = copy_string(matmap::render_series_csv(net->value, series));
    });
}

mm_status mm_render_series_sampled_csv(const mm_network* net, mm_time_us t0, mm_time_us t1,
                                       mm_time_us step, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        auto series = matmap::stock_series(net->value, net->parallel);
        *out = copy_string(matmap::render_series_sampled_csv(
            net->value, series, matmap::Time{t0}, matmap::Time{t1}, matmap::Time{step}));
    });
}

mm_status mm_render_events_csv(const mm_network* net, int with_header, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        auto series = matmap::stock_series(net->value, net->parallel);
        *out = copy_string(matmap::render_events_csv(net->value, series, with_header != 0));
    });
}

mm_status mm_render_events_json(const mm_network* net, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        auto series = matmap::stock_series(net->value, net->parallel);
        *out = copy_string(matmap::render_events_json(net->value, series));
    });
}

mm_status mm_render_map_csv(const mm_network* net, mm_time_us t, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        *out = copy_string(matmap::render_map_csv(net->value, matmap::Time{t}, net->parallel));
    });
}

mm_status mm_render_map_json(const mm_network* net, mm_time_us t, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        *out = copy_string(matmap::render_map_json(net->value, matmap::Time{t}, net->parallel));
    });
}

mm_status mm_render_summary(const mm_network* net, char** out) {
    if (!net || !out) return fail_invalid("null argument");
    return guarded([&] {
        auto series = matmap::stock_series(net->value, net->parallel);
        *out = copy_string(matmap::render_summary(net->value, series));
    });
}

/* ---------------- geometry ---------------- */

void mm_rotation_about_z(double degrees, double out[9]) {
    const auto r = matmap::rotation_about_z(degrees);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out[3 * i + j] = r.m[i][j];
    }
}

mm_status mm_rotation_validate(const double rotation[9]) {
    if (!rotation) return fail_invalid("null argument");
    return guarded([&] {
        std::array<double, 9> raw;
        std::copy(rotation, rotation + 9, raw.begin());
        matmap::validate_rotation(raw);
    });
}

mm_status mm_transform_point(const double rotation[9], const double translation[3],
                             const double p_local[3], double out[3]) {
    if (!rotation || !translation || !p_local || !out) return fail_invalid("null argument");
    return guarded([&] {
        std::array<double, 9> raw;
        std::copy(rotation, rotation + 9, raw.begin());
        matmap::FrameTransform f{matmap::validate_rotation(raw),
                                 {translation[0], translation[1], translation[2]},
                                 0.0};
        const auto p = matmap::to_robot_frame(f, {p_local[0], p_local[1], p_local[2]});
        out[0] = p.x;
        out[1] = p.y;
        out[2] = p.z;
    });
}

mm_status mm_pick_points(const double rotation[9], const double translation[3], double height_cm,
                         const double target[4], double out_p1[3], double out_p2[3],
                         int* degenerate) {
    if (!rotation || !translation || !target || !out_p1 || !out_p2) {
        return fail_invalid("null argument");
    }
    return guarded([&] {
        std::array<double, 9> raw;
        std::copy(rotation, rotation + 9, raw.begin());
        matmap::FrameTransform f{matmap::validate_rotation(raw),
                                 {translation[0], translation[1], translation[2]},
                                 height_cm};
        const auto points =
            matmap::pick_points_robot(f, {target[0], target[1], target[2], target[3]});
        out_p1[0] = points.p1.x;
        out_p1[1] = points.p1.y;
        out_p1[2] = points.p1.z;
        out_p2[0] = points.p2.x;
        out_p2[1] = points.p2.y;
        out_p2[2] = points.p2.z;
        if (degenerate) *degenerate = points.degenerate ? 1 : 0;
    });
}

} // extern "C"
