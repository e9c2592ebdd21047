/* matmap — networked material-stock monitoring simulator.
 *
 * C API of the shared library. All functionality is reached through opaque
 * handles and integer status codes; every handle type has a matching _free
 * function, and strings returned through char** out-parameters are released
 * with mm_string_free. On failure, mm_last_error() returns a thread-local
 * message describing what went wrong.
 *
 * Times cross this boundary as signed 64-bit microseconds (mm_time_us).
 * Masses are kg, site coordinates meters, geometry lengths centimeters.
 */

#ifndef MATMAP_H
#define MATMAP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int64_t mm_time_us;

typedef enum mm_status {
    MM_OK = 0,
    MM_ERR_PARSE = 1,    /* malformed scenario, log, or time text */
    MM_ERR_IO = 2,       /* file could not be read or written */
    MM_ERR_INVALID = 3,  /* argument violates a documented precondition */
    MM_ERR_DOMAIN = 4    /* value outside an operation's mathematical domain */
} mm_status;

typedef struct mm_scenario mm_scenario; /* parsed, validated scenario document */
typedef struct mm_network mm_network;   /* immutable unit network + registry */
typedef struct mm_series mm_series;     /* exact piecewise-constant stock series */

/* ------------------------------------------------------------------ */
/* Library                                                             */

const char* mm_version(void);

/* Message for the most recent failure on the calling thread; empty string
 * if the last call succeeded. The pointer stays valid until the thread's
 * next matmap call. */
const char* mm_last_error(void);

void mm_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Time                                                                */

/* Strict decimal-seconds parser: [+-]digits[.digits{1,6}]. Rejects
 * sub-microsecond precision instead of rounding. */
mm_status mm_parse_seconds(const char* text, mm_time_us* out);

/* Floating-point seconds to microseconds, rounding half away from zero. */
mm_status mm_time_from_seconds(double seconds, mm_time_us* out);

/* ------------------------------------------------------------------ */
/* Scenario                                                            */

mm_status mm_scenario_parse_text(const char* text, mm_scenario** out);
mm_status mm_scenario_parse_file(const char* path, mm_scenario** out);
void mm_scenario_free(mm_scenario* scenario);

/* Canonical JSON rendering; parsing it back yields an equal scenario. */
mm_status mm_scenario_to_json(const mm_scenario* scenario, char** out);

/* Ingests a detection log (CSV `unit_id,class_id,start_us,end_us` or JSON
 * lines with those fields; '#' comments ignored) and appends the windows to
 * the scenario's unit schedules. In strict mode the first bad line fails the
 * call; otherwise bad lines are skipped and, when `issues` is non-NULL, a
 * newline-separated report is returned through it ("" when clean). */
mm_status mm_scenario_merge_log_text(mm_scenario* scenario, const char* text, int strict,
                                     char** issues);
mm_status mm_scenario_merge_log_file(mm_scenario* scenario, const char* path, int strict,
                                     char** issues);

/* Export defaults carried by the scenario file, if any. Any out-pointer may
 * be NULL. */
mm_status mm_scenario_export_options(const mm_scenario* scenario, int* has_horizon,
                                     mm_time_us* t0, mm_time_us* t1, int* has_step,
                                     mm_time_us* step);

/* ------------------------------------------------------------------ */
/* Network                                                             */

mm_status mm_network_build(const mm_scenario* scenario, mm_network** out);
void mm_network_free(mm_network* net);

/* When enabled, per-unit evaluation fans out across threads. Output is
 * guaranteed byte-identical to serial evaluation. */
void mm_network_set_parallel(mm_network* net, int enabled);

size_t mm_network_unit_count(const mm_network* net);
size_t mm_network_class_count(const mm_network* net);
size_t mm_network_material_count(const mm_network* net);

/* Borrowed pointer, valid for the network's lifetime. material_id is 1-based. */
mm_status mm_network_material_name(const mm_network* net, int32_t material_id, const char** out);

/* Total stock per material at instant t; `out` must hold material_count
 * doubles. Window edges contribute their exact half level. */
mm_status mm_network_stock(const mm_network* net, mm_time_us t, double* out);

/* Closed-form integral of each material stock over all time, kg*s. */
mm_status mm_network_mass_time_integral(const mm_network* net, double* out);

/* Unit identity/location by index (0..unit_count-1, ascending id). Any
 * out-pointer may be NULL. */
mm_status mm_network_unit_info(const mm_network* net, size_t index, int32_t* id, double* x_m,
                               double* y_m, int* has_geo, double* lat, double* lon);

/* Stock detected by one unit at instant t; `out` as in mm_network_stock. */
mm_status mm_network_unit_stock(const mm_network* net, size_t index, mm_time_us t, double* out);

/* ------------------------------------------------------------------ */
/* Series                                                              */

/* Builds the exact event-driven stock trajectory: breakpoints where any
 * detection window opens or closes, constant plateaus between them, and the
 * exact edge evaluation at each breakpoint. */
mm_status mm_series_build(const mm_network* net, mm_series** out);
void mm_series_free(mm_series* series);

size_t mm_series_breakpoint_count(const mm_series* series);
mm_status mm_series_breakpoint(const mm_series* series, size_t k, mm_time_us* out);

/* Plateau k covers the interval before breakpoint k; plateau
 * breakpoint_count covers the tail. `out` holds material_count doubles. */
mm_status mm_series_plateau(const mm_series* series, size_t k, double* out);
mm_status mm_series_boundary(const mm_series* series, size_t k, double* out);

/* Exact value at an arbitrary instant; *at_breakpoint (optional) is set to 1
 * when t hits a window edge and the value is the half-level evaluation. */
mm_status mm_series_value(const mm_series* series, mm_time_us t, double* out, int* at_breakpoint);

size_t mm_series_event_count(const mm_series* series);
mm_status mm_series_event(const mm_series* series, size_t index, mm_time_us* t,
                          int32_t* material_id, double* delta_kg, double* tau_after_kg);

/* ------------------------------------------------------------------ */
/* Deterministic renderings (see README for the formats)               */

mm_status mm_render_series_csv(const mm_network* net, char** out);
mm_status mm_render_series_sampled_csv(const mm_network* net, mm_time_us t0, mm_time_us t1,
                                       mm_time_us step, char** out);
mm_status mm_render_events_csv(const mm_network* net, int with_header, char** out);
mm_status mm_render_events_json(const mm_network* net, char** out);
mm_status mm_render_map_csv(const mm_network* net, mm_time_us t, char** out);
mm_status mm_render_map_json(const mm_network* net, mm_time_us t, char** out);
mm_status mm_render_summary(const mm_network* net, char** out);

/* ------------------------------------------------------------------ */
/* Pick-point geometry (lengths in centimeters)                        */

/* Row-major proper rotation by `degrees` about the z axis. */
void mm_rotation_about_z(double degrees, double out[9]);

/* MM_OK when `rotation` (row-major 3x3) is orthonormal with determinant +1
 * within 1e-9; MM_ERR_INVALID otherwise. */
mm_status mm_rotation_validate(const double rotation[9]);

/* Robot-frame point: translation + R * p. Validates the rotation. */
mm_status mm_transform_point(const double rotation[9], const double translation[3],
                             const double p_local[3], double out[3]);

/* Robot-frame pick points of the planar target (x1,y1,x2,y2) lying at
 * height_cm in the local frame. *degenerate (optional) is set to 1 when the
 * two points coincide; that is reported, not treated as an error. */
mm_status mm_pick_points(const double rotation[9], const double translation[3], double height_cm,
                         const double target[4], double out_p1[3], double out_p2[3],
                         int* degenerate);

#ifdef __cplusplus
}
#endif

#endif /* MATMAP_H */
