#ifndef MATMAP_SCENARIO_HPP
#define MATMAP_SCENARIO_HPP

#include "matmap/aggregator.hpp"
#include "matmap/composition.hpp"
#include "matmap/time.hpp"
#include "matmap/unit.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matmap {

/// Optional export defaults carried by a scenario file: a sampling horizon
/// and grid step for the sampled series export.
struct ExportOptions {
    std::optional<Time> t0;
    std::optional<Time> t1;
    std::optional<Time> step;

    friend bool operator==(const ExportOptions&, const ExportOptions&) = default;
};

/// Fully validated scenario: the monitored materials and object classes,
/// per-class compositions (aligned to the material list), the vision units
/// with their detection schedules, and optional confusion/export settings.
struct Scenario {
    std::vector<std::string> materials;
    std::vector<std::string> classes;
    std::vector<MassVector> compositions;  // indexed by class id - 1, psi entries each
    std::vector<VisionUnit> units;         // ids dense 1..s
    std::optional<ConfusionModel> confusion;
    ExportOptions export_options;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates a scenario document (JSON syntax; see README for the
/// schema). Every error names the offending key path, or the line and column
/// for syntax errors. Detection windows are given as (start_s, end_s) pairs
/// in decimal seconds; sub-microsecond precision and odd-microsecond window
/// lengths are rejected.
Scenario parse_scenario(std::string_view text);

/// Canonical JSON rendering of a scenario; parsing it back yields an equal
/// Scenario value. Times are emitted as exact decimal-second strings.
std::string scenario_to_json(const Scenario& scenario);

/// One detection reported by an external vision unit.
struct DetectionRecord {
    std::int32_t unit_id = 0;
    std::int32_t class_id = 0;
    Time start;
    Time end;  // exclusive of none: window is [start, end], start < end

    friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

struct LogIngest {
    std::vector<DetectionRecord> records;
    std::vector<std::string> issues;  // one entry per skipped line (lenient mode)
};

/// Parses a detection log: one record per line, either CSV
/// `unit_id,class_id,start_us,end_us` (integer microseconds) or a JSON object
/// with the same fields. Lines starting with '#' and blank lines are ignored.
/// In strict mode the first malformed line throws; otherwise malformed lines
/// are skipped and reported in `issues` with their line numbers.
LogIngest ingest_detection_log(std::string_view text, bool strict);

/// Converts records to pulses (center = midpoint, duration = end - start) and
/// appends them to the named units' schedules. Records naming unknown unit or
/// class ids are skipped and reported, or throw in strict mode.
void merge_detections(Scenario& scenario, const std::vector<DetectionRecord>& records,
                      bool strict, std::vector<std::string>* issues);

/// Builds the immutable network: registry from the compositions, units sorted
/// by id, confusion relabeling applied when the scenario carries a model.
Network build_network(const Scenario& scenario);

} // namespace matmap

#endif
