#include "matmap/scenario.hpp"

#include "matmap/error.hpp"
#include "matmap/signal.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

namespace matmap {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Largest |t| accepted from scenario files, in seconds. Keeps the
// float-to-microsecond recovery unambiguous and leaves ample headroom for
// any realistic monitoring horizon.
constexpr double kMaxFileSeconds = 1e8;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw_parse(path + ": " + why);
}

const json& require_key(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required key \"") + key + "\"");
    return *it;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) { ok = true; break; }
        }
        if (!ok) fail(path, "unknown key \"" + it.key() + "\"");
    }
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

// Times may be JSON numbers or exact decimal strings. A number is accepted
// only when it sits within 0.05 us of the microsecond grid; anything finer
// is rejected rather than silently rounded.
Time as_time(const json& v, const std::string& path) {
    try {
        if (v.is_string()) {
            return parse_seconds(v.get<std::string>());
        }
    } catch (const Error& e) {
        fail(path, e.what());
    }
    if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) {
        const double seconds = v.get<double>();
        if (!std::isfinite(seconds) || std::abs(seconds) > kMaxFileSeconds) {
            fail(path, "time out of range (|t| <= 1e8 s)");
        }
        const double scaled = seconds * static_cast<double>(kMicrosPerSecond);
        const auto rounded = static_cast<std::int64_t>(std::llround(scaled));
        if (std::abs(scaled - static_cast<double>(rounded)) > 0.05) {
            fail(path, "time is finer than microsecond resolution; use at most 6 fractional digits");
        }
        return Time{rounded};
    }
    fail(path, "expected a time in decimal seconds (number or string)");
}

std::vector<std::string> parse_name_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of names");
    std::vector<std::string> names;
    names.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_string()) fail(item_path, "expected a string");
        const auto name = v[i].get<std::string>();
        if (name.empty()) fail(item_path, "name must not be empty");
        if (name.find_first_of(",\"\n\r") != std::string::npos) {
            fail(item_path, "name must not contain commas, quotes or line breaks");
        }
        names.push_back(name);
    }
    return names;
}

std::int32_t resolve_class(const json& v, const std::string& path,
                           const CompositionRegistry& registry) {
    if (v.is_string()) {
        const auto name = v.get<std::string>();
        if (auto id = registry.find_class(name)) return *id;
        fail(path, "unknown class \"" + name + "\"");
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        const auto id = v.get<std::int64_t>();
        if (id >= 1 && static_cast<std::size_t>(id) <= registry.class_count()) {
            return static_cast<std::int32_t>(id);
        }
        fail(path, "unknown class id " + std::to_string(id));
    }
    fail(path, "expected a class name or id");
}

void parse_compositions(const json& v, const std::string& path, CompositionRegistry& registry) {
    if (!v.is_object()) fail(path, "expected an object keyed by class name");
    for (auto it = v.begin(); it != v.end(); ++it) {
        const std::string class_path = path + "." + it.key();
        const auto class_id = registry.find_class(it.key());
        if (!class_id) fail(class_path, "unknown class \"" + it.key() + "\"");
        try {
            if (it->is_array()) {
                MassVector masses;
                masses.reserve(it->size());
                for (std::size_t j = 0; j < it->size(); ++j) {
                    masses.push_back(as_number((*it)[j], class_path + "[" + std::to_string(j) + "]"));
                }
                registry.register_class(*class_id, masses);
            } else if (it->is_object()) {
                std::vector<std::pair<std::int32_t, double>> entries;
                for (auto m = it->begin(); m != it->end(); ++m) {
                    const std::string mat_path = class_path + "." + m.key();
                    const auto material_id = registry.find_material(m.key());
                    if (!material_id) fail(mat_path, "unknown material \"" + m.key() + "\"");
                    entries.emplace_back(*material_id, as_number(*m, mat_path));
                }
                registry.register_class(*class_id, entries);
            } else {
                fail(class_path, "expected a full mass array or a {material: kg} object");
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::parse) throw;
            fail(class_path, e.what());
        }
    }
}

VisionUnit parse_unit(const json& v, const std::string& path,
                      const CompositionRegistry& registry) {
    if (!v.is_object()) fail(path, "expected a unit object");
    reject_unknown_keys(v, path, {"id", "x_m", "y_m", "lat", "lon", "pulses"});

    VisionUnit unit;
    const json& id = require_key(v, path, "id");
    if (!id.is_number_integer() && !id.is_number_unsigned()) fail(path + ".id", "expected an integer");
    const auto id_value = id.get<std::int64_t>();
    if (id_value < 1 || id_value > std::numeric_limits<std::int32_t>::max()) {
        fail(path + ".id", "unit id must be a positive integer");
    }
    unit.id = static_cast<std::int32_t>(id_value);

    unit.location.x_m = as_number(require_key(v, path, "x_m"), path + ".x_m");
    unit.location.y_m = as_number(require_key(v, path, "y_m"), path + ".y_m");
    const bool has_lat = v.contains("lat");
    const bool has_lon = v.contains("lon");
    if (has_lat != has_lon) fail(path, "lat and lon must be given together");
    if (has_lat) {
        unit.location.geo = GeoPoint{as_number(v["lat"], path + ".lat"),
                                     as_number(v["lon"], path + ".lon")};
    }
    try {
        validate_location(unit.location);
    } catch (const Error& e) {
        fail(path, e.what());
    }

    if (v.contains("pulses")) {
        const json& pulses = v["pulses"];
        if (!pulses.is_array()) fail(path + ".pulses", "expected an array");
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            const std::string pulse_path = path + ".pulses[" + std::to_string(k) + "]";
            const json& p = pulses[k];
            if (!p.is_object()) fail(pulse_path, "expected a pulse object");
            reject_unknown_keys(p, pulse_path, {"class", "start_s", "end_s"});
            const std::int32_t class_id =
                resolve_class(require_key(p, pulse_path, "class"), pulse_path + ".class", registry);
            const Time start = as_time(require_key(p, pulse_path, "start_s"), pulse_path + ".start_s");
            const Time end = as_time(require_key(p, pulse_path, "end_s"), pulse_path + ".end_s");
            if (start >= end) fail(pulse_path, "start_s must precede end_s");
            if ((end.us - start.us) % 2 != 0) {
                fail(pulse_path, "window length must be an even number of microseconds");
            }
            const Time center{start.us + (end.us - start.us) / 2};
            try {
                unit.schedule[class_id].push_back(RectPulse::make(center, Time{end.us - start.us}));
            } catch (const Error& e) {
                fail(pulse_path, e.what());
            }
        }
    }
    return unit;
}

std::string line_column_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

CompositionRegistry registry_of(const Scenario& scenario) {
    CompositionRegistry registry(scenario.materials, scenario.classes);
    for (std::size_t c = 0; c < scenario.compositions.size(); ++c) {
        registry.register_class(static_cast<std::int32_t>(c + 1), scenario.compositions[c]);
    }
    registry.check_complete();
    return registry;
}

std::int64_t parse_int_field(std::string_view field, int line_no, const char* name) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw_parse("line " + std::to_string(line_no) + ": " + name + " is not an integer");
    }
    return value;
}

DetectionRecord parse_log_line(std::string_view line, int line_no) {
    DetectionRecord record;
    std::int64_t fields[4];
    if (!line.empty() && line.front() == '{') {
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw_parse("line " + std::to_string(line_no) + ": bad JSON record: " + e.what());
        }
        static constexpr const char* keys[4] = {"unit_id", "class_id", "start_us", "end_us"};
        for (int i = 0; i < 4; ++i) {
            if (!j.contains(keys[i]) || !(j[keys[i]].is_number_integer() || j[keys[i]].is_number_unsigned())) {
                throw_parse("line " + std::to_string(line_no) + ": missing integer field \"" +
                            keys[i] + "\"");
            }
            fields[i] = j[keys[i]].get<std::int64_t>();
        }
    } else {
        std::string_view rest = line;
        for (int i = 0; i < 4; ++i) {
            const auto comma = rest.find(',');
            if (i < 3 && comma == std::string_view::npos) {
                throw_parse("line " + std::to_string(line_no) +
                            ": expected unit_id,class_id,start_us,end_us");
            }
            const auto field = i < 3 ? rest.substr(0, comma) : rest;
            static constexpr const char* names[4] = {"unit_id", "class_id", "start_us", "end_us"};
            fields[i] = parse_int_field(field, line_no, names[i]);
            if (i < 3) rest.remove_prefix(comma + 1);
        }
        if (rest.find(',') != std::string_view::npos) {
            throw_parse("line " + std::to_string(line_no) + ": too many fields");
        }
    }
    if (fields[0] < 1 || fields[0] > std::numeric_limits<std::int32_t>::max()) {
        throw_parse("line " + std::to_string(line_no) + ": unit_id must be a positive integer");
    }
    if (fields[1] < 1 || fields[1] > std::numeric_limits<std::int32_t>::max()) {
        throw_parse("line " + std::to_string(line_no) + ": class_id must be a positive integer");
    }
    record.unit_id = static_cast<std::int32_t>(fields[0]);
    record.class_id = static_cast<std::int32_t>(fields[1]);
    record.start = Time{fields[2]};
    record.end = Time{fields[3]};
    if (record.start >= record.end) {
        throw_parse("line " + std::to_string(line_no) + ": start_us must precede end_us");
    }
    const __int128 span = static_cast<__int128>(record.end.us) - record.start.us;
    if (span % 2 != 0) {
        throw_parse("line " + std::to_string(line_no) +
                    ": window length must be an even number of microseconds");
    }
    if (span > std::numeric_limits<std::int64_t>::max()) {
        throw_parse("line " + std::to_string(line_no) + ": window length out of range");
    }
    return record;
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_parse("scenario: syntax error at " + line_column_of(text, e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw_parse("scenario: top level must be an object");
    reject_unknown_keys(doc, "scenario",
                        {"materials", "classes", "compositions", "units", "confusion", "export"});

    Scenario scenario;
    scenario.materials = parse_name_list(require_key(doc, "scenario", "materials"), "materials");
    scenario.classes = parse_name_list(require_key(doc, "scenario", "classes"), "classes");

    CompositionRegistry registry;
    try {
        registry = CompositionRegistry(scenario.materials, scenario.classes);
    } catch (const Error& e) {
        throw_parse(std::string("scenario: ") + e.what());
    }
    parse_compositions(require_key(doc, "scenario", "compositions"), "compositions", registry);
    try {
        registry.check_complete();
    } catch (const Error& e) {
        fail("compositions", e.what());
    }
    scenario.compositions.reserve(registry.class_count());
    for (const auto& cls : registry.classes()) {
        scenario.compositions.push_back(registry.composition(cls.id));
    }

    const json& units = require_key(doc, "scenario", "units");
    if (!units.is_array()) throw_parse("units: expected an array");
    for (std::size_t i = 0; i < units.size(); ++i) {
        scenario.units.push_back(
            parse_unit(units[i], "units[" + std::to_string(i) + "]", registry));
    }
    std::sort(scenario.units.begin(), scenario.units.end(),
              [](const VisionUnit& a, const VisionUnit& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < scenario.units.size(); ++i) {
        if (scenario.units[i].id != static_cast<std::int32_t>(i + 1)) {
            throw_parse("units: unit ids must be dense 1.." +
                        std::to_string(scenario.units.size()) + " (missing or duplicate id " +
                        std::to_string(i + 1) + ")");
        }
    }

    if (doc.contains("confusion")) {
        const json& conf = doc["confusion"];
        const std::string path = "confusion";
        if (!conf.is_object()) fail(path, "expected an object");
        reject_unknown_keys(conf, path, {"matrix", "seed"});
        ConfusionModel model;
        const json& matrix = require_key(conf, path, "matrix");
        if (!matrix.is_array()) fail(path + ".matrix", "expected an array of rows");
        for (std::size_t r = 0; r < matrix.size(); ++r) {
            const std::string row_path = path + ".matrix[" + std::to_string(r) + "]";
            if (!matrix[r].is_array()) fail(row_path, "expected an array");
            std::vector<double> row;
            for (std::size_t c = 0; c < matrix[r].size(); ++c) {
                row.push_back(as_number(matrix[r][c], row_path + "[" + std::to_string(c) + "]"));
            }
            model.matrix.push_back(std::move(row));
        }
        const json& seed = require_key(conf, path, "seed");
        if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
            fail(path + ".seed", "expected an integer");
        }
        model.seed = seed.get<std::uint64_t>();
        try {
            validate_confusion(model, registry.class_count());
        } catch (const Error& e) {
            fail(path, e.what());
        }
        scenario.confusion = std::move(model);
    }

    if (doc.contains("export")) {
        const json& exp = doc["export"];
        const std::string path = "export";
        if (!exp.is_object()) fail(path, "expected an object");
        reject_unknown_keys(exp, path, {"t0_s", "t1_s", "step_s"});
        if (exp.contains("t0_s") != exp.contains("t1_s")) {
            fail(path, "t0_s and t1_s must be given together");
        }
        if (exp.contains("t0_s")) {
            scenario.export_options.t0 = as_time(exp["t0_s"], path + ".t0_s");
            scenario.export_options.t1 = as_time(exp["t1_s"], path + ".t1_s");
            if (*scenario.export_options.t0 > *scenario.export_options.t1) {
                fail(path, "t0_s must not exceed t1_s");
            }
        }
        if (exp.contains("step_s")) {
            scenario.export_options.step = as_time(exp["step_s"], path + ".step_s");
            if (scenario.export_options.step->us <= 0) fail(path + ".step_s", "step must be positive");
        }
    }
    return scenario;
}

std::string scenario_to_json(const Scenario& scenario) {
    ordered_json doc;
    doc["materials"] = scenario.materials;
    doc["classes"] = scenario.classes;

    ordered_json compositions = ordered_json::object();
    for (std::size_t c = 0; c < scenario.classes.size(); ++c) {
        compositions[scenario.classes[c]] = scenario.compositions[c];
    }
    doc["compositions"] = std::move(compositions);

    ordered_json units = ordered_json::array();
    for (const auto& unit : scenario.units) {
        ordered_json u;
        u["id"] = unit.id;
        u["x_m"] = unit.location.x_m;
        u["y_m"] = unit.location.y_m;
        if (unit.location.geo) {
            u["lat"] = unit.location.geo->lat_deg;
            u["lon"] = unit.location.geo->lon_deg;
        }
        ordered_json pulses = ordered_json::array();
        for (const auto& [class_id, class_pulses] : unit.schedule) {
            for (const auto& pulse : class_pulses) {
                auto [start, end] = pulse_support(pulse);
                ordered_json p;
                p["class"] = scenario.classes[static_cast<std::size_t>(class_id) - 1];
                p["start_s"] = format_seconds(start);
                p["end_s"] = format_seconds(end);
                pulses.push_back(std::move(p));
            }
        }
        u["pulses"] = std::move(pulses);
        units.push_back(std::move(u));
    }
    doc["units"] = std::move(units);

    if (scenario.confusion) {
        doc["confusion"] = {{"matrix", scenario.confusion->matrix},
                            {"seed", scenario.confusion->seed}};
    }
    if (scenario.export_options.t0 || scenario.export_options.step) {
        ordered_json exp = ordered_json::object();
        if (scenario.export_options.t0) {
            exp["t0_s"] = format_seconds(*scenario.export_options.t0);
            exp["t1_s"] = format_seconds(*scenario.export_options.t1);
        }
        if (scenario.export_options.step) {
            exp["step_s"] = format_seconds(*scenario.export_options.step);
        }
        doc["export"] = std::move(exp);
    }
    return doc.dump(2) + "\n";
}

LogIngest ingest_detection_log(std::string_view text, bool strict) {
    LogIngest out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto newline = text.find('\n', pos);
        std::string_view line = newline == std::string_view::npos
                                    ? text.substr(pos)
                                    : text.substr(pos, newline - pos);
        pos = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
            line.remove_prefix(1);
        }
        if (line.empty() || line.front() == '#') continue;
        try {
            out.records.push_back(parse_log_line(line, line_no));
        } catch (const Error& e) {
            if (strict) throw;
            out.issues.emplace_back(e.what());
        }
    }
    return out;
}

void merge_detections(Scenario& scenario, const std::vector<DetectionRecord>& records,
                      bool strict, std::vector<std::string>* issues) {
    for (const auto& record : records) {
        std::string problem;
        if (record.unit_id < 1 ||
            static_cast<std::size_t>(record.unit_id) > scenario.units.size()) {
            problem = "unknown unit id " + std::to_string(record.unit_id);
        } else if (record.class_id < 1 ||
                   static_cast<std::size_t>(record.class_id) > scenario.classes.size()) {
            problem = "unknown class id " + std::to_string(record.class_id);
        }
        const __int128 span = static_cast<__int128>(record.end.us) - record.start.us;
        if (problem.empty() && (span <= 0 || span % 2 != 0 ||
                                span > std::numeric_limits<std::int64_t>::max())) {
            problem = "window [" + std::to_string(record.start.us) + ", " +
                      std::to_string(record.end.us) + "] us is not a positive even span";
        }
        if (!problem.empty()) {
            if (strict) throw_parse("detection record: " + problem);
            if (issues) issues->push_back("detection record skipped: " + problem);
            continue;
        }
        const Time duration{static_cast<std::int64_t>(span)};
        const Time center{record.start.us + duration.us / 2};
        scenario.units[static_cast<std::size_t>(record.unit_id) - 1]
            .schedule[record.class_id]
            .push_back(RectPulse::make(center, duration));
    }
}

Network build_network(const Scenario& scenario) {
    CompositionRegistry registry = registry_of(scenario);
    std::vector<VisionUnit> units = scenario.units;
    if (scenario.confusion) {
        validate_confusion(*scenario.confusion, registry.class_count());
        for (auto& unit : units) {
            unit = apply_confusion(unit, *scenario.confusion);
        }
    }
    return make_network(std::move(registry), std::move(units));
}

} // namespace matmap
