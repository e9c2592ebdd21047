// matmap command-line front end. Links the shared-library C API only.
//
// Subcommands:
//   simulate  <scenario.json> <out_dir>   write series/events/map/summary files
//   events    <scenario.json>             print stock events to stdout
//   map       <scenario.json> --t SEC     print the spatial material map
//   transform --target ...                convert pick points to the robot frame
//
// Exit codes: 0 success, 1 parse/validation error, 2 I/O error.

#include <matmap.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

int exit_code_for(mm_status status) {
    switch (status) {
        case MM_OK: return 0;
        case MM_ERR_IO: return 2;
        default: return 1;
    }
}

// Exception carrying the process exit code; thrown wherever a C API call fails.
struct CliFailure {
    int code;
};

void check(mm_status status) {
    if (status != MM_OK) {
        std::cerr << "error: " << mm_last_error() << "\n";
        throw CliFailure{exit_code_for(status)};
    }
}

struct StringDeleter {
    void operator()(char* s) const { mm_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ScenarioDeleter {
    void operator()(mm_scenario* s) const { mm_scenario_free(s); }
};
struct NetworkDeleter {
    void operator()(mm_network* n) const { mm_network_free(n); }
};

mm_time_us parse_time_flag(const std::string& text, const char* flag) {
    mm_time_us out = 0;
    if (mm_parse_seconds(text.c_str(), &out) != MM_OK) {
        std::cerr << "error: " << flag << ": " << mm_last_error() << "\n";
        throw CliFailure{1};
    }
    return out;
}

struct ScenarioFlags {
    std::string path;
    std::string log_path;
    bool strict = false;
    bool parallel = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& flags) {
    cmd->add_option("scenario", flags.path, "Scenario file (JSON)")->required();
    cmd->add_option("--log", flags.log_path,
                    "Detection log to merge into the unit schedules");
    cmd->add_flag("--strict", flags.strict, "Abort on the first malformed log line");
    cmd->add_flag("--parallel", flags.parallel,
                  "Evaluate units in parallel (output is identical to serial runs)");
}

std::unique_ptr<mm_network, NetworkDeleter> load_network(const ScenarioFlags& flags,
                                                         mm_scenario** scenario_out = nullptr) {
    mm_scenario* scenario = nullptr;
    check(mm_scenario_parse_file(flags.path.c_str(), &scenario));
    std::unique_ptr<mm_scenario, ScenarioDeleter> scenario_guard(scenario);

    if (!flags.log_path.empty()) {
        char* issues = nullptr;
        check(mm_scenario_merge_log_file(scenario, flags.log_path.c_str(),
                                         flags.strict ? 1 : 0, &issues));
        OwnedString issues_guard(issues);
        if (issues && *issues) std::cerr << issues;
    }

    mm_network* net = nullptr;
    check(mm_network_build(scenario, &net));
    mm_network_set_parallel(net, flags.parallel ? 1 : 0);
    if (scenario_out) *scenario_out = scenario_guard.release();
    return std::unique_ptr<mm_network, NetworkDeleter>(net);
}

void write_file(const std::filesystem::path& path, const char* content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || (out.close(), !out)) {
        std::cerr << "error: cannot write " << path.string() << "\n";
        throw CliFailure{2};
    }
}

int run_simulate(const ScenarioFlags& flags, const std::string& out_dir,
                 const std::optional<std::string>& t0_text,
                 const std::optional<std::string>& t1_text,
                 const std::optional<std::string>& step_text, bool sample) {
    mm_scenario* scenario = nullptr;
    auto net = load_network(flags, &scenario);
    std::unique_ptr<mm_scenario, ScenarioDeleter> scenario_guard(scenario);

    // Horizon and step: explicit flags win, then the scenario's export block,
    // then the breakpoint hull (or [0,0] for a silent network) with a 1 s step.
    int has_horizon = 0;
    int has_step = 0;
    mm_time_us t0 = 0;
    mm_time_us t1 = 0;
    mm_time_us step = 1'000'000;
    check(mm_scenario_export_options(scenario, &has_horizon, &t0, &t1, &has_step, &step));
    if (!has_step) step = 1'000'000;
    if (!has_horizon) {
        t0 = 0;
        t1 = 0;
        mm_series* probe = nullptr;
        check(mm_series_build(net.get(), &probe));
        const size_t count = mm_series_breakpoint_count(probe);
        if (count > 0) {
            check(mm_series_breakpoint(probe, 0, &t0));
            check(mm_series_breakpoint(probe, count - 1, &t1));
        }
        mm_series_free(probe);
    }
    if (t0_text) t0 = parse_time_flag(*t0_text, "--t0");
    if (t1_text) t1 = parse_time_flag(*t1_text, "--t1");
    if (step_text) step = parse_time_flag(*step_text, "--step");
    const bool sampled = sample || t0_text || t1_text || step_text;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << out_dir << "\n";
        return 2;
    }
    const std::filesystem::path dir(out_dir);

    char* text = nullptr;
    if (sampled) {
        check(mm_render_series_sampled_csv(net.get(), t0, t1, step, &text));
    } else {
        check(mm_render_series_csv(net.get(), &text));
    }
    write_file(dir / "series.csv", OwnedString(text).get());

    check(mm_render_events_csv(net.get(), 1, &text));
    write_file(dir / "events.csv", OwnedString(text).get());

    check(mm_render_map_csv(net.get(), t1, &text));
    write_file(dir / "map.csv", OwnedString(text).get());

    check(mm_render_summary(net.get(), &text));
    write_file(dir / "summary.txt", OwnedString(text).get());

    std::cout << "wrote series.csv, events.csv, map.csv, summary.txt to " << out_dir << "\n";
    return 0;
}

int run_events(const ScenarioFlags& flags, const std::string& format) {
    auto net = load_network(flags);
    char* text = nullptr;
    if (format == "json") {
        check(mm_render_events_json(net.get(), &text));
    } else {
        check(mm_render_events_csv(net.get(), 0, &text));
    }
    std::cout << OwnedString(text).get();
    return 0;
}

int run_map(const ScenarioFlags& flags, const std::string& t_text, const std::string& format) {
    auto net = load_network(flags);
    const mm_time_us t = parse_time_flag(t_text, "--t");
    char* text = nullptr;
    if (format == "json") {
        check(mm_render_map_json(net.get(), t, &text));
    } else {
        check(mm_render_map_csv(net.get(), t, &text));
    }
    std::cout << OwnedString(text).get();
    return 0;
}

int run_transform(const std::vector<double>& rotation, const std::optional<double>& z_angle_deg,
                  const std::vector<double>& translation, double height,
                  const std::vector<double>& target) {
    double r[9];
    if (z_angle_deg) {
        mm_rotation_about_z(*z_angle_deg, r);
    } else {
        for (int i = 0; i < 9; ++i) r[i] = rotation[static_cast<size_t>(i)];
    }
    const double d[3] = {translation[0], translation[1], translation[2]};
    const double tgt[4] = {target[0], target[1], target[2], target[3]};
    double p1[3];
    double p2[3];
    int degenerate = 0;
    check(mm_pick_points(r, d, height, tgt, p1, p2, &degenerate));
    if (degenerate) {
        std::cerr << "warning: pick points coincide (degenerate target)\n";
    }
    std::printf("p1 %.6f %.6f %.6f\n", p1[0], p1[1], p1[2]);
    std::printf("p2 %.6f %.6f %.6f\n", p2[0], p2[1], p2[2]);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Networked material-stock mapping and quantification toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("matmap ") + mm_version());

    ScenarioFlags sim_flags;
    std::string sim_out_dir;
    std::optional<std::string> t0_text;
    std::optional<std::string> t1_text;
    std::optional<std::string> step_text;
    bool sample = false;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write the export bundle");
    add_scenario_flags(simulate, sim_flags);
    simulate->add_option("out_dir", sim_out_dir, "Output directory")->required();
    simulate->add_option("--t0", t0_text, "Sample horizon start, seconds");
    simulate->add_option("--t1", t1_text, "Sample horizon end, seconds");
    simulate->add_option("--step", step_text, "Sample step, seconds");
    simulate->add_flag("--sample", sample,
                       "Write a sampled series instead of the event-driven rows");

    ScenarioFlags events_flags;
    std::string events_format = "csv";
    auto* events = app.add_subcommand("events", "Print stock events");
    add_scenario_flags(events, events_flags);
    events->add_option("--format", events_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    ScenarioFlags map_flags;
    std::string map_t_text;
    std::string map_format = "csv";
    auto* map = app.add_subcommand("map", "Print the per-unit material map at a given time");
    add_scenario_flags(map, map_flags);
    map->add_option("--t", map_t_text, "Evaluation time, seconds")->required();
    map->add_option("--format", map_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    std::vector<double> rotation;
    std::optional<double> z_angle_deg;
    std::vector<double> translation{0.0, 0.0, 0.0};
    double height = 0.0;
    std::vector<double> target;
    auto* transform =
        app.add_subcommand("transform", "Convert local-frame pick points to the robot frame (cm)");
    auto* rot_opt = transform->add_option("--rotation", rotation,
                                          "Row-major 3x3 rotation matrix (9 values)")
                        ->expected(9);
    auto* angle_opt =
        transform->add_option("--z-angle-deg", z_angle_deg, "Rotation about z, degrees");
    rot_opt->excludes(angle_opt);
    transform->add_option("--translation", translation, "Translation x y z, cm")->expected(3);
    transform->add_option("--height", height, "Pick-point plane height, cm");
    transform->add_option("--target", target, "Target x1 y1 x2 y2, cm")->required()->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(sim_flags, sim_out_dir, t0_text, t1_text, step_text, sample);
        }
        if (events->parsed()) {
            return run_events(events_flags, events_format);
        }
        if (map->parsed()) {
            return run_map(map_flags, map_t_text, map_format);
        }
        if (transform->parsed()) {
            if (rotation.empty() && !z_angle_deg) {
                std::cerr << "error: provide --rotation or --z-angle-deg\n";
                return 1;
            }
            return run_transform(rotation, z_angle_deg, translation, height, target);
        }
    } catch (const CliFailure& failure) {
        return failure.code;
    }
    return 1;
}
