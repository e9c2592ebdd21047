// Exit-code and stdout contract checks for the CLI: 0 on success, 1 on
// parse/validation errors, 2 on I/O errors; `events` prints nothing for an
// eventless scenario.
//
// usage: matmap_cli_checks <cli_path> <scenario_dir> <work_dir>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run(const std::string& command) {
    RunResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buffer;
    size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: matmap_cli_checks <cli_path> <scenario_dir> <work_dir>\n";
        return 2;
    }
    const std::string cli = std::string("\"") + argv[1] + "\"";
    const std::filesystem::path scenario_dir = argv[2];
    const std::filesystem::path work_dir = argv[3];
    std::filesystem::remove_all(work_dir);
    std::filesystem::create_directories(work_dir);
    const std::string study = " \"" + (scenario_dir / "iv_d.json").string() + "\"";
    const std::string empty = " \"" + (scenario_dir / "empty.json").string() + "\"";

    {
        const auto r = run(cli + " simulate" + study + " \"" + (work_dir / "out").string() + "\"");
        expect(r.exit_code == 0, "simulate succeeds with exit 0");
    }
    {
        const auto r = run(cli + " simulate" + empty + " \"" + (work_dir / "empty").string() + "\"");
        expect(r.exit_code == 0, "simulate on an eventless scenario exits 0");
        std::ifstream events(work_dir / "empty" / "events.csv");
        std::string line;
        std::getline(events, line);
        const bool header_only = line == "t_us,material,delta_kg,tau_after_kg" &&
                                 !std::getline(events, line);
        expect(header_only, "eventless events.csv holds only the header");
    }
    {
        const auto bad = (work_dir / "bad.json").string();
        std::ofstream(bad) << "{ not json";
        const auto r = run(cli + " events \"" + bad + "\"");
        expect(r.exit_code == 1, "parse error exits 1");
    }
    {
        const auto r = run(cli + " events \"" + (work_dir / "missing.json").string() + "\"");
        expect(r.exit_code == 2, "unreadable scenario exits 2");
    }
    {
        const auto r = run(cli + " events" + empty);
        expect(r.exit_code == 0 && r.output.empty(),
               "events on an eventless scenario prints nothing and exits 0");
    }
    {
        const auto r = run(cli + " events" + study + " --format json");
        expect(r.exit_code == 0 && r.output.find("\"delta_kg\":") != std::string::npos,
               "events --format json emits event objects");
    }
    {
        const auto r = run(cli + " map" + study);
        expect(r.exit_code == 1, "map without --t is a usage error, exit 1");
    }
    {
        const auto r = run(cli + " map" + study + " --t 75");
        expect(r.exit_code == 0 && r.output.find("2,4,6") != std::string::npos,
               "map at 75 s prints both unit rows");
    }
    {
        const auto r = run(cli + " map" + study + " --t 0.0000005");
        expect(r.exit_code == 1, "sub-microsecond --t is rejected with exit 1");
    }
    {
        const auto r = run(cli +
                           " transform --rotation 1 0 0 0 1 0 0 0 -1 --target 1 0 2 0");
        expect(r.exit_code == 1, "reflection rotation exits 1");
    }
    {
        const auto r = run(cli + " transform --z-angle-deg 90 --translation 10 0 0 --height 0.5"
                                 " --target 1 0 2 0");
        expect(r.exit_code == 0 && r.output == "p1 10.000000 1.000000 0.500000\n"
                                               "p2 10.000000 2.000000 0.500000\n",
               "transform prints both points to six decimals");
    }
    {
        const auto r = run(cli + " transform --target 1 0 2 0");
        expect(r.exit_code == 1, "transform without a rotation is a usage error");
    }
    {
        const auto log = (work_dir / "extra.csv").string();
        std::ofstream(log) << "# extra detection\n1,1,200000000,220000000\n";
        const auto r = run(cli + " events" + study + " --log \"" + log + "\"");
        expect(r.exit_code == 0 && r.output.find("200000000,") != std::string::npos,
               "--log merges detections into the schedule");

        std::ofstream(log, std::ios::app) << "garbled line\n";
        const auto lenient = run(cli + " events" + study + " --log \"" + log + "\"");
        expect(lenient.exit_code == 0, "lenient log ingestion skips bad lines");
        const auto strict = run(cli + " events" + study + " --log \"" + log + "\" --strict");
        expect(strict.exit_code == 1, "--strict log ingestion exits 1 on a bad line");
    }
    {
        const auto r = run(cli + " simulate" + study + " /proc/matmap_forbidden/out");
        expect(r.exit_code == 2, "unwritable output directory exits 2");
    }

    if (g_failures == 0) {
        std::printf("all CLI checks passed\n");
        return 0;
    }
    std::printf("%d CLI checks FAILED\n", g_failures);
    return 1;
}
