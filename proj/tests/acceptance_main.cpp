// Acceptance suite: drives the CLI end to end and checks the core library
// against the brute-force oracle. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
//
// usage: matmap_acceptance <cli_path> <scenario_dir> <work_dir>

#include "matmap/aggregator.hpp"
#include "matmap/error.hpp"
#include "matmap/export.hpp"
#include "matmap/geometry.hpp"
#include "matmap/scenario.hpp"
#include "generators.hpp"
#include "oracle.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace matmap;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++g_failures;
}

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct EventRow {
    std::int64_t t_us = 0;
    int material = 0;
    double delta_kg = 0.0;
    double tau_after_kg = 0.0;
};

std::vector<EventRow> parse_events_csv(const std::string& text) {
    std::vector<EventRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EventRow row;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        fields >> row.t_us >> row.material >> row.delta_kg >> row.tau_after_kg;
        rows.push_back(row);
    }
    return rows;
}

Network load_study_network(const std::filesystem::path& scenario_dir) {
    return build_network(parse_scenario(read_file(scenario_dir / "iv_d.json")));
}

// --- geometry helpers for criterion 7 -------------------------------------

Rotation3 random_rotation(std::mt19937_64& rng) {
    auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double q[4];
    double norm2;
    do {
        norm2 = 0.0;
        for (double& v : q) {
            v = 2.0 * u01() - 1.0;
            norm2 += v * v;
        }
    } while (norm2 > 1.0 || norm2 < 1e-8);
    const double inv = 1.0 / std::sqrt(norm2);
    const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
    Rotation3 r;
    r.m = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
    return r;
}

double dist(const Vec3& a, const Vec3& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                     (a.z - b.z) * (a.z - b.z));
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: matmap_acceptance <cli_path> <scenario_dir> <work_dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::filesystem::path scenario_dir = argv[2];
    const std::filesystem::path work_dir = argv[3];
    std::filesystem::remove_all(work_dir);
    std::filesystem::create_directories(work_dir);

    const std::string study = (scenario_dir / "iv_d.json").string();

    // ----------------------------------------------------------------- 1, 2
    // Simulate the bundled study scenario; check the stock-variation times
    // and per-event step magnitudes from events.csv.
    {
        const auto started = std::chrono::steady_clock::now();
        const int rc = run_command("\"" + cli + "\" simulate \"" + study + "\" \"" +
                                   (work_dir / "run1").string() + "\" >/dev/null");
        const double elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        const auto rows = parse_events_csv(read_file(work_dir / "run1" / "events.csv"));
        const std::set<std::int64_t> expected_times = {20'000'000, 30'000'000,  40'000'000,
                                                       50'000'000, 100'000'000, 110'000'000,
                                                       120'000'000, 130'000'000};
        std::map<int, std::set<std::int64_t>> times_by_material;
        for (const auto& row : rows) times_by_material[row.material].insert(row.t_us);

        bool times_ok = rc == 0 && rows.size() == 24 && elapsed_s < 1.0;
        for (int material = 1; material <= 3; ++material) {
            times_ok = times_ok && times_by_material[material] == expected_times;
        }
        report(1, times_ok,
               "study reproduction, event times {20,30,40,50,100,110,120,130} s for all "
               "materials, simulate < 1 s (ran in " +
                   std::to_string(elapsed_s) + " s)");

        bool deltas_ok = rows.size() == 24;
        for (const auto& row : rows) {
            const double magnitude = static_cast<double>(row.material);
            const double expected = row.t_us <= 50'000'000 ? magnitude : -magnitude;
            deltas_ok = deltas_ok && row.delta_kg == expected;
        }
        report(2, deltas_ok, "study reproduction, step magnitudes +/-1, +/-2, +/-3 kg exactly");
    }

    // -------------------------------------------------------------------- 3
    // Plateau on (50 s, 100 s) equals [4, 8, 12] kg, exactly, on the
    // event-driven representation and on the brute-force oracle.
    {
        const auto net = load_study_network(scenario_dir);
        const auto series = stock_series(net);
        bool ok = series.breakpoints.size() == 8;
        if (ok) {
            const auto pos = std::lower_bound(series.breakpoints.begin(),
                                              series.breakpoints.end(), Time{50'000'000}) -
                             series.breakpoints.begin();
            const auto& plateau = series.plateaus[static_cast<std::size_t>(pos) + 1];
            ok = plateau == MassVector{4.0, 8.0, 12.0};
        }
        ok = ok && oracle::naive_network_stock(net, Time{75'000'000}) == MassVector{4.0, 8.0, 12.0};
        report(3, ok, "study plateau on (50 s, 100 s) equals [4, 8, 12] kg exactly");
    }

    // -------------------------------------------------------------------- 4
    // 200 randomized small networks: the event-driven series sampled on a
    // 0.1 s grid over the pulse hull matches naive evaluation exactly.
    {
        const auto started = std::chrono::steady_clock::now();
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
            const auto net = testgen::random_network(seed);
            const auto series = stock_series(net);
            const auto [lo, hi] = testgen::pulse_hull(net);
            const auto samples = sample_series(series, lo, hi, Time{100'000});
            std::size_t index = 0;
            for (__int128 cursor = lo.us; cursor <= hi.us && ok; cursor += 100'000, ++index) {
                const Time t{static_cast<std::int64_t>(cursor)};
                const auto expected = oracle::naive_network_stock(net, t);
                ok = samples[index].time == t && samples[index].value == expected;
            }
        }
        const double elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        ok = ok && elapsed_s < 30.0;
        report(4, ok,
               "oracle equivalence on 200 randomized networks, 0.1 s grid, exact (ran in " +
                   std::to_string(elapsed_s) + " s)");
    }

    // -------------------------------------------------------------------- 5
    // Conservation: closed-form mass-time integral equals the plateau-
    // weighted interval sum, exactly, on the same randomized networks.
    {
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
            const auto net = testgen::random_network(seed);
            const auto series = stock_series(net);
            const auto integral = mass_time_integral(net);
            MassVector weighted(net.registry.material_count(), 0.0);
            for (std::size_t k = 1; k < series.breakpoints.size(); ++k) {
                const auto len_us = static_cast<double>(series.breakpoints[k].us -
                                                        series.breakpoints[k - 1].us);
                for (std::size_t j = 0; j < weighted.size(); ++j) {
                    weighted[j] += len_us * series.plateaus[k][j];
                }
            }
            for (double& v : weighted) v /= kMicrosPerSecond;
            ok = weighted == integral;
        }
        report(5, ok, "conservation: mass-time integral equals plateau-weighted sum, exact");
    }

    // -------------------------------------------------------------------- 6
    // Linearity and equivariance on the randomized networks: partition
    // superposition and global time shift exact, composition scaling within
    // 1e-12 relative.
    {
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
            const auto net = testgen::random_network(seed);
            testgen::Rng rng(seed ^ 0xabcdef);
            const auto [lo, hi] = testgen::pulse_hull(net);

            // partition into two groups
            std::vector<VisionUnit> group_a, group_b;
            for (const auto& unit : net.units) {
                (rng.range(0, 1) == 0 ? group_a : group_b).push_back(unit);
            }
            std::vector<Network> groups;
            if (!group_a.empty()) groups.push_back(make_network(net.registry, group_a));
            if (!group_b.empty()) groups.push_back(make_network(net.registry, group_b));

            // scaled compositions
            const double alpha = 0.1 + 9.9 * rng.unit_real();
            std::vector<std::string> material_names, class_names;
            for (const auto& m : net.registry.materials()) material_names.push_back(m.name);
            for (const auto& c : net.registry.classes()) class_names.push_back(c.name);
            CompositionRegistry scaled_reg(material_names, class_names);
            for (const auto& c : net.registry.classes()) {
                MassVector masses = net.registry.composition(c.id);
                for (double& v : masses) v *= alpha;
                scaled_reg.register_class(c.id, masses);
            }
            const auto scaled_net = make_network(scaled_reg, net.units);

            // shifted pulses
            const std::int64_t delta_us = rng.range(-1'000'000'000, 1'000'000'000);
            std::vector<VisionUnit> shifted_units = net.units;
            for (auto& unit : shifted_units) {
                for (auto& [class_id, pulses] : unit.schedule) {
                    for (auto& pulse : pulses) pulse.center.us += delta_us;
                }
            }
            const auto shifted_net = make_network(net.registry, shifted_units);

            for (int k = 0; k < 20 && ok; ++k) {
                const Time t{lo.us + rng.range(0, std::max<std::int64_t>(1, hi.us - lo.us))};
                const auto full = network_stock(net, t);

                MassVector sum(full.size(), 0.0);
                for (const auto& group : groups) {
                    const auto part = network_stock(group, t);
                    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += part[j];
                }
                ok = ok && sum == full;

                const auto scaled = network_stock(scaled_net, t);
                for (std::size_t j = 0; j < full.size() && ok; ++j) {
                    ok = std::abs(scaled[j] - alpha * full[j]) <=
                         1e-12 * std::max(1.0, std::abs(alpha * full[j]));
                }

                ok = ok && network_stock(shifted_net, Time{t.us + delta_us}) == full;
            }
        }
        report(6, ok,
               "superposition and time shift exact, composition scaling within 1e-12 relative");
    }

    // -------------------------------------------------------------------- 7
    // Geometry: 1000 random valid transforms round-trip within 1e-9 cm and
    // preserve the pick-point distance within 1e-9 cm; improper and
    // perturbed matrices are rejected.
    {
        std::mt19937_64 rng(20240617);
        auto coord = [&rng](double span) {
            return span * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
        };
        bool ok = true;
        for (int k = 0; k < 1000 && ok; ++k) {
            FrameTransform f{random_rotation(rng), {coord(100), coord(100), coord(100)},
                             coord(10)};
            const TargetVector target{coord(50), coord(50), coord(50), coord(50)};
            const auto points = pick_points_robot(f, target);
            const auto [l1, l2] = split_target(target, f.plane_height_cm);

            ok = std::abs(dist(points.p1, points.p2) - dist(l1, l2)) <= 1e-9;

            FrameTransform inv;
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) inv.rotation.m[i][j] = f.rotation.m[j][i];
            }
            const Vec3 d = f.translation_cm;
            inv.translation_cm = {
                -(inv.rotation.m[0][0] * d.x + inv.rotation.m[0][1] * d.y + inv.rotation.m[0][2] * d.z),
                -(inv.rotation.m[1][0] * d.x + inv.rotation.m[1][1] * d.y + inv.rotation.m[1][2] * d.z),
                -(inv.rotation.m[2][0] * d.x + inv.rotation.m[2][1] * d.y + inv.rotation.m[2][2] * d.z)};
            ok = ok && dist(to_robot_frame(inv, points.p1), l1) <= 1e-9;
            ok = ok && dist(to_robot_frame(inv, points.p2), l2) <= 1e-9;
        }

        bool rejects = false;
        try {
            validate_rotation({1, 0, 0, 0, 1, 0, 0, 0, -1});
        } catch (const Error&) {
            rejects = true;
        }
        for (int k = 0; k < 100 && rejects; ++k) {
            auto r = random_rotation(rng);
            std::array<double, 9> raw;
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) raw[static_cast<std::size_t>(3 * i + j)] = r.m[i][j];
            }
            auto perturbed = raw;
            perturbed[static_cast<std::size_t>(rng() % 2 == 0 ? 1 : 3)] += 1e-6;
            try {
                validate_rotation(perturbed);
                rejects = false;
            } catch (const Error&) {
            }
            auto nudged = raw;
            for (double& v : nudged) v += 1e-12;
            try {
                validate_rotation(nudged);
            } catch (const Error&) {
                rejects = false;
            }
        }
        report(7, ok && rejects,
               "geometry round-trip and rigidity within 1e-9 cm over 1000 transforms; "
               "reflections and 1e-6 perturbations rejected");
    }

    // -------------------------------------------------------------------- 8
    // Determinism: consecutive runs byte-identical, parallel equals serial.
    {
        const int rc2 = run_command("\"" + cli + "\" simulate \"" + study + "\" \"" +
                                    (work_dir / "run2").string() + "\" >/dev/null");
        const int rc3 = run_command("\"" + cli + "\" simulate --parallel \"" + study + "\" \"" +
                                    (work_dir / "run3").string() + "\" >/dev/null");
        bool ok = rc2 == 0 && rc3 == 0;
        for (const char* name : {"series.csv", "events.csv", "map.csv", "summary.txt"}) {
            const auto first = read_file(work_dir / "run1" / name);
            ok = ok && !first.empty();
            ok = ok && first == read_file(work_dir / "run2" / name);
            ok = ok && first == read_file(work_dir / "run3" / name);
        }
        report(8, ok, "byte-identical repeated runs; parallel output matches serial");
    }

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
