#include "matmap/export.hpp"

#include "matmap/scenario.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace matmap;
using testutil::sec;
using testutil::usec;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Network study_network() {
    return build_network(
        parse_scenario(read_file(std::string(MATMAP_SCENARIO_DIR) + "/iv_d.json")));
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("kg formatting is exact for halves and trims noise") {
    CHECK(format_kg(0.5) == "0.5");
    CHECK(format_kg(4.0) == "4");
    CHECK(format_kg(0.0) == "0");
    CHECK(format_kg(-0.0) == "0");
    CHECK(format_kg(-1.0) == "-1");
    CHECK(format_kg(320.0) == "320");
    CHECK(format_kg(12.25) == "12.25");
    CHECK(format_kg(1.0 / 3.0) == "0.333333333");
}

TEST_CASE("event-driven series rows are exact evaluations") {
    const auto net = study_network();
    const auto series = stock_series(net);
    const auto lines = lines_of(render_series_csv(net, series));
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "t_us,plastic_kg,glass_kg,gold_kg");
    // first breakpoint carries the edge half-values, the following interior
    // instant carries the plateau
    CHECK(lines[1] == "20000000,0.5,1,1.5");
    CHECK(lines[2] == "25000000,1,2,3");
    // 8 breakpoints + 7 interior instants
    CHECK(lines.size() == 1 + 15);
}

TEST_CASE("a silent network renders a single zero row") {
    CompositionRegistry reg({"plastic"}, {});
    const auto net = make_network(std::move(reg), {});
    const auto series = stock_series(net);
    const auto lines = lines_of(render_series_csv(net, series));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "0,0");
}

TEST_CASE("one-microsecond intervals get no interior row") {
    const char* text = R"({
        "materials": ["a"],
        "classes": ["c"],
        "compositions": {"c": [1]},
        "units": [{"id": 1, "x_m": 0, "y_m": 0, "pulses": [
            {"class": "c", "start_s": 0, "end_s": "0.00001"},
            {"class": "c", "start_s": "0.000011", "end_s": "0.000021"}
        ]}]
    })";
    const auto net = build_network(parse_scenario(text));
    const auto series = stock_series(net);
    REQUIRE(series.breakpoints.size() == 4);  // 0, 10, 11, 21 us
    const auto lines = lines_of(render_series_csv(net, series));
    // 4 breakpoints + interior rows for the 10 us intervals only
    CHECK(lines.size() == 1 + 4 + 2);
    for (const auto& line : lines) {
        CHECK(line.find("10500") == std::string::npos);  // nothing between 10 and 11 us
    }
}

TEST_CASE("sampled series matches the requested grid") {
    const auto net = study_network();
    const auto series = stock_series(net);
    const auto lines = lines_of(render_series_sampled_csv(net, series, sec(0), sec(150), sec(5)));
    REQUIRE(lines.size() == 1 + 31);
    CHECK(lines[1] == "0,0,0,0");
    CHECK(lines[5] == "20000000,0.5,1,1.5");
    CHECK(lines[16] == "75000000,4,8,12");
}

TEST_CASE("events render with deltas and running totals") {
    const auto net = study_network();
    const auto series = stock_series(net);
    const auto lines = lines_of(render_events_csv(net, series, true));
    REQUIRE(lines.size() == 1 + 24);
    CHECK(lines[0] == "t_us,material,delta_kg,tau_after_kg");
    CHECK(lines[1] == "20000000,1,1,1");
    CHECK(lines[2] == "20000000,2,2,2");
    CHECK(lines[3] == "20000000,3,3,3");
    CHECK(lines[24] == "130000000,3,-3,0");

    const auto headerless = render_events_csv(net, series, false);
    CHECK(lines_of(headerless).size() == 24);

    SUBCASE("empty events render as nothing or an empty JSON array") {
        CompositionRegistry reg({"plastic"}, {});
        const auto silent = make_network(std::move(reg), {});
        const auto silent_series = stock_series(silent);
        CHECK(render_events_csv(silent, silent_series, false).empty());
        CHECK(render_events_json(silent, silent_series) == "[]\n");
    }
}

TEST_CASE("events JSON carries material names") {
    const auto net = study_network();
    const auto series = stock_series(net);
    const auto json = render_events_json(net, series);
    CHECK(json.find("\"material_name\":\"plastic\"") != std::string::npos);
    CHECK(json.find("\"delta_kg\":-3") != std::string::npos);
    CHECK(json.find("\"t_us\":130000000") != std::string::npos);
}

TEST_CASE("map rows include geo columns only when tagged") {
    const auto net = study_network();
    const auto lines = lines_of(render_map_csv(net, sec(75)));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "unit_id,x_m,y_m,lat,lon,plastic_kg,glass_kg,gold_kg");
    CHECK(lines[1] == "1,0,0,52.7721,-1.2062,2,4,6");
    CHECK(lines[2] == "2,250,120,52.7705,-1.2031,2,4,6");

    CompositionRegistry reg({"plastic"}, {"c"});
    reg.register_class(1, MassVector{1.0});
    VisionUnit unit{1, {1.5, 2.5, {}}, {}};
    const auto plain = make_network(std::move(reg), {unit});
    const auto plain_lines = lines_of(render_map_csv(plain, sec(0)));
    CHECK(plain_lines[0] == "unit_id,x_m,y_m,plastic_kg");
    CHECK(plain_lines[1] == "1,1.5,2.5,0");
}

TEST_CASE("map JSON nests per-material stocks") {
    const auto net = study_network();
    const auto json = render_map_json(net, sec(75));
    CHECK(json.find("\"unit_id\":1") != std::string::npos);
    CHECK(json.find("\"stock_kg\":{\"plastic\":2,\"glass\":4,\"gold\":6}") != std::string::npos);
}

TEST_CASE("summary reports shape, counts and integrals") {
    const auto net = study_network();
    const auto series = stock_series(net);
    const auto summary = render_summary(net, series);
    CHECK(summary.find("units: 2") != std::string::npos);
    CHECK(summary.find("classes: 2") != std::string::npos);
    CHECK(summary.find("materials: 3") != std::string::npos);
    CHECK(summary.find("breakpoints: 8") != std::string::npos);
    CHECK(summary.find("events: 24") != std::string::npos);
    CHECK(summary.find("plastic: 320") != std::string::npos);
    CHECK(summary.find("gold: 960") != std::string::npos);
}

TEST_CASE("renderings are byte-deterministic") {
    const auto net = study_network();
    const auto series = stock_series(net);
    CHECK(render_series_csv(net, series) == render_series_csv(net, series));
    CHECK(render_events_json(net, series) == render_events_json(net, series));
    CHECK(render_map_csv(net, sec(75)) == render_map_csv(net, sec(75)));
    CHECK(render_summary(net, series) == render_summary(net, series));
}

TEST_CASE("series rows equal the column sums of the map at the same instant") {
    const auto net = study_network();
    const auto series = stock_series(net);
    for (const auto& line : lines_of(render_series_csv(net, series))) {
        if (line.empty() || line[0] == 't') continue;
        const auto comma = line.find(',');
        const Time t{std::stoll(line.substr(0, comma))};

        MassVector sums(net.registry.material_count(), 0.0);
        for (const auto& row : spatial_map(net, t)) {
            for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += row.stock_kg[j];
        }
        std::string rebuilt = line.substr(0, comma);
        for (double v : sums) rebuilt += "," + format_kg(v);
        CHECK(rebuilt == line);
    }
}
