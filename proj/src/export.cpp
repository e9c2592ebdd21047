#include "matmap/export.hpp"

#include "matmap/version.hpp"

#include <charconv>
#include <cstddef>
#include <string_view>
#include <system_error>

namespace matmap {

namespace {

void append_int(std::string& out, std::int64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

void append_kg(std::string& out, double kg) {
    out += format_kg(kg);
}

void append_row(std::string& out, Time t, const MassVector& values) {
    append_int(out, t.us);
    for (double v : values) {
        out.push_back(',');
        append_kg(out, v);
    }
    out.push_back('\n');
}

std::string series_header(const Network& net) {
    std::string header = "t_us";
    for (const auto& material : net.registry.materials()) {
        header += ',';
        header += material.name;
        header += "_kg";
    }
    header.push_back('\n');
    return header;
}

bool any_geo(const Network& net) {
    for (const auto& unit : net.units) {
        if (unit.location.geo) return true;
    }
    return false;
}

void append_json_string(std::string& out, std::string_view s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
}

} // namespace

std::string format_kg(double kg) {
    if (kg == 0.0) return "0";  // folds away the sign of -0.0
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, kg, std::chars_format::general, 9);
    return std::string(buf, ptr);
}

std::string render_series_csv(const Network& net, const StockSeries& series) {
    std::string out = series_header(net);
    const std::size_t n = series.breakpoints.size();
    if (n == 0) {
        append_row(out, Time{0}, series.plateaus.front());
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const Time prev = series.breakpoints[k - 1];
            const Time next = series.breakpoints[k];
            if (next.us - prev.us >= 2) {
                append_row(out, Time{prev.us + (next.us - prev.us) / 2}, series.plateaus[k]);
            }
        }
        append_row(out, series.breakpoints[k], series.boundary_values[k]);
    }
    return out;
}

std::string render_series_sampled_csv(const Network& net, const StockSeries& series,
                                      Time t0, Time t1, Time step) {
    std::string out = series_header(net);
    for (const auto& sample : sample_series(series, t0, t1, step)) {
        append_row(out, sample.time, sample.value);
    }
    return out;
}

std::string render_events_csv(const Network& net, const StockSeries& series, bool header) {
    (void)net;
    std::string out;
    if (header) out = "t_us,material,delta_kg,tau_after_kg\n";
    const std::size_t psi = series.plateaus.empty() ? 0 : series.plateaus.front().size();
    for (std::size_t k = 0; k < series.breakpoints.size(); ++k) {
        for (std::size_t j = 0; j < psi; ++j) {
            const double delta = series.plateaus[k + 1][j] - series.plateaus[k][j];
            if (delta == 0.0) continue;
            append_int(out, series.breakpoints[k].us);
            out.push_back(',');
            append_int(out, static_cast<std::int64_t>(j + 1));
            out.push_back(',');
            append_kg(out, delta);
            out.push_back(',');
            append_kg(out, series.plateaus[k + 1][j]);
            out.push_back('\n');
        }
    }
    return out;
}

std::string render_events_json(const Network& net, const StockSeries& series) {
    std::string out = "[";
    bool first = true;
    const std::size_t psi = series.plateaus.empty() ? 0 : series.plateaus.front().size();
    for (std::size_t k = 0; k < series.breakpoints.size(); ++k) {
        for (std::size_t j = 0; j < psi; ++j) {
            const double delta = series.plateaus[k + 1][j] - series.plateaus[k][j];
            if (delta == 0.0) continue;
            out += first ? "\n" : ",\n";
            first = false;
            out += "  {\"t_us\":";
            append_int(out, series.breakpoints[k].us);
            out += ",\"material\":";
            append_int(out, static_cast<std::int64_t>(j + 1));
            out += ",\"material_name\":";
            append_json_string(out, net.registry.materials()[j].name);
            out += ",\"delta_kg\":";
            append_kg(out, delta);
            out += ",\"tau_after_kg\":";
            append_kg(out, series.plateaus[k + 1][j]);
            out += "}";
        }
    }
    out += first ? "]\n" : "\n]\n";
    return out;
}

std::string render_map_csv(const Network& net, Time t, bool parallel) {
    const bool geo = any_geo(net);
    std::string out = "unit_id,x_m,y_m";
    if (geo) out += ",lat,lon";
    for (const auto& material : net.registry.materials()) {
        out += ',';
        out += material.name;
        out += "_kg";
    }
    out.push_back('\n');
    for (const auto& row : spatial_map(net, t, parallel)) {
        append_int(out, row.unit_id);
        out.push_back(',');
        append_kg(out, row.location.x_m);
        out.push_back(',');
        append_kg(out, row.location.y_m);
        if (geo) {
            out.push_back(',');
            if (row.location.geo) append_kg(out, row.location.geo->lat_deg);
            out.push_back(',');
            if (row.location.geo) append_kg(out, row.location.geo->lon_deg);
        }
        for (double v : row.stock_kg) {
            out.push_back(',');
            append_kg(out, v);
        }
        out.push_back('\n');
    }
    return out;
}

std::string render_map_json(const Network& net, Time t, bool parallel) {
    std::string out = "[";
    bool first = true;
    for (const auto& row : spatial_map(net, t, parallel)) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "  {\"unit_id\":";
        append_int(out, row.unit_id);
        out += ",\"x_m\":";
        append_kg(out, row.location.x_m);
        out += ",\"y_m\":";
        append_kg(out, row.location.y_m);
        if (row.location.geo) {
            out += ",\"lat\":";
            append_kg(out, row.location.geo->lat_deg);
            out += ",\"lon\":";
            append_kg(out, row.location.geo->lon_deg);
        }
        out += ",\"stock_kg\":{";
        const auto& materials = net.registry.materials();
        for (std::size_t j = 0; j < materials.size(); ++j) {
            if (j > 0) out.push_back(',');
            append_json_string(out, materials[j].name);
            out.push_back(':');
            append_kg(out, row.stock_kg[j]);
        }
        out += "}}";
    }
    out += first ? "]\n" : "\n]\n";
    return out;
}

std::string render_summary(const Network& net, const StockSeries& series) {
    std::size_t event_count = 0;
    const std::size_t psi = series.plateaus.empty() ? 0 : series.plateaus.front().size();
    for (std::size_t k = 0; k < series.breakpoints.size(); ++k) {
        for (std::size_t j = 0; j < psi; ++j) {
            if (series.plateaus[k + 1][j] != series.plateaus[k][j]) ++event_count;
        }
    }
    const MassVector integral = mass_time_integral(net);

    std::string out;
    out += "tool: matmap ";
    out += kVersion;
    out += "\nunits: ";
    append_int(out, static_cast<std::int64_t>(net.units.size()));
    out += "\nclasses: ";
    append_int(out, static_cast<std::int64_t>(net.registry.class_count()));
    out += "\nmaterials: ";
    append_int(out, static_cast<std::int64_t>(net.registry.material_count()));
    out += "\nbreakpoints: ";
    append_int(out, static_cast<std::int64_t>(series.breakpoints.size()));
    out += "\nevents: ";
    append_int(out, static_cast<std::int64_t>(event_count));
    out += "\nmass_time_integral_kg_s:\n";
    const auto& materials = net.registry.materials();
    for (std::size_t j = 0; j < materials.size(); ++j) {
        out += "  ";
        out += materials[j].name;
        out += ": ";
        append_kg(out, integral[j]);
        out.push_back('\n');
    }
    return out;
}

} // namespace matmap
