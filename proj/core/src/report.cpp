#include "hyperpi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hyperpi {
namespace {

void write_file(const std::filesystem::path& destination,
                const std::string& content) {
    std::ofstream out(destination, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + destination.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed while writing " + destination.string());
    }
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Fixed two-decimal pixel coordinates keep the markup deterministic.
std::string px(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string tick_label(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

double nice_step(double range, int target_ticks) {
    const double raw = range / target_ticks;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double normalized = raw / magnitude;
    double step = 10.0;
    if (normalized < 1.5) {
        step = 1.0;
    } else if (normalized < 3.5) {
        step = 2.0;
    } else if (normalized < 7.5) {
        step = 5.0;
    }
    return step * magnitude;
}

std::vector<double> nice_ticks(double lo, double hi, int target_ticks) {
    const double step = nice_step(hi - lo, target_ticks);
    std::vector<double> ticks;
    double value = std::ceil(lo / step) * step;
    // Guard against -0.00 in labels.
    for (; value <= hi + step * 1e-9; value += step) {
        ticks.push_back(std::abs(value) < step * 1e-9 ? 0.0 : value);
    }
    if (ticks.size() < 2) ticks = {lo, hi};
    return ticks;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

}  // namespace

std::string format_decimal(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::string run_csv(const ResultSet& results) {
    std::vector<const RunRecord*> rows;
    rows.reserve(results.runs.size());
    for (const RunRecord& run : results.runs) rows.push_back(&run);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RunRecord* a, const RunRecord* b) {
                         if (a->dimension != b->dimension) {
                             return a->dimension < b->dimension;
                         }
                         if (a->sample_size != b->sample_size) {
                             return a->sample_size < b->sample_size;
                         }
                         return a->run_index < b->run_index;
                     });

    std::string out{kRunCsvHeader};
    out += '\n';
    for (const RunRecord* run : rows) {
        out += std::to_string(run->dimension);
        out += ',';
        out += std::to_string(run->sample_size);
        out += ',';
        out += std::to_string(run->run_index);
        out += ',';
        out += std::to_string(run->seed_stream);
        out += ',';
        out += std::to_string(run->trials);
        out += ',';
        out += std::to_string(run->hits);
        out += ',';
        out += format_decimal(run->p_hat);
        out += ',';
        if (run->pi_hat) out += format_decimal(*run->pi_hat);
        out += ',';
        out += run->valid ? "true" : "false";
        out += ',';
        if (run->std_error) out += format_decimal(*run->std_error);
        out += ',';
        out += format_decimal(run->wall_time_ms);
        out += '\n';
    }
    return out;
}

void write_run_csv(const ResultSet& results, std::ostream& out) {
    out << run_csv(results);
}

void write_run_csv(const ResultSet& results,
                   const std::filesystem::path& destination) {
    write_file(destination, run_csv(results));
}

std::string summary_json(const ResultSet& results) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json dims = nlohmann::ordered_json::array();
    for (const DimensionSummary& summary : results.summaries) {
        nlohmann::ordered_json entry;
        entry["dimension"] = summary.d.value();
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const SummaryRow& row : summary.rows) {
            nlohmann::ordered_json r;
            r["sample_size"] = row.sample_size;
            r["run_estimates"] = row.run_estimates;
            r["average"] = row.average;
            r["wall_times_ms"] = row.wall_times_ms;
            rows.push_back(std::move(r));
        }
        entry["rows"] = std::move(rows);
        entry["final"] = summary.final_value;
        entry["relative_error"] = summary.relative_error;
        entry["excluded_invalid_runs"] = summary.excluded_invalid_runs;
        dims.push_back(std::move(entry));
    }
    doc["dimensions"] = std::move(dims);
    doc["grand_mean"] = results.grand_mean;  // NaN dumps as null
    return doc.dump(2) + "\n";
}

void write_summary_json(const ResultSet& results, std::ostream& out) {
    out << summary_json(results);
}

void write_summary_json(const ResultSet& results,
                        const std::filesystem::path& destination) {
    write_file(destination, summary_json(results));
}

std::string render_line_chart(const std::vector<ChartSeries>& series,
                              const ChartOptions& options) {
    if (series.empty()) {
        throw std::invalid_argument("render_line_chart: no series to draw");
    }
    for (const ChartSeries& s : series) {
        if (s.points.empty()) {
            throw std::invalid_argument("render_line_chart: series \"" +
                                        s.label + "\" has no points");
        }
        for (std::size_t i = 1; i < s.points.size(); ++i) {
            if (!(s.points[i].first > s.points[i - 1].first)) {
                throw std::invalid_argument(
                    "render_line_chart: series \"" + s.label +
                    "\" x values must be strictly increasing");
            }
        }
    }

    double x_min = series[0].points[0].first;
    double x_max = x_min;
    double y_min = series[0].points[0].second;
    double y_max = y_min;
    for (const ChartSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (options.reference_y) {
        y_min = std::min(y_min, *options.reference_y);
        y_max = std::max(y_max, *options.reference_y);
    }
    if (x_max == x_min) {
        const double pad = x_min == 0.0 ? 1.0 : std::abs(x_min) * 0.1;
        x_min -= pad;
        x_max += pad;
    }
    if (y_max == y_min) {
        const double pad = y_min == 0.0 ? 1.0 : std::abs(y_min) * 0.1;
        y_min -= pad;
        y_max += pad;
    }

    const double left = 64.0;
    const double right = static_cast<double>(options.width) - 20.0;
    const double top = options.title.empty() ? 20.0 : 44.0;
    const double bottom = static_cast<double>(options.height) - 56.0;
    const double plot_w = right - left;
    const double plot_h = bottom - top;

    const auto to_px_x = [&](double x) {
        return left + (x - x_min) / (x_max - x_min) * plot_w;
    };
    const auto to_px_y = [&](double y) {
        return bottom - (y - y_min) / (y_max - y_min) * plot_h;
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" viewBox=\"0 0 " +
           std::to_string(options.width) + " " +
           std::to_string(options.height) + "\">\n";
    svg += "  <rect width=\"" + std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" fill=\"#ffffff\"/>\n";

    if (!options.title.empty()) {
        svg += "  <text x=\"" + px((left + right) / 2.0) +
               "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" +
               xml_escape(options.title) + "</text>\n";
    }

    // Axes.
    svg += "  <line x1=\"" + px(left) + "\" y1=\"" + px(bottom) + "\" x2=\"" +
           px(right) + "\" y2=\"" + px(bottom) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    svg += "  <line x1=\"" + px(left) + "\" y1=\"" + px(top) + "\" x2=\"" +
           px(left) + "\" y2=\"" + px(bottom) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    for (const double tick : nice_ticks(x_min, x_max, 7)) {
        const double x = to_px_x(tick);
        svg += "  <line x1=\"" + px(x) + "\" y1=\"" + px(bottom) + "\" x2=\"" +
               px(x) + "\" y2=\"" + px(bottom + 5.0) +
               "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        svg += "  <text x=\"" + px(x) + "\" y=\"" + px(bottom + 20.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"12\">" +
               xml_escape(tick_label(tick)) + "</text>\n";
    }
    for (const double tick : nice_ticks(y_min, y_max, 6)) {
        const double y = to_px_y(tick);
        svg += "  <line x1=\"" + px(left - 5.0) + "\" y1=\"" + px(y) +
               "\" x2=\"" + px(left) + "\" y2=\"" + px(y) +
               "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        svg += "  <text x=\"" + px(left - 8.0) + "\" y=\"" + px(y + 4.0) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\">" +
               xml_escape(tick_label(tick)) + "</text>\n";
    }

    if (!options.x_label.empty()) {
        svg += "  <text x=\"" + px((left + right) / 2.0) + "\" y=\"" +
               px(static_cast<double>(options.height) - 12.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"13\">" +
               xml_escape(options.x_label) + "</text>\n";
    }
    if (!options.y_label.empty()) {
        svg += "  <text x=\"16\" y=\"" + px((top + bottom) / 2.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"13\" transform=\"rotate(-90 16 " +
               px((top + bottom) / 2.0) + ")\">" +
               xml_escape(options.y_label) + "</text>\n";
    }

    if (options.reference_y) {
        const double y = to_px_y(*options.reference_y);
        svg += "  <line x1=\"" + px(left) + "\" y1=\"" + px(y) + "\" x2=\"" +
               px(right) + "\" y2=\"" + px(y) +
               "\" stroke=\"#555555\" stroke-width=\"1\" "
               "stroke-dasharray=\"6 4\"/>\n";
        if (options.reference_label) {
            svg += "  <text x=\"" + px(right - 4.0) + "\" y=\"" +
                   px(y - 6.0) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                   "font-size=\"12\" fill=\"#555555\">" +
                   xml_escape(*options.reference_label) + "</text>\n";
        }
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        std::string points;
        for (const auto& [x, y] : series[i].points) {
            if (!points.empty()) points += ' ';
            points += px(to_px_x(x)) + "," + px(to_px_y(y));
        }
        svg += "  <polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        for (const auto& [x, y] : series[i].points) {
            svg += "  <circle cx=\"" + px(to_px_x(x)) + "\" cy=\"" +
                   px(to_px_y(y)) + "\" r=\"3\" fill=\"";
            svg += color;
            svg += "\"/>\n";
        }
    }

    if (series.size() > 1) {
        double legend_y = top + 12.0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const char* color = kPalette[i % kPaletteSize];
            svg += "  <line x1=\"" + px(right - 150.0) + "\" y1=\"" +
                   px(legend_y - 4.0) + "\" x2=\"" + px(right - 126.0) +
                   "\" y2=\"" + px(legend_y - 4.0) + "\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"2\"/>\n";
            svg += "  <text x=\"" + px(right - 120.0) + "\" y=\"" +
                   px(legend_y) +
                   "\" font-family=\"sans-serif\" font-size=\"12\">" +
                   xml_escape(series[i].label) + "</text>\n";
            legend_y += 18.0;
        }
    }

    svg += "</svg>\n";
    return svg;
}

void write_line_chart(const std::vector<ChartSeries>& series,
                      const ChartOptions& options,
                      const std::filesystem::path& destination) {
    write_file(destination, render_line_chart(series, options));
}

}  // namespace hyperpi
