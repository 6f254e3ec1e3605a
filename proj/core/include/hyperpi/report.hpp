#pragma once

#include "hyperpi/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperpi {

/// Raised when a report artifact cannot be written; the message names the
/// path involved.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column layout of the run table. One line per executed run.
inline constexpr std::string_view kRunCsvHeader =
    "dimension,sample_size,run,seed_stream,trials,hits,p_hat,pi_hat,valid,"
    "std_error,wall_time_ms";

/// Ten-significant-digit decimal rendering used for every floating-point
/// field in the run table.
std::string format_decimal(double value);

/// Writes the run table, rows ordered by (dimension, sample_size, run).
/// Invalid runs keep their tallies but leave pi_hat and std_error empty.
std::string run_csv(const ResultSet& results);
void write_run_csv(const ResultSet& results, std::ostream& out);
void write_run_csv(const ResultSet& results,
                   const std::filesystem::path& destination);

/// Writes the aggregate summary as JSON: one entry per dimension carrying
/// "dimension", "rows" (each with "sample_size", "run_estimates", "average",
/// "wall_times_ms"), "final", "relative_error" and "excluded_invalid_runs",
/// plus the top-level "grand_mean". A NaN grand mean (no surviving
/// dimensions) serializes as null.
std::string summary_json(const ResultSet& results);
void write_summary_json(const ResultSet& results, std::ostream& out);
void write_summary_json(const ResultSet& results,
                        const std::filesystem::path& destination);

/// One polyline of a chart. x must be strictly increasing.
struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::optional<double> reference_y;  // dashed horizontal rule, e.g. pi
    std::optional<std::string> reference_label;
    int width = 720;
    int height = 480;
};

/// Renders an SVG 1.1 line chart with axes, ticks, point markers and an
/// optional reference line. Output is a pure function of the inputs: equal
/// data yields byte-identical markup. Throws std::invalid_argument for an
/// empty series list, a series without points, or non-increasing x values.
std::string render_line_chart(const std::vector<ChartSeries>& series,
                              const ChartOptions& options);
void write_line_chart(const std::vector<ChartSeries>& series,
                      const ChartOptions& options,
                      const std::filesystem::path& destination);

}  // namespace hyperpi
