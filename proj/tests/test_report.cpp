#include "hyperpi/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using namespace hyperpi;

namespace {

ResultSet sample_results() {
    ExperimentPlan plan;
    plan.dimensions = {2, 3};
    plan.schedule[2] = {{1000, 2}, {2000, 2}};
    plan.schedule[3] = {{1500, 2}};
    plan.root_seed = 11;
    return run_experiment(plan);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("hyperpi_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("format_decimal prints ten significant digits") {
    CHECK(format_decimal(3.141592653589793) == "3.141592654");
    CHECK(format_decimal(0.25) == "0.25");
    CHECK(format_decimal(100000000.0) == "100000000");
    CHECK(format_decimal(2.5e-8) == "2.5e-08");
    CHECK(format_decimal(0.0) == "0");
    CHECK(format_decimal(-0.0029579435) == "-0.0029579435");
}

TEST_CASE("run table layout is fixed and fully specified") {
    CHECK(kRunCsvHeader ==
          "dimension,sample_size,run,seed_stream,trials,hits,p_hat,pi_hat,"
          "valid,std_error,wall_time_ms");

    // Hand-built records, deliberately out of order: the writer must sort by
    // (dimension, sample_size, run).
    ResultSet results;
    RunRecord valid;
    valid.dimension = 3;
    valid.sample_size = 1000;
    valid.run_index = 0;
    valid.seed_stream = 42;
    valid.trials = 1000;
    valid.hits = 524;
    valid.p_hat = 0.524;
    valid.pi_hat = 3.143197346298971;
    valid.std_error = 0.0856;
    valid.valid = true;
    valid.wall_time_ms = 1.5;
    RunRecord invalid;
    invalid.dimension = 2;
    invalid.sample_size = 500;
    invalid.run_index = 1;
    invalid.seed_stream = 7;
    invalid.trials = 500;
    invalid.hits = 0;
    invalid.p_hat = 0.0;
    invalid.valid = false;
    invalid.wall_time_ms = 0.25;
    results.runs = {valid, invalid};

    const std::string expected =
        "dimension,sample_size,run,seed_stream,trials,hits,p_hat,pi_hat,"
        "valid,std_error,wall_time_ms\n"
        "2,500,1,7,500,0,0,,false,,0.25\n"
        "3,1000,0,42,1000,524,0.524,3.143197346,true,0.0856,1.5\n";
    CHECK(run_csv(results) == expected);
}

TEST_CASE("run table round-trips an executed sweep") {
    const ResultSet results = sample_results();
    const std::string csv = run_csv(results);
    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == results.runs.size() + 1);
    CHECK(lines[0] == std::string(kRunCsvHeader));

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_fields(lines[i]);
        REQUIRE(fields.size() == 11);
        const unsigned dimension =
            static_cast<unsigned>(std::stoul(fields[0]));
        const std::uint64_t sample_size = std::stoull(fields[1]);
        const unsigned run_index = static_cast<unsigned>(std::stoul(fields[2]));
        bool found = false;
        for (const RunRecord& run : results.runs) {
            if (run.dimension != dimension || run.sample_size != sample_size ||
                run.run_index != run_index) {
                continue;
            }
            found = true;
            CHECK(std::stoull(fields[3]) == run.seed_stream);
            CHECK(std::stoull(fields[4]) == run.trials);
            CHECK(std::stoull(fields[5]) == run.hits);
            CHECK(std::stod(fields[6]) ==
                  doctest::Approx(run.p_hat).epsilon(1e-9));
            CHECK(fields[8] == (run.valid ? "true" : "false"));
            if (run.valid) {
                CHECK(std::stod(fields[7]) ==
                      doctest::Approx(*run.pi_hat).epsilon(1e-9));
            } else {
                CHECK(fields[7].empty());
            }
        }
        CHECK(found);
    }

    // Ordering: (dimension, sample_size, run) ascending.
    std::vector<std::string> sorted_keys;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_fields(lines[i]);
        char key[64];
        std::snprintf(key, sizeof(key), "%08u|%012llu|%08u",
                      static_cast<unsigned>(std::stoul(fields[0])),
                      static_cast<unsigned long long>(std::stoull(fields[1])),
                      static_cast<unsigned>(std::stoul(fields[2])));
        sorted_keys.push_back(key);
    }
    CHECK(std::is_sorted(sorted_keys.begin(), sorted_keys.end()));
}

TEST_CASE("summary JSON carries the agreed field names and values") {
    const ResultSet results = sample_results();
    const std::string text = summary_json(results);
    CHECK(summary_json(results) == text);  // deterministic

    const nlohmann::json doc = nlohmann::json::parse(text);
    REQUIRE(doc.contains("dimensions"));
    REQUIRE(doc.contains("grand_mean"));
    CHECK(doc["grand_mean"].get<double>() ==
          doctest::Approx(results.grand_mean).epsilon(1e-12));

    REQUIRE(doc["dimensions"].size() == results.summaries.size());
    for (std::size_t i = 0; i < results.summaries.size(); ++i) {
        const nlohmann::json& entry = doc["dimensions"][i];
        const DimensionSummary& summary = results.summaries[i];
        CHECK(entry["dimension"].get<unsigned>() == summary.d.value());
        CHECK(entry["final"].get<double>() ==
              doctest::Approx(summary.final_value).epsilon(1e-12));
        CHECK(entry["relative_error"].get<double>() ==
              doctest::Approx(summary.relative_error).epsilon(1e-12));
        CHECK(entry["excluded_invalid_runs"].get<std::uint64_t>() ==
              summary.excluded_invalid_runs);
        REQUIRE(entry["rows"].size() == summary.rows.size());
        for (std::size_t r = 0; r < summary.rows.size(); ++r) {
            const nlohmann::json& row = entry["rows"][r];
            CHECK(row["sample_size"].get<std::uint64_t>() ==
                  summary.rows[r].sample_size);
            CHECK(row["average"].get<double>() ==
                  doctest::Approx(summary.rows[r].average).epsilon(1e-12));
            REQUIRE(row["run_estimates"].size() ==
                    summary.rows[r].run_estimates.size());
            REQUIRE(row["wall_times_ms"].size() ==
                    summary.rows[r].wall_times_ms.size());
        }
    }
}

TEST_CASE("summary JSON writes null for an empty grand mean") {
    ExperimentPlan plan;
    plan.dimensions = {20};
    plan.schedule[20] = {{1000, 2}};
    const ResultSet results = run_experiment(plan);
    REQUIRE(results.summaries.empty());
    const nlohmann::json doc = nlohmann::json::parse(summary_json(results));
    CHECK(doc["grand_mean"].is_null());
    CHECK(doc["dimensions"].empty());
}

TEST_CASE("line charts are deterministic structured SVG") {
    const std::vector<ChartSeries> series{
        {"final", {{2.0, 3.13}, {3.0, 3.15}, {4.0, 3.14}}}};
    ChartOptions options;
    options.title = "estimate <by> dimension & more";
    options.x_label = "dimension";
    options.y_label = "estimate";
    options.reference_y = 3.141592653589793;
    options.reference_label = "pi";

    const std::string svg = render_line_chart(series, options);
    CHECK(render_line_chart(series, options) == svg);  // byte-identical

    CHECK(svg.find("<?xml version=\"1.0\"") == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" "
                   "version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);  // reference
    CHECK(svg.find("estimate &lt;by&gt; dimension &amp; more") !=
          std::string::npos);

    // One marker per point.
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 3);

    // No legend for a single series; two series get one.
    CHECK(svg.find(">final</text>") == std::string::npos);
    const std::vector<ChartSeries> two{
        {"a", {{1.0, 1.0}, {2.0, 2.0}}},
        {"b", {{1.0, 2.0}, {2.0, 1.0}}},
    };
    const std::string with_legend = render_line_chart(two, ChartOptions{});
    CHECK(with_legend.find(">a</text>") != std::string::npos);
    CHECK(with_legend.find(">b</text>") != std::string::npos);
}

TEST_CASE("line charts cope with degenerate ranges") {
    // A single point has no x or y spread; the chart must still render.
    const std::vector<ChartSeries> single{{"p", {{2.0, 3.14}}}};
    const std::string svg = render_line_chart(single, ChartOptions{});
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
}

TEST_CASE("line charts reject malformed series") {
    CHECK_THROWS_AS(render_line_chart({}, ChartOptions{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(render_line_chart({{"empty", {}}}, ChartOptions{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        render_line_chart({{"dup", {{1.0, 1.0}, {1.0, 2.0}}}},
                          ChartOptions{}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        render_line_chart({{"back", {{2.0, 1.0}, {1.0, 2.0}}}},
                          ChartOptions{}),
        std::invalid_argument);
}

TEST_CASE("writers create files that match the in-memory renderings") {
    const TempDir dir;
    const ResultSet results = sample_results();

    write_run_csv(results, dir.path / "runs.csv");
    write_summary_json(results, dir.path / "summary.json");
    const std::vector<ChartSeries> series{{"s", {{1.0, 1.0}, {2.0, 4.0}}}};
    write_line_chart(series, ChartOptions{}, dir.path / "chart.svg");

    const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    CHECK(slurp(dir.path / "runs.csv") == run_csv(results));
    CHECK(slurp(dir.path / "summary.json") == summary_json(results));
    CHECK(slurp(dir.path / "chart.svg") ==
          render_line_chart(series, ChartOptions{}));

    std::ostringstream csv_stream;
    write_run_csv(results, csv_stream);
    CHECK(csv_stream.str() == run_csv(results));
    std::ostringstream json_stream;
    write_summary_json(results, json_stream);
    CHECK(json_stream.str() == summary_json(results));
}

TEST_CASE("writers surface the failing path") {
    const ResultSet results = sample_results();
    const std::filesystem::path bad =
        "/nonexistent_hyperpi_dir/out.csv";
    CHECK_THROWS_AS(write_run_csv(results, bad), IoError);
    try {
        write_run_csv(results, bad);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("nonexistent_hyperpi_dir") !=
              std::string::npos);
    }
}
