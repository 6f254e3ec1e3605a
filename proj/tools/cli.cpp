#include "cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hyperpi/report.hpp"

namespace hyperpi::cli {
namespace {

struct EstimateArgs {
    unsigned dim = 0;
    std::uint64_t samples = 0;
    unsigned runs = 1;
    std::uint64_t seed = 0;
    bool wilson = false;
};

struct SweepArgs {
    std::string plan_path;
    bool use_default = false;
    std::vector<unsigned> dims;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

unsigned resolve_workers(const std::optional<unsigned>& from_flag,
                         const std::optional<unsigned>& from_env,
                         std::optional<unsigned> from_plan) {
    if (from_flag) return *from_flag;
    if (from_env) return *from_env;
    if (from_plan) return *from_plan;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::string fmt(double value) { return format_decimal(value); }

int run_analytic(unsigned dim) {
    const Dimension d(dim);
    const double log_p = log_inside_probability(d);
    std::cout << "d                  = " << dim << "\n";
    std::cout << "inside probability = " << fmt(inside_probability(d)) << "\n";
    std::cout << "log10 probability  = " << fmt(log_p / std::numbers::ln10)
              << "\n";
    std::cout << "unit ball volume   = " << fmt(unit_ball_volume(d)) << "\n";
    std::cout << "cube volume        = " << fmt(std::ldexp(1.0, static_cast<int>(dim)))
              << "\n";
    if (dim >= 2) {
        const double approx = stirling_ratio_approx(d);
        std::cout << "stirling approx    = " << fmt(approx) << "\n";
        std::cout << "approx / exact     = "
                  << fmt(std::exp(log_stirling_ratio_approx(d) - log_p))
                  << "\n";
    }
    return 0;
}

int run_size(unsigned dim, double target) {
    std::cout << required_samples(Dimension(dim), target) << "\n";
    return 0;
}

void print_invalid_warning(const ResultSet& results) {
    std::uint64_t excluded = 0;
    for (const DimensionSummary& s : results.summaries) {
        excluded += s.excluded_invalid_runs;
    }
    for (const RunRecord& run : results.runs) {
        // Runs of dimensions that never aggregated are not counted in any
        // summary; pick them up from the raw records.
        if (!run.valid) {
            bool summarized = false;
            for (const DimensionSummary& s : results.summaries) {
                if (s.d.value() == run.dimension) {
                    summarized = true;
                    break;
                }
            }
            if (!summarized) ++excluded;
        }
    }
    if (excluded > 0) {
        std::cerr << "warning: " << excluded
                  << " run(s) produced zero hits and were excluded from "
                     "aggregation\n";
    }
}

void print_failures(const ResultSet& results) {
    for (const CellFailure& f : results.failures) {
        std::cerr << "warning: d=" << f.dimension;
        if (f.sample_size > 0) {
            std::cerr << " size=" << f.sample_size << " run=" << f.run_index;
        }
        std::cerr << ": " << f.message << "\n";
    }
}

int run_estimate(const EstimateArgs& args, unsigned workers) {
    ExperimentPlan plan;
    plan.dimensions = {args.dim};
    plan.schedule[args.dim] = {{args.samples, args.runs}};
    plan.root_seed = args.seed;
    plan.workers = workers;

    const ResultSet results = run_experiment(plan);
    const IntervalMethod method =
        args.wilson ? IntervalMethod::wilson : IntervalMethod::wald;

    std::cout << "d = " << args.dim << ", samples = " << args.samples
              << ", runs = " << args.runs << ", seed = " << args.seed << "\n";
    for (const RunRecord& run : results.runs) {
        std::cout << "run " << run.run_index << ": ";
        if (!run.valid) {
            std::cout << "no hits in " << run.trials
                      << " samples; estimate invalid\n";
            continue;
        }
        const PiEstimate est =
            estimate_pi(HitCount{Dimension(args.dim), run.trials, run.hits},
                        method);
        std::cout << "pi_hat = " << fmt(*est.pi_hat);
        if (est.std_error) std::cout << ", se = " << fmt(*est.std_error);
        if (est.ci_low && est.ci_high) {
            std::cout << ", ci95 = [" << fmt(*est.ci_low) << ", "
                      << fmt(*est.ci_high) << "]";
        }
        std::cout << "  (" << run.hits << "/" << run.trials << " hits, "
                  << fmt(run.wall_time_ms) << " ms)\n";
    }

    print_invalid_warning(results);
    print_failures(results);
    if (results.summaries.empty()) {
        std::cerr << "error: every run produced zero hits at d=" << args.dim
                  << "; increase --samples\n";
        return 1;
    }
    const DimensionSummary& summary = results.summaries.front();
    std::cout << "final          = " << fmt(summary.final_value) << "\n";
    std::cout << "relative error = " << fmt(summary.relative_error) << "\n";
    return 0;
}

int run_sweep(const SweepArgs& args, const std::optional<unsigned>& flag_workers,
              const std::optional<unsigned>& env_workers) {
    ExperimentPlan plan;
    if (!args.plan_path.empty()) {
        std::ifstream in(args.plan_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read plan file " << args.plan_path
                      << "\n";
            return 1;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        plan = plan_from_json(buffer.str());
        plan.workers = resolve_workers(flag_workers, env_workers, plan.workers);
    } else {
        plan.dimensions = args.dims;
        if (plan.dimensions.empty()) {
            for (unsigned d = 2; d <= 20; ++d) plan.dimensions.push_back(d);
        }
        plan.workers = resolve_workers(flag_workers, env_workers, std::nullopt);
    }
    if (args.seed) plan.root_seed = *args.seed;

    const std::filesystem::path out_dir(args.out_dir);
    std::filesystem::create_directories(out_dir);

    ProgressFn progress;
    if (isatty(fileno(stderr))) {
        progress = [](std::size_t done, std::size_t total) {
            std::fprintf(stderr, "\rcells %zu/%zu", done, total);
            if (done == total) std::fprintf(stderr, "\n");
            std::fflush(stderr);
        };
    }

    const ResultSet results = run_experiment(plan, progress);

    write_run_csv(results, out_dir / "runs.csv");
    write_summary_json(results, out_dir / "summary.json");
    std::vector<std::string> written = {(out_dir / "runs.csv").string(),
                                        (out_dir / "summary.json").string()};

    if (!results.summaries.empty()) {
        std::vector<std::pair<double, double>> finals;
        for (const DimensionSummary& s : results.summaries) {
            finals.emplace_back(static_cast<double>(s.d.value()),
                                s.final_value);
        }
        std::sort(finals.begin(), finals.end());
        ChartOptions options;
        options.title = "Monte Carlo estimate of pi by dimension";
        options.x_label = "dimension";
        options.y_label = "final estimate";
        options.reference_y = std::numbers::pi;
        options.reference_label = "pi";
        write_line_chart({{"final", std::move(finals)}}, options,
                         out_dir / "finals.svg");
        written.push_back((out_dir / "finals.svg").string());
    } else {
        std::cerr << "warning: no dimension aggregated; finals.svg not "
                     "written\n";
    }

    const TimingCurve curve = timing_curve(results);
    for (const unsigned d : curve.omitted) {
        std::cerr << "warning: timing curve omits dimension " << d
                  << " (fewer than two sample-size rows)\n";
    }
    if (!curve.points.empty()) {
        std::vector<std::pair<double, double>> minutes;
        for (const auto& [d, ms] : curve.points) {
            minutes.emplace_back(static_cast<double>(d), ms / 60000.0);
        }
        ChartOptions options;
        options.title = "Sampling time of the two largest tiers";
        options.x_label = "dimension";
        options.y_label = "mean wall time (min)";
        write_line_chart({{"wall time", std::move(minutes)}}, options,
                         out_dir / "timing.svg");
        written.push_back((out_dir / "timing.svg").string());
    } else {
        std::cerr << "warning: timing curve is empty; timing.svg not "
                     "written\n";
    }

    print_invalid_warning(results);
    print_failures(results);

    std::cout << "dimension  final          rel_error      rows  excluded\n";
    for (const DimensionSummary& s : results.summaries) {
        std::printf("%-9u  %-13.10g  %-+13.6e  %-4zu  %llu\n", s.d.value(),
                    s.final_value, s.relative_error, s.rows.size(),
                    static_cast<unsigned long long>(s.excluded_invalid_runs));
    }
    if (!std::isnan(results.grand_mean)) {
        std::cout << "grand mean = " << fmt(results.grand_mean) << "\n";
    }
    std::cout << "wrote ";
    for (std::size_t i = 0; i < written.size(); ++i) {
        std::cout << (i == 0 ? "" : ", ") << written[i];
    }
    std::cout << "\n";
    return results.summaries.empty() ? 1 : 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{
        "Monte Carlo estimation of pi from the volume ratio of the unit ball "
        "inside [-1,1]^d"};
    app.require_subcommand(1);

    std::optional<unsigned> env_workers;
    if (const char* env = std::getenv("HYPERPI_WORKERS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || parsed == 0 || parsed > 1u << 20) {
            std::cerr << "error: HYPERPI_WORKERS must be a positive integer, "
                         "got \""
                      << env << "\"\n";
            return 2;
        }
        env_workers = static_cast<unsigned>(parsed);
    }

    unsigned analytic_dim = 0;
    CLI::App* analytic =
        app.add_subcommand("analytic", "Print the exact geometry of one d");
    analytic->add_option("--dim", analytic_dim, "dimension d >= 1")
        ->required()
        ->check(CLI::PositiveNumber);

    EstimateArgs est;
    std::optional<unsigned> est_workers;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Estimate pi at one dimension and sample size");
    estimate->add_option("--dim", est.dim, "dimension d >= 1")
        ->required()
        ->check(CLI::PositiveNumber);
    estimate->add_option("--samples", est.samples, "points per run")
        ->required()
        ->check(CLI::PositiveNumber);
    estimate->add_option("--runs", est.runs, "independent runs (default 1)")
        ->check(CLI::PositiveNumber);
    estimate->add_option("--seed", est.seed, "root seed (default 0)");
    estimate->add_option("--workers", est_workers, "worker threads")
        ->check(CLI::PositiveNumber);
    estimate->add_flag("--wilson", est.wilson,
                       "Wilson interval instead of Wald");

    SweepArgs sweep_args;
    std::optional<unsigned> sweep_workers;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run a multi-dimension experiment and write reports");
    CLI::Option* plan_opt =
        sweep->add_option("--plan", sweep_args.plan_path, "plan JSON file");
    CLI::Option* default_opt = sweep->add_flag(
        "--default", sweep_args.use_default, "use the built-in schedule");
    plan_opt->excludes(default_opt);
    sweep
        ->add_option("--dims", sweep_args.dims,
                     "dimensions for --default (comma separated, default "
                     "2..20)")
        ->delimiter(',')
        ->needs(default_opt);
    sweep->add_option("--out", sweep_args.out_dir,
                      "output directory (default .)");
    sweep->add_option("--seed", sweep_args.seed, "override the root seed");
    sweep->add_option("--workers", sweep_workers, "worker threads")
        ->check(CLI::PositiveNumber);

    unsigned size_dim = 0;
    double size_target = 0.0;
    CLI::App* size = app.add_subcommand(
        "size", "Print the sample count needed for a target relative SE");
    size->add_option("--dim", size_dim, "dimension d >= 1")
        ->required()
        ->check(CLI::PositiveNumber);
    size->add_option("--target-rel-se", size_target,
                     "target relative standard error in (0, 1)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analytic)) return run_analytic(analytic_dim);
        if (app.got_subcommand(estimate)) {
            const unsigned workers =
                resolve_workers(est_workers, env_workers, std::nullopt);
            return run_estimate(est, workers);
        }
        if (app.got_subcommand(sweep)) {
            if (sweep_args.plan_path.empty() && !sweep_args.use_default) {
                std::cerr << "error: sweep needs --plan FILE or --default\n";
                return 2;
            }
            return run_sweep(sweep_args, sweep_workers, env_workers);
        }
        if (app.got_subcommand(size)) return run_size(size_dim, size_target);
    } catch (const PlanParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ScheduleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace hyperpi::cli
