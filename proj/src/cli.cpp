#include "linkscan/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "linkscan/error.hpp"
#include "linkscan/io.hpp"
#include "linkscan/pipeline.hpp"
#include "linkscan/report_json.hpp"
#include "linkscan/simulate.hpp"

namespace linkscan::cli {

namespace {

struct Options {
    std::string input;
    std::string oil;
    std::string world;
    std::vector<std::string> countries;
    std::string returns = "log";
    double bandwidth_factor = kernel::kDefaultBandwidthFactor;
    std::size_t grid_points = kernel::kDefaultGridSize;
    std::string kernel = "gaussian";
    std::string hc = "hc0";
    double threshold = 0.05;
    bool no_filter = false;
    bool timestamp = false;
    std::string out;
    std::uint64_t seed = 2008;
    std::size_t rows = 177;
};

void add_analysis_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--input", o.input, "Wide CSV: date column then one price column per series")
        ->required();
    cmd.add_option("--oil", o.oil, "Oil price column")->required();
    cmd.add_option("--world", o.world, "World market index column")->required();
    cmd.add_option("--countries", o.countries, "Comma-separated country index columns")
        ->required()
        ->delimiter(',');
    cmd.add_option("--returns", o.returns, "Return definition")
        ->check(CLI::IsMember({"log", "simple"}));
    cmd.add_option("--bandwidth-factor", o.bandwidth_factor, "Bandwidth as a fraction of the oil-return range")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--grid-points", o.grid_points, "Kernel grid size")->check(CLI::Range(2, 1000000));
    cmd.add_option("--kernel", o.kernel, "Kernel function")
        ->check(CLI::IsMember({"gaussian", "epanechnikov", "uniform"}));
    cmd.add_option("--hc", o.hc, "White covariance variant")->check(CLI::IsMember({"hc0", "hc1"}));
    cmd.add_option("--threshold", o.threshold, "Diagnostic rejection level")
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                double v = 0.0;
                if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 1.0)) return "threshold must lie in (0, 1)";
                return {};
            },
            "(0,1)"));
    cmd.add_flag("--no-filter", o.no_filter, "Drop the filtered world factor from the linkage equation");
    cmd.add_flag("--timestamp", o.timestamp, "Record the generation time in the report provenance");
    cmd.add_option("--out", o.out, "Output file (default: stdout)");
}

pipeline::PipelineConfig make_config(const Options& o) {
    pipeline::PipelineConfig c;
    c.kernel.kind = *kernel::parse_kernel_kind(o.kernel);
    c.kernel.scale = kernel::BandwidthFactor{o.bandwidth_factor};
    c.grid_points = o.grid_points;
    c.policy.hc = o.hc == "hc1" ? ols::HcVariant::hc1 : ols::HcVariant::hc0;
    c.policy.threshold = o.threshold;
    c.policy.use_filter = !o.no_filter;
    return c;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw DataError("cannot open output file '" + path + "'");
    file << text;
    if (!file) throw DataError("failed writing output file '" + path + "'");
}

void report_stage_errors(const pipeline::LinkageReport& report, std::ostream& err) {
    const auto show = [&](const std::string& who, const pipeline::StageError& e) {
        err << "linkscan: " << e.stage << " [" << who << "]: " << e.message << '\n';
    };
    for (const auto& d : report.descriptives) {
        if (d.error) show(d.series, *d.error);
    }
    if (report.filter_error) show("filter", *report.filter_error);
    for (const auto& c : report.countries) {
        if (c.error) show(c.country, *c.error);
        if (c.result) {
            for (const auto& w : c.result->warnings) err << "linkscan: warning [" << c.country << "]: " << w << '\n';
        }
    }
    for (const auto& c : report.curves) {
        if (c.error) show(c.country, *c.error);
    }
}

int exit_code_for(const std::vector<pipeline::StageError>& errors) {
    for (const auto& e : errors) {
        if (e.kind == pipeline::ErrorKind::data) return kDataError;
    }
    return errors.empty() ? kSuccess : kNumericalError;
}

int run_analysis(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
    io::DatasetManifest manifest;
    manifest.oil_column = o.oil;
    manifest.world_column = o.world;
    manifest.country_columns = o.countries;
    manifest.returns_mode = *parse_return_mode(o.returns);

    const auto data = io::ingest(std::filesystem::path(o.input), manifest);

    pipeline::Stages stages;
    stages.descriptives = command == "describe" || command == "analyze";
    stages.linear = command == "linear" || command == "analyze";
    stages.curves = command == "kernel" || command == "analyze";

    auto report = pipeline::run_pipeline(data.bundle, make_config(o), stages);
    auto& prov = report.provenance;
    prov.input_name = std::filesystem::path(o.input).filename().string();
    prov.input_sha256 = io::sha256_file(o.input);
    prov.oil_column = manifest.oil_column;
    prov.world_column = manifest.world_column;
    prov.country_columns = manifest.country_columns;
    prov.returns_mode = manifest.returns_mode;
    prov.dropped_rows = manifest.dropped_rows;
    if (o.timestamp) prov.generated_at = utc_now();

    if (command == "kernel") {
        std::ostringstream csv;
        write_plot_csv(csv, report);
        emit(csv.str(), o.out, out);
    } else {
        emit(serialize_report(report), o.out, out);
    }
    report_stage_errors(report, err);

    if (command == "describe") {
        std::vector<pipeline::StageError> errors;
        for (const auto& d : report.descriptives) {
            if (d.error) errors.push_back(*d.error);
        }
        return exit_code_for(errors);
    }

    // Linear/kernel/analyze fail only when no country produced any estimate.
    std::vector<pipeline::StageError> errors;
    bool any_result = false;
    for (const auto& c : report.countries) {
        any_result = any_result || c.result.has_value();
        if (c.error) errors.push_back(*c.error);
    }
    for (const auto& c : report.curves) {
        any_result = any_result || c.curve.has_value();
        if (c.error) errors.push_back(*c.error);
    }
    return any_result ? kSuccess : exit_code_for(errors);
}

int run_simulate(const Options& o, std::ostream& out) {
    auto config = simulate::default_fixture_config(o.seed);
    config.prices = o.rows;
    std::ostringstream csv;
    io::write_prices_csv(csv, simulate::synthetic_prices(config));
    emit(csv.str(), o.out, out);
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Oil-price / stock-market linkage analysis", "linkscan"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"describe", "Descriptive statistics and Jarque-Bera tests (JSON)"},
        {"linear", "Filtered linear linkage regressions with diagnostics (JSON)"},
        {"kernel", "Local quadratic kernel curves as plot data (CSV)"},
        {"analyze", "Full linkage report (JSON)"},
    };
    for (const auto& [name, help] : commands) add_analysis_options(*app.add_subcommand(name, help), o);

    auto* sim = app.add_subcommand("simulate", "Write a seeded synthetic price CSV");
    sim->add_option("--seed", o.seed, "Random seed");
    sim->add_option("--rows", o.rows, "Number of price rows")->check(CLI::Range(11, 10000000));
    sim->add_option("--out", o.out, "Output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }

    const auto& command = app.get_subcommands().front()->get_name();
    try {
        if (command == "simulate") return run_simulate(o, out);
        return run_analysis(command, o, out, err);
    } catch (const DataError& e) {
        err << "linkscan: data error: " << e.what() << '\n';
        return kDataError;
    } catch (const NumericalError& e) {
        err << "linkscan: numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "linkscan: usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "linkscan: error: " << e.what() << '\n';
        return kNumericalError;
    }
}

}  // namespace linkscan::cli
