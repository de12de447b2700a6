#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "linkscan/kernel.hpp"
#include "linkscan/ols.hpp"
#include "linkscan/series.hpp"
#include "linkscan/stats.hpp"
#include "linkscan/test_result.hpp"

namespace linkscan::pipeline {

/// Return series sharing one date index. Built by the CLI ingest step.
struct AlignedBundle {
    std::vector<Date> dates;
    ReturnSeries oil;
    ReturnSeries world;
    std::vector<ReturnSeries> countries;
};

struct DiagnosticsPolicy {
    double threshold = 0.05;  // rejection level for both AR(1) augmentation and robust covariance
    ols::HcVariant hc = ols::HcVariant::hc0;
    bool use_filter = true;  // false drops the filtered world factor from the linkage equation

    friend bool operator==(const DiagnosticsPolicy&, const DiagnosticsPolicy&) = default;
};

struct PipelineConfig {
    DiagnosticsPolicy policy;
    kernel::KernelSpec kernel;
    std::size_t grid_points = kernel::kDefaultGridSize;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// World returns with the oil component projected out: rmsci = alpha + beta ropec + v.
struct FilterResult {
    double alpha = 0.0;
    double beta = 0.0;
    ReturnSeries vmsci;
    ols::RegressionFit source_fit;
};

enum class CovarianceKind { classical, white_hc0, white_hc1 };
enum class CoefficientRole { intercept, filtered_world, oil, lagged_return };

[[nodiscard]] std::string to_string(CovarianceKind kind);
[[nodiscard]] std::string to_string(CoefficientRole role);

struct LinkageCoefficient {
    CoefficientRole role = CoefficientRole::intercept;
    ols::CoefficientEstimate estimate;

    friend bool operator==(const LinkageCoefficient&, const LinkageCoefficient&) = default;
};

struct CountryResult {
    std::string country;
    std::size_t n = 0;
    std::vector<LinkageCoefficient> coefficients;
    CovarianceKind covariance_kind = CovarianceKind::classical;
    TestResult serial_correlation;  // order-1 test on the initial specification
    std::optional<TestResult> serial_correlation_after_ar1;
    TestResult white;
    bool white_cross_terms = true;
    double durbin_watson = 0.0;  // informational only
    ols::FitMetrics metrics;
    bool ar1_added = false;
    std::vector<std::string> warnings;

    /// Throws std::out_of_range when the role is absent from this fit.
    [[nodiscard]] const ols::CoefficientEstimate& coefficient(CoefficientRole role) const;

    friend bool operator==(const CountryResult&, const CountryResult&) = default;
};

/// Throws AlignmentError on mismatched dates, InsufficientDataError for n < 4.
[[nodiscard]] FilterResult filter_world_returns(const ReturnSeries& rmsci, const ReturnSeries& ropec);

/// Estimates r = a + b vmsci + d ropec (+ c r(-1)) with the conditional diagnostics sequence.
///
/// The order-1 serial-correlation test runs first; on rejection the one-period
/// lagged country return is added and the first observation dropped. White's
/// test runs on the final specification and selects robust standard errors on
/// rejection. Serial correlation that survives the augmentation is reported as
/// a warning. With `policy.use_filter == false` the vmsci regressor is dropped
/// and `filter` is not consulted.
[[nodiscard]] CountryResult estimate_linkage(const ReturnSeries& r_country, const FilterResult& filter,
                                             const ReturnSeries& ropec, const DiagnosticsPolicy& policy);

enum class ErrorKind { data, numerical };

struct StageError {
    std::string stage;
    ErrorKind kind = ErrorKind::numerical;
    std::string message;

    friend bool operator==(const StageError&, const StageError&) = default;
};

struct DescriptiveEntry {
    std::string series;
    std::optional<stats::DescriptiveStats> stats;
    std::optional<StageError> error;

    friend bool operator==(const DescriptiveEntry&, const DescriptiveEntry&) = default;
};

struct FilterSummary {
    std::string world;
    std::string oil;
    std::size_t n = 0;
    std::vector<ols::CoefficientEstimate> coefficients;  // classical standard errors

    friend bool operator==(const FilterSummary&, const FilterSummary&) = default;
};

struct CountryEntry {
    std::string country;
    std::optional<CountryResult> result;
    std::optional<StageError> error;

    friend bool operator==(const CountryEntry&, const CountryEntry&) = default;
};

struct CurveEntry {
    std::string country;
    std::optional<kernel::KernelCurve> curve;
    std::optional<StageError> error;

    friend bool operator==(const CurveEntry&, const CurveEntry&) = default;
};

/// Input identification and run settings echoed into the report.
struct Provenance {
    std::string input_name;
    std::string input_sha256;
    std::string oil_column;
    std::string world_column;
    std::vector<std::string> country_columns;
    ReturnMode returns_mode = ReturnMode::log;
    std::size_t dropped_rows = 0;
    std::size_t observations = 0;  // aligned return observations
    std::string first_date;
    std::string last_date;
    std::optional<std::string> generated_at;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct LinkageReport {
    PipelineConfig config;
    Provenance provenance;
    std::vector<DescriptiveEntry> descriptives;
    std::optional<FilterSummary> filter;
    std::optional<StageError> filter_error;
    std::vector<CountryEntry> countries;
    std::vector<CurveEntry> curves;

    friend bool operator==(const LinkageReport&, const LinkageReport&) = default;
};

/// Which stages run_pipeline evaluates; the CLI subcommands select subsets.
struct Stages {
    bool descriptives = true;
    bool linear = true;
    bool curves = true;
};

/// Runs the whole procedure. Countries are processed in parallel; the report is
/// identical to a serial run. Throws AlignmentError when the bundle has no
/// observations or its series do not share the bundle's dates.
[[nodiscard]] LinkageReport run_pipeline(const AlignedBundle& bundle, const PipelineConfig& config,
                                         const Stages& stages = {});

}  // namespace linkscan::pipeline
