#include "linkscan/pipeline.hpp"

#include <exception>
#include <stdexcept>
#include <variant>

#include "linkscan/error.hpp"

namespace linkscan::pipeline {

namespace {

void require_same_dates(const ReturnSeries& a, const ReturnSeries& b) {
    if (a.dates != b.dates || a.values.size() != b.values.size()) {
        throw AlignmentError("series '" + a.name + "' and '" + b.name +
                             "' are not aligned on the same dates");
    }
}

std::vector<double> drop_first(const std::vector<double>& v) {
    return {v.begin() + 1, v.end()};
}

std::vector<double> drop_last(const std::vector<double>& v) {
    return {v.begin(), v.end() - 1};
}

struct LinkageSpec {
    ols::RegressionSpec spec;
    std::vector<CoefficientRole> roles;
};

LinkageSpec build_spec(const ReturnSeries& r, const FilterResult& filter, const ReturnSeries& ropec,
                       bool use_filter, bool with_lag) {
    LinkageSpec out;
    auto& s = out.spec;
    s.response_name = r.name;
    s.include_intercept = true;
    out.roles.push_back(CoefficientRole::intercept);
    const auto take = [&](const std::vector<double>& v) { return with_lag ? drop_first(v) : v; };
    s.response = take(r.values);
    if (use_filter) {
        s.regressors.push_back({filter.vmsci.name, take(filter.vmsci.values)});
        out.roles.push_back(CoefficientRole::filtered_world);
    }
    s.regressors.push_back({ropec.name, take(ropec.values)});
    out.roles.push_back(CoefficientRole::oil);
    if (with_lag) {
        s.regressors.push_back({r.name + "_lag1", drop_last(r.values)});
        out.roles.push_back(CoefficientRole::lagged_return);
    }
    return out;
}

StageError to_stage_error(const std::string& stage, std::exception_ptr ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const NumericalError& e) {
        return {stage, ErrorKind::numerical, e.what()};
    } catch (const DataError& e) {
        return {stage, ErrorKind::data, e.what()};
    } catch (const std::exception& e) {
        return {stage, ErrorKind::numerical, e.what()};
    }
}

void validate(const PipelineConfig& config) {
    if (!(config.policy.threshold > 0.0 && config.policy.threshold < 1.0)) {
        throw std::invalid_argument("diagnostic threshold must lie in (0, 1)");
    }
    if (config.grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
    const double scale = std::visit([](const auto& s) { return s.value; }, config.kernel.scale);
    if (!(scale > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
}

}  // namespace

std::string to_string(CovarianceKind kind) {
    switch (kind) {
        case CovarianceKind::classical: return "classical";
        case CovarianceKind::white_hc0: return "white_hc0";
        case CovarianceKind::white_hc1: return "white_hc1";
    }
    return "unknown";
}

std::string to_string(CoefficientRole role) {
    switch (role) {
        case CoefficientRole::intercept: return "intercept";
        case CoefficientRole::filtered_world: return "filtered_world";
        case CoefficientRole::oil: return "oil";
        case CoefficientRole::lagged_return: return "lagged_return";
    }
    return "unknown";
}

const ols::CoefficientEstimate& CountryResult::coefficient(CoefficientRole role) const {
    for (const auto& c : coefficients) {
        if (c.role == role) return c.estimate;
    }
    throw std::out_of_range("country '" + country + "' has no " + to_string(role) + " coefficient");
}

FilterResult filter_world_returns(const ReturnSeries& rmsci, const ReturnSeries& ropec) {
    require_same_dates(rmsci, ropec);
    if (rmsci.size() < 4) {
        throw InsufficientDataError("world filter needs at least 4 observations, got " +
                                    std::to_string(rmsci.size()));
    }
    ols::RegressionSpec spec;
    spec.response_name = rmsci.name;
    spec.response = rmsci.values;
    spec.regressors.push_back({ropec.name, ropec.values});
    spec.include_intercept = true;

    FilterResult out;
    out.source_fit = ols::fit_ols(spec);
    out.alpha = out.source_fit.coefficients(0);
    out.beta = out.source_fit.coefficients(1);
    out.vmsci.name = rmsci.name + "_filtered";
    out.vmsci.dates = rmsci.dates;
    out.vmsci.mode = rmsci.mode;
    const auto& e = out.source_fit.residuals;
    out.vmsci.values.assign(e.data(), e.data() + e.size());
    return out;
}

CountryResult estimate_linkage(const ReturnSeries& r_country, const FilterResult& filter,
                               const ReturnSeries& ropec, const DiagnosticsPolicy& policy) {
    require_same_dates(r_country, ropec);
    if (policy.use_filter) require_same_dates(r_country, filter.vmsci);
    if (r_country.size() < 6) {
        throw InsufficientDataError("linkage equation for '" + r_country.name +
                                    "' needs at least 6 observations, got " +
                                    std::to_string(r_country.size()));
    }

    CountryResult out;
    out.country = r_country.name;

    auto linkage = build_spec(r_country, filter, ropec, policy.use_filter, false);
    auto fit = ols::fit_ols(linkage.spec);
    out.serial_correlation = ols::serial_correlation_test(fit, 1);

    if (out.serial_correlation.p_value < policy.threshold) {
        linkage = build_spec(r_country, filter, ropec, policy.use_filter, true);
        fit = ols::fit_ols(linkage.spec);
        out.ar1_added = true;
        out.serial_correlation_after_ar1 = ols::serial_correlation_test(fit, 1);
        if (out.serial_correlation_after_ar1->p_value < policy.threshold) {
            out.warnings.push_back("unresolved diagnostics: serial correlation remains after adding the lagged return");
        }
    }

    const auto white = ols::white_test_with_fallback(fit);
    out.white = white.result;
    out.white_cross_terms = white.cross_terms;
    if (!white.cross_terms) {
        out.warnings.push_back("White test used squares only: the cross-product auxiliary design was degenerate");
    }

    Eigen::MatrixXd cov = fit.classical_cov;
    if (out.white.p_value < policy.threshold) {
        cov = ols::white_covariance(fit, policy.hc);
        out.covariance_kind = policy.hc == ols::HcVariant::hc0 ? CovarianceKind::white_hc0
                                                               : CovarianceKind::white_hc1;
    }

    const auto table = ols::coefficient_table(fit, cov);
    for (std::size_t j = 0; j < table.size(); ++j) {
        out.coefficients.push_back({linkage.roles[j], table[j]});
    }
    out.n = fit.n;
    out.metrics = ols::fit_metrics(fit);
    out.durbin_watson = ols::durbin_watson({fit.residuals.data(), static_cast<std::size_t>(fit.residuals.size())});
    return out;
}

LinkageReport run_pipeline(const AlignedBundle& bundle, const PipelineConfig& config,
                           const Stages& stages) {
    validate(config);
    if (bundle.dates.empty()) throw AlignmentError("no aligned observations to analyse");
    const auto check = [&](const ReturnSeries& s) {
        if (s.dates != bundle.dates) {
            throw AlignmentError("series '" + s.name + "' is not aligned to the bundle dates");
        }
    };
    check(bundle.oil);
    check(bundle.world);
    for (const auto& c : bundle.countries) check(c);

    LinkageReport report;
    report.config = config;
    report.provenance.observations = bundle.dates.size();
    report.provenance.first_date = to_iso_string(bundle.dates.front());
    report.provenance.last_date = to_iso_string(bundle.dates.back());

    if (stages.descriptives) {
        std::vector<const ReturnSeries*> all{&bundle.oil, &bundle.world};
        for (const auto& c : bundle.countries) all.push_back(&c);
        for (const auto* s : all) {
            DescriptiveEntry entry;
            entry.series = s->name;
            try {
                entry.stats = stats::describe(*s);
            } catch (const Error&) {
                entry.error = to_stage_error("descriptives", std::current_exception());
            }
            report.descriptives.push_back(std::move(entry));
        }
    }

    FilterResult filter;
    bool filter_ok = false;
    if (stages.linear) {
        try {
            filter = filter_world_returns(bundle.world, bundle.oil);
            filter_ok = true;
            FilterSummary summary;
            summary.world = bundle.world.name;
            summary.oil = bundle.oil.name;
            summary.n = filter.source_fit.n;
            summary.coefficients = ols::coefficient_table(filter.source_fit, filter.source_fit.classical_cov);
            report.filter = std::move(summary);
        } catch (const Error&) {
            report.filter_error = to_stage_error("filter", std::current_exception());
        }
    }

    const auto count = static_cast<std::ptrdiff_t>(bundle.countries.size());
    if (stages.linear) report.countries.resize(bundle.countries.size());
    if (stages.curves) report.curves.resize(bundle.countries.size());

#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const auto& country = bundle.countries[idx];
        if (stages.linear) {
            auto& entry = report.countries[idx];
            entry.country = country.name;
            if (!filter_ok && config.policy.use_filter) {
                entry.error = StageError{"linear", report.filter_error->kind,
                                         "world filter failed: " + report.filter_error->message};
            } else {
                try {
                    entry.result = estimate_linkage(country, filter, bundle.oil, config.policy);
                } catch (const std::exception&) {
                    entry.error = to_stage_error("linear", std::current_exception());
                }
            }
        }
        if (stages.curves) {
            auto& entry = report.curves[idx];
            entry.country = country.name;
            try {
                entry.curve = kernel::fit_curve(bundle.oil.values, country.values, config.kernel,
                                                config.grid_points);
            } catch (const std::exception&) {
                entry.error = to_stage_error("kernel", std::current_exception());
            }
        }
    }
    return report;
}

}  // namespace linkscan::pipeline
