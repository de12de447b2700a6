#include "linkscan/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace linkscan {

namespace {

// Non-finite values are written as strings so they survive a round trip.
Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double read_number(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return j.get<double>();
}

Distribution parse_distribution(const std::string& s) {
    if (s == "chi_square") return Distribution::chi_square;
    if (s == "f") return Distribution::fisher_f;
    if (s == "t") return Distribution::student_t;
    throw std::invalid_argument("unknown distribution '" + s + "'");
}

pipeline::CovarianceKind parse_covariance(const std::string& s) {
    for (auto k : {pipeline::CovarianceKind::classical, pipeline::CovarianceKind::white_hc0,
                   pipeline::CovarianceKind::white_hc1}) {
        if (pipeline::to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown covariance kind '" + s + "'");
}

pipeline::CoefficientRole parse_role(const std::string& s) {
    for (auto r : {pipeline::CoefficientRole::intercept, pipeline::CoefficientRole::filtered_world,
                   pipeline::CoefficientRole::oil, pipeline::CoefficientRole::lagged_return}) {
        if (pipeline::to_string(r) == s) return r;
    }
    throw std::invalid_argument("unknown coefficient role '" + s + "'");
}

Json encode_error(const pipeline::StageError& e) {
    return Json{{"stage", e.stage},
                {"kind", e.kind == pipeline::ErrorKind::data ? "data" : "numerical"},
                {"message", e.message}};
}

pipeline::StageError decode_error(const Json& j) {
    return {j.at("stage").get<std::string>(),
            j.at("kind").get<std::string>() == "data" ? pipeline::ErrorKind::data
                                                      : pipeline::ErrorKind::numerical,
            j.at("message").get<std::string>()};
}

template <typename T>
Json encode_list(const std::vector<T>& items) {
    Json arr = Json::array();
    for (const auto& item : items) arr.push_back(item);
    return arr;
}

template <typename T>
std::vector<T> decode_list(const Json& j) {
    std::vector<T> out;
    for (const auto& item : j) out.push_back(item.template get<T>());
    return out;
}

Json encode_country(const pipeline::CountryResult& c) {
    Json coefs = Json::array();
    for (const auto& lc : c.coefficients) {
        Json item{{"role", pipeline::to_string(lc.role)}};
        item.update(Json(lc.estimate));
        coefs.push_back(std::move(item));
    }
    Json diag{{"serial_correlation", c.serial_correlation},
              {"serial_correlation_after_ar1",
               c.serial_correlation_after_ar1 ? Json(*c.serial_correlation_after_ar1) : Json(nullptr)},
              {"white", c.white},
              {"white_cross_terms", c.white_cross_terms},
              {"durbin_watson", number(c.durbin_watson)}};
    return Json{{"n", c.n},
                {"ar1_added", c.ar1_added},
                {"covariance", pipeline::to_string(c.covariance_kind)},
                {"coefficients", std::move(coefs)},
                {"diagnostics", std::move(diag)},
                {"metrics", c.metrics},
                {"warnings", c.warnings}};
}

pipeline::CountryResult decode_country(const std::string& name, const Json& j) {
    pipeline::CountryResult c;
    c.country = name;
    c.n = j.at("n").get<std::size_t>();
    c.ar1_added = j.at("ar1_added").get<bool>();
    c.covariance_kind = parse_covariance(j.at("covariance").get<std::string>());
    for (const auto& item : j.at("coefficients")) {
        c.coefficients.push_back({parse_role(item.at("role").get<std::string>()),
                                  item.get<ols::CoefficientEstimate>()});
    }
    const auto& d = j.at("diagnostics");
    c.serial_correlation = d.at("serial_correlation").get<TestResult>();
    if (!d.at("serial_correlation_after_ar1").is_null()) {
        c.serial_correlation_after_ar1 = d.at("serial_correlation_after_ar1").get<TestResult>();
    }
    c.white = d.at("white").get<TestResult>();
    c.white_cross_terms = d.at("white_cross_terms").get<bool>();
    c.durbin_watson = read_number(d.at("durbin_watson"));
    c.metrics = j.at("metrics").get<ols::FitMetrics>();
    c.warnings = j.at("warnings").get<std::vector<std::string>>();
    return c;
}

Json encode_config(const pipeline::PipelineConfig& c) {
    Json j{{"kernel", kernel::to_string(c.kernel.kind)}};
    if (const auto* h = std::get_if<kernel::Bandwidth>(&c.kernel.scale)) {
        j["bandwidth"] = h->value;
    } else {
        j["bandwidth_factor"] = std::get<kernel::BandwidthFactor>(c.kernel.scale).value;
    }
    j["grid_points"] = c.grid_points;
    j["hc"] = ols::to_string(c.policy.hc);
    j["threshold"] = c.policy.threshold;
    j["filtered_factor"] = c.policy.use_filter;
    return j;
}

pipeline::PipelineConfig decode_config(const Json& j) {
    pipeline::PipelineConfig c;
    j.get_to(c.kernel);
    c.grid_points = j.at("grid_points").get<std::size_t>();
    c.policy.hc = j.at("hc").get<std::string>() == "hc1" ? ols::HcVariant::hc1 : ols::HcVariant::hc0;
    c.policy.threshold = j.at("threshold").get<double>();
    c.policy.use_filter = j.at("filtered_factor").get<bool>();
    return c;
}

Json encode_provenance(const pipeline::Provenance& p) {
    return Json{{"input", p.input_name},
                {"sha256", p.input_sha256},
                {"oil", p.oil_column},
                {"world", p.world_column},
                {"countries", p.country_columns},
                {"returns", std::string(to_string(p.returns_mode))},
                {"dropped_rows", p.dropped_rows},
                {"observations", p.observations},
                {"first_date", p.first_date},
                {"last_date", p.last_date},
                {"generated_at", p.generated_at ? Json(*p.generated_at) : Json(nullptr)}};
}

pipeline::Provenance decode_provenance(const Json& j) {
    pipeline::Provenance p;
    p.input_name = j.at("input").get<std::string>();
    p.input_sha256 = j.at("sha256").get<std::string>();
    p.oil_column = j.at("oil").get<std::string>();
    p.world_column = j.at("world").get<std::string>();
    p.country_columns = j.at("countries").get<std::vector<std::string>>();
    p.returns_mode = parse_return_mode(j.at("returns").get<std::string>()).value_or(ReturnMode::log);
    p.dropped_rows = j.at("dropped_rows").get<std::size_t>();
    p.observations = j.at("observations").get<std::size_t>();
    p.first_date = j.at("first_date").get<std::string>();
    p.last_date = j.at("last_date").get<std::string>();
    if (!j.at("generated_at").is_null()) p.generated_at = j.at("generated_at").get<std::string>();
    return p;
}

}  // namespace

void to_json(Json& j, const TestResult& v) {
    j = Json{{"name", v.name},
             {"stat", number(v.stat)},
             {"distribution", to_string(v.distribution)},
             {"df", v.df},
             {"df2", v.df2},
             {"p_value", number(v.p_value)},
             {"stars", v.stars},
             {"stars_label", stars_string(v.stars)},
             {"overflow", v.overflow}};
}

void from_json(const Json& j, TestResult& v) {
    v.name = j.at("name").get<std::string>();
    v.stat = read_number(j.at("stat"));
    v.distribution = parse_distribution(j.at("distribution").get<std::string>());
    v.df = j.at("df").get<double>();
    v.df2 = j.at("df2").get<double>();
    v.p_value = read_number(j.at("p_value"));
    v.stars = j.at("stars").get<int>();
    v.overflow = j.at("overflow").get<bool>();
}

namespace stats {

void to_json(Json& j, const DescriptiveStats& v) {
    j = Json{{"n", v.n},
             {"mean", number(v.mean)},
             {"std_dev", number(v.std_dev)},
             {"skewness", number(v.skewness)},
             {"kurtosis", number(v.kurtosis)},
             {"jarque_bera", v.jarque_bera}};
}

void from_json(const Json& j, DescriptiveStats& v) {
    v.n = j.at("n").get<std::size_t>();
    v.mean = read_number(j.at("mean"));
    v.std_dev = read_number(j.at("std_dev"));
    v.skewness = read_number(j.at("skewness"));
    v.kurtosis = read_number(j.at("kurtosis"));
    v.jarque_bera = j.at("jarque_bera").get<TestResult>();
}

}  // namespace stats

namespace ols {

void to_json(Json& j, const CoefficientEstimate& v) {
    j = Json{{"name", v.name},
             {"estimate", number(v.estimate)},
             {"std_error", number(v.std_error)},
             {"t_stat", number(v.t_stat)},
             {"p_value", number(v.p_value)},
             {"stars", v.stars},
             {"stars_label", stars_string(v.stars)}};
}

void from_json(const Json& j, CoefficientEstimate& v) {
    v.name = j.at("name").get<std::string>();
    v.estimate = read_number(j.at("estimate"));
    v.std_error = read_number(j.at("std_error"));
    v.t_stat = read_number(j.at("t_stat"));
    v.p_value = read_number(j.at("p_value"));
    v.stars = j.at("stars").get<int>();
}

void to_json(Json& j, const FitMetrics& v) {
    j = Json{{"r2", number(v.r2)},
             {"adj_r2", number(v.adj_r2)},
             {"log_likelihood", number(v.log_likelihood)},
             {"f_stat", v.f_stat},
             {"aic", number(v.aic)}};
}

void from_json(const Json& j, FitMetrics& v) {
    v.r2 = read_number(j.at("r2"));
    v.adj_r2 = read_number(j.at("adj_r2"));
    v.log_likelihood = read_number(j.at("log_likelihood"));
    v.f_stat = j.at("f_stat").get<TestResult>();
    v.aic = read_number(j.at("aic"));
}

}  // namespace ols

namespace kernel {

void to_json(Json& j, const KernelSpec& v) {
    j = Json{{"kernel", to_string(v.kind)}};
    if (const auto* h = std::get_if<Bandwidth>(&v.scale)) {
        j["bandwidth"] = h->value;
    } else {
        j["bandwidth_factor"] = std::get<BandwidthFactor>(v.scale).value;
    }
}

void from_json(const Json& j, KernelSpec& v) {
    const auto kind = parse_kernel_kind(j.at("kernel").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown kernel kind");
    v.kind = *kind;
    if (j.contains("bandwidth")) {
        v.scale = Bandwidth{j.at("bandwidth").get<double>()};
    } else {
        v.scale = BandwidthFactor{j.at("bandwidth_factor").get<double>()};
    }
}

void to_json(Json& j, const LocalFitPoint& v) {
    j = Json{{"x", number(v.x)},
             {"beta0", number(v.beta0)},
             {"beta1", number(v.beta1)},
             {"beta2", number(v.beta2)},
             {"weight_mass", number(v.weight_mass)}};
}

void from_json(const Json& j, LocalFitPoint& v) {
    v.x = read_number(j.at("x"));
    v.beta0 = read_number(j.at("beta0"));
    v.beta1 = read_number(j.at("beta1"));
    v.beta2 = read_number(j.at("beta2"));
    v.weight_mass = read_number(j.at("weight_mass"));
}

void to_json(Json& j, const KernelCurve& v) {
    Json points = Json::array();
    for (std::size_t i = 0; i < v.points.size(); ++i) {
        Json p(v.points[i]);
        p["edge_flag"] = static_cast<bool>(v.edge_flags[i]);
        points.push_back(std::move(p));
    }
    Json skipped = Json::array();
    for (const auto& s : v.skipped) skipped.push_back(Json{{"x", number(s.x)}, {"reason", s.reason}});
    j = Json(v.spec);
    j["bandwidth_value"] = v.bandwidth;
    j["grid_size"] = v.grid_size;
    j["linear_overlay"] = Json{{"intercept", number(v.linear_overlay.intercept)},
                               {"slope", number(v.linear_overlay.slope)}};
    j["points"] = std::move(points);
    j["skipped"] = std::move(skipped);
}

void from_json(const Json& j, KernelCurve& v) {
    j.get_to(v.spec);
    v.bandwidth = j.at("bandwidth_value").get<double>();
    v.grid_size = j.at("grid_size").get<std::size_t>();
    v.linear_overlay.intercept = read_number(j.at("linear_overlay").at("intercept"));
    v.linear_overlay.slope = read_number(j.at("linear_overlay").at("slope"));
    v.points.clear();
    v.edge_flags.clear();
    for (const auto& p : j.at("points")) {
        v.points.push_back(p.get<LocalFitPoint>());
        v.edge_flags.push_back(p.at("edge_flag").get<bool>());
    }
    v.skipped.clear();
    for (const auto& s : j.at("skipped")) {
        v.skipped.push_back({read_number(s.at("x")), s.at("reason").get<std::string>()});
    }
}

}  // namespace kernel

namespace pipeline {

void to_json(Json& j, const LinkageReport& v) {
    Json descriptives = Json::array();
    for (const auto& d : v.descriptives) {
        Json item{{"series", d.series}};
        if (d.stats) {
            item["status"] = "ok";
            item.update(Json(*d.stats));
        } else {
            item["status"] = "error";
            item["error"] = encode_error(*d.error);
        }
        descriptives.push_back(std::move(item));
    }

    Json filter = nullptr;
    if (v.filter) {
        filter = Json{{"world", v.filter->world},
                      {"oil", v.filter->oil},
                      {"n", v.filter->n},
                      {"coefficients", encode_list(v.filter->coefficients)}};
    } else if (v.filter_error) {
        filter = Json{{"error", encode_error(*v.filter_error)}};
    }

    Json countries = Json::array();
    for (const auto& c : v.countries) {
        Json item{{"country", c.country}};
        if (c.result) {
            item["status"] = "estimated";
            item.update(encode_country(*c.result));
        } else {
            item["status"] = "skipped";
            item["error"] = encode_error(*c.error);
        }
        countries.push_back(std::move(item));
    }

    Json curves = Json::array();
    for (const auto& c : v.curves) {
        Json item{{"country", c.country}};
        if (c.curve) {
            item["status"] = "ok";
            item.update(Json(*c.curve));
        } else {
            item["status"] = "skipped";
            item["error"] = encode_error(*c.error);
        }
        curves.push_back(std::move(item));
    }

    j = Json{{"version", kReportSchemaVersion},
             {"config", encode_config(v.config)},
             {"provenance", encode_provenance(v.provenance)},
             {"descriptives", std::move(descriptives)},
             {"filter", std::move(filter)},
             {"countries", std::move(countries)},
             {"curves", std::move(curves)}};
}

void from_json(const Json& j, LinkageReport& v) {
    if (j.at("version").get<int>() != kReportSchemaVersion) {
        throw std::invalid_argument("unsupported report schema version");
    }
    v = LinkageReport{};
    v.config = decode_config(j.at("config"));
    v.provenance = decode_provenance(j.at("provenance"));
    for (const auto& item : j.at("descriptives")) {
        DescriptiveEntry d;
        d.series = item.at("series").get<std::string>();
        if (item.at("status").get<std::string>() == "ok") {
            d.stats = item.get<stats::DescriptiveStats>();
            d.stats->name = d.series;
        } else {
            d.error = decode_error(item.at("error"));
        }
        v.descriptives.push_back(std::move(d));
    }
    const auto& f = j.at("filter");
    if (!f.is_null()) {
        if (f.contains("error")) {
            v.filter_error = decode_error(f.at("error"));
        } else {
            v.filter = FilterSummary{f.at("world").get<std::string>(), f.at("oil").get<std::string>(),
                                     f.at("n").get<std::size_t>(),
                                     decode_list<ols::CoefficientEstimate>(f.at("coefficients"))};
        }
    }
    for (const auto& item : j.at("countries")) {
        CountryEntry c;
        c.country = item.at("country").get<std::string>();
        if (item.at("status").get<std::string>() == "estimated") {
            c.result = decode_country(c.country, item);
        } else {
            c.error = decode_error(item.at("error"));
        }
        v.countries.push_back(std::move(c));
    }
    for (const auto& item : j.at("curves")) {
        CurveEntry c;
        c.country = item.at("country").get<std::string>();
        if (item.at("status").get<std::string>() == "ok") {
            c.curve = item.get<kernel::KernelCurve>();
        } else {
            c.error = decode_error(item.at("error"));
        }
        v.curves.push_back(std::move(c));
    }
}

}  // namespace pipeline

std::string serialize_report(const pipeline::LinkageReport& report) {
    return Json(report).dump(2) + "\n";
}

pipeline::LinkageReport parse_report(const std::string& text) {
    return Json::parse(text).get<pipeline::LinkageReport>();
}

void write_plot_csv(std::ostream& out, const pipeline::LinkageReport& report) {
    out << kPlotCsvHeader << '\n';
    char buf[256];
    for (const auto& entry : report.curves) {
        if (!entry.curve) continue;
        const auto& c = *entry.curve;
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            const auto& p = c.points[i];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g", p.x, p.beta0,
                          p.slope(), p.beta2, p.weight_mass, c.edge_flags[i] ? 1 : 0,
                          c.linear_overlay.at(p.x));
            out << entry.country << ',' << buf << '\n';
        }
    }
}

}  // namespace linkscan
