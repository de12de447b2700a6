#include "linkscan/ols.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "linkscan/detail/least_squares.hpp"
#include "linkscan/error.hpp"

namespace linkscan::ols {

namespace {

using detail::solve_least_squares;

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

std::vector<std::string> names_of(const std::vector<std::string>& all,
                                  const std::vector<Eigen::Index>& idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

struct AuxiliaryFit {
    double r2 = 0.0;
    std::size_t params = 0;
};

// Regress `target` on `design` and return R^2; throws on a degenerate design.
AuxiliaryFit auxiliary_r2(const Eigen::MatrixXd& design, const std::vector<std::string>& names,
                          const Eigen::VectorXd& target, const char* what) {
    const auto n = static_cast<std::size_t>(design.rows());
    const auto p = static_cast<std::size_t>(design.cols());
    if (n <= p) {
        throw InsufficientDataError(std::string(what) + ": auxiliary regression has " +
                                    std::to_string(p) + " parameters but only " +
                                    std::to_string(n) + " observations");
    }
    const auto sol = solve_least_squares(design, target);
    if (!sol.full_rank()) {
        const auto dep = names_of(names, sol.dependent_columns);
        throw SingularDesignError(std::string(what) + ": degenerate auxiliary design, dependent terms: " +
                                      join_names(dep),
                                  dep);
    }
    const Eigen::VectorXd resid = target - design * sol.coefficients;
    return {detail::r_squared(target, resid, detail::has_constant_column(design)), p};
}

}  // namespace

std::string_view to_string(HcVariant v) {
    return v == HcVariant::hc0 ? "hc0" : "hc1";
}

std::size_t RegressionFit::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    throw std::out_of_range("no coefficient named '" + std::string(name) + "'");
}

RegressionFit fit_ols(const RegressionSpec& spec) {
    const std::size_t n = spec.response.size();
    const std::size_t k = spec.regressors.size() + (spec.include_intercept ? 1 : 0);
    if (k == 0) throw std::invalid_argument("regression has no parameters");

    RegressionFit fit;
    fit.n = n;
    fit.k = k;
    fit.has_intercept = spec.include_intercept;
    if (spec.include_intercept) fit.names.emplace_back(kInterceptName);
    for (const auto& r : spec.regressors) {
        if (r.values.size() != n) {
            throw DataError("regressor '" + r.name + "' has " + std::to_string(r.values.size()) +
                            " observations, response '" + spec.response_name + "' has " +
                            std::to_string(n));
        }
        fit.names.push_back(r.name);
    }
    if (n <= k) {
        throw InsufficientDataError("regression of '" + spec.response_name + "' needs more than " +
                                    std::to_string(k) + " observations, got " + std::to_string(n));
    }

    const auto rows = static_cast<Eigen::Index>(n);
    fit.design.resize(rows, static_cast<Eigen::Index>(k));
    Eigen::Index col = 0;
    if (spec.include_intercept) fit.design.col(col++).setOnes();
    for (const auto& r : spec.regressors) {
        fit.design.col(col++) = Eigen::Map<const Eigen::VectorXd>(r.values.data(), rows);
    }
    fit.response = Eigen::Map<const Eigen::VectorXd>(spec.response.data(), rows);
    if (!fit.design.allFinite() || !fit.response.allFinite()) {
        throw DataError("regression of '" + spec.response_name + "' has non-finite input");
    }

    const auto sol = solve_least_squares(fit.design, fit.response);
    if (!sol.full_rank()) {
        const auto dep = names_of(fit.names, sol.dependent_columns);
        throw SingularDesignError("singular design for '" + spec.response_name +
                                      "', linearly dependent columns: " + join_names(dep),
                                  dep);
    }

    fit.coefficients = sol.coefficients;
    fit.xtx_inverse = sol.xtx_inverse;
    fit.fitted = fit.design * fit.coefficients;
    fit.residuals = fit.response - fit.fitted;
    fit.sigma2_ml = fit.ssr() / static_cast<double>(n);
    fit.classical_cov = classical_covariance(fit);
    fit.robust_cov = white_covariance(fit, HcVariant::hc0);
    return fit;
}

Eigen::MatrixXd classical_covariance(const RegressionFit& fit) {
    const double s2 = fit.ssr() / static_cast<double>(fit.n - fit.k);
    return s2 * fit.xtx_inverse;
}

Eigen::MatrixXd white_covariance(const RegressionFit& fit, HcVariant variant) {
    const Eigen::VectorXd e2 = fit.residuals.array().square();
    const Eigen::MatrixXd meat = fit.design.transpose() * e2.asDiagonal() * fit.design;
    Eigen::MatrixXd cov = fit.xtx_inverse * meat * fit.xtx_inverse;
    cov = 0.5 * (cov + cov.transpose()).eval();
    if (variant == HcVariant::hc1) {
        cov *= static_cast<double>(fit.n) / static_cast<double>(fit.n - fit.k);
    }
    return cov;
}

TestResult white_test(const RegressionFit& fit, bool cross_terms) {
    std::vector<Eigen::Index> vars;
    for (Eigen::Index j = 0; j < fit.design.cols(); ++j) {
        const auto c = fit.design.col(j);
        if (!(c.array() == c(0)).all()) vars.push_back(j);
    }
    if (vars.empty()) {
        throw SingularDesignError("White test: no non-constant regressors", {});
    }

    const auto rows = fit.design.rows();
    std::vector<Eigen::VectorXd> cols;
    std::vector<std::string> names;
    cols.emplace_back(Eigen::VectorXd::Ones(rows));
    names.emplace_back(kInterceptName);
    for (auto j : vars) {
        cols.emplace_back(fit.design.col(j));
        names.push_back(fit.names[static_cast<std::size_t>(j)]);
    }
    for (auto j : vars) {
        cols.emplace_back(fit.design.col(j).array().square());
        names.push_back(fit.names[static_cast<std::size_t>(j)] + "^2");
    }
    if (cross_terms) {
        for (std::size_t a = 0; a < vars.size(); ++a) {
            for (std::size_t b = a + 1; b < vars.size(); ++b) {
                cols.emplace_back(fit.design.col(vars[a]).cwiseProduct(fit.design.col(vars[b])));
                names.push_back(fit.names[static_cast<std::size_t>(vars[a])] + "*" +
                                fit.names[static_cast<std::size_t>(vars[b])]);
            }
        }
    }
    Eigen::MatrixXd aux(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) aux.col(static_cast<Eigen::Index>(j)) = cols[j];

    const Eigen::VectorXd e2 = fit.residuals.array().square();
    const auto af = auxiliary_r2(aux, names, e2, "White test");
    const double stat = static_cast<double>(fit.n) * af.r2;
    return chi_square_test(cross_terms ? "white" : "white_no_cross", stat,
                           static_cast<double>(af.params - 1));
}

WhiteTestOutcome white_test_with_fallback(const RegressionFit& fit) {
    try {
        return {white_test(fit, true), true};
    } catch (const SingularDesignError&) {
    } catch (const InsufficientDataError&) {
    }
    return {white_test(fit, false), false};
}

TestResult serial_correlation_test(const RegressionFit& fit, std::size_t order) {
    if (order < 1) throw std::invalid_argument("serial correlation order must be >= 1");
    if (fit.n <= fit.k + order) {
        throw InsufficientDataError("Breusch-Godfrey test of order " + std::to_string(order) +
                                    " needs more than " + std::to_string(fit.k + order) +
                                    " observations, got " + std::to_string(fit.n));
    }
    const std::string name = "breusch_godfrey";
    if (!(fit.residuals.squaredNorm() > 0.0)) {
        return chi_square_test(name, 0.0, static_cast<double>(order));
    }

    const auto rows = fit.design.rows();
    const auto k = fit.design.cols();
    Eigen::MatrixXd aux(rows, k + static_cast<Eigen::Index>(order));
    aux.leftCols(k) = fit.design;
    std::vector<std::string> names = fit.names;
    for (std::size_t lag = 1; lag <= order; ++lag) {
        const auto col = k + static_cast<Eigen::Index>(lag - 1);
        const auto l = static_cast<Eigen::Index>(lag);
        aux.col(col).setZero();
        if (l < rows) aux.col(col).tail(rows - l) = fit.residuals.head(rows - l);
        names.push_back("resid(-" + std::to_string(lag) + ")");
    }
    const auto af = auxiliary_r2(aux, names, fit.residuals, "Breusch-Godfrey test");
    return chi_square_test(name, static_cast<double>(fit.n) * af.r2, static_cast<double>(order));
}

double durbin_watson(std::span<const double> e) {
    if (e.size() < 2) throw InsufficientDataError("Durbin-Watson needs at least 2 residuals");
    double num = 0.0;
    double den = e[0] * e[0];
    for (std::size_t t = 1; t < e.size(); ++t) {
        const double d = e[t] - e[t - 1];
        num += d * d;
        den += e[t] * e[t];
    }
    if (!(den > 0.0)) throw NumericalError("Durbin-Watson undefined for all-zero residuals");
    return num / den;
}

double gaussian_log_likelihood(double ssr, std::size_t n) {
    const double nd = static_cast<double>(n);
    return -0.5 * nd * (1.0 + std::log(2.0 * std::numbers::pi) + std::log(ssr / nd));
}

double akaike_per_observation(double log_likelihood, std::size_t k, std::size_t n) {
    return (-2.0 * log_likelihood + 2.0 * static_cast<double>(k)) / static_cast<double>(n);
}

FitMetrics fit_metrics(const RegressionFit& fit) {
    if (!fit.has_intercept) {
        throw std::invalid_argument("fit metrics require a regression with an intercept");
    }
    if (fit.k < 2) throw std::invalid_argument("fit metrics require at least one slope");

    const double nd = static_cast<double>(fit.n);
    const double kd = static_cast<double>(fit.k);
    const double ssr = fit.ssr();
    const double sst = (fit.response.array() - fit.response.mean()).matrix().squaredNorm();
    if (!(sst > 0.0)) throw DegenerateSeriesError("degenerate response: total sum of squares is zero");

    FitMetrics m;
    const bool perfect = ssr <= 1e-24 * sst;
    m.r2 = perfect ? 1.0 : 1.0 - ssr / sst;
    m.adj_r2 = 1.0 - (1.0 - m.r2) * (nd - 1.0) / (nd - kd);
    m.log_likelihood = gaussian_log_likelihood(ssr, fit.n);
    m.aic = akaike_per_observation(m.log_likelihood, fit.k, fit.n);

    m.f_stat.name = "f";
    m.f_stat.distribution = Distribution::fisher_f;
    m.f_stat.df = kd - 1.0;
    m.f_stat.df2 = nd - kd;
    double f = perfect ? std::numeric_limits<double>::infinity()
                       : (m.r2 / (kd - 1.0)) / ((1.0 - m.r2) / (nd - kd));
    if (!std::isfinite(f)) {
        m.f_stat.overflow = true;
        m.f_stat.stat = std::numeric_limits<double>::max();
        m.f_stat.p_value = 0.0;
    } else {
        m.f_stat.stat = f;
        m.f_stat.p_value = fisher_f_sf(f, m.f_stat.df, m.f_stat.df2);
    }
    m.f_stat.stars = significance_stars(m.f_stat.p_value);
    return m;
}

std::vector<CoefficientEstimate> coefficient_table(const RegressionFit& fit,
                                                   const Eigen::MatrixXd& covariance) {
    const double df = static_cast<double>(fit.n - fit.k);
    std::vector<CoefficientEstimate> out;
    for (std::size_t j = 0; j < fit.k; ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        CoefficientEstimate c;
        c.name = fit.names[j];
        c.estimate = fit.coefficients(i);
        c.std_error = std::sqrt(std::max(0.0, covariance(i, i)));
        if (c.std_error > 0.0) {
            c.t_stat = c.estimate / c.std_error;
        } else {
            c.t_stat = c.estimate == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::max(), c.estimate);
        }
        c.p_value = student_t_two_sided(c.t_stat, df);
        c.stars = significance_stars(c.p_value);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace linkscan::ols
