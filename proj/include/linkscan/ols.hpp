#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "linkscan/test_result.hpp"

namespace linkscan::ols {

inline constexpr std::string_view kInterceptName = "intercept";

struct Regressor {
    std::string name;
    std::vector<double> values;
};

struct RegressionSpec {
    std::string response_name;
    std::vector<double> response;
    std::vector<Regressor> regressors;
    bool include_intercept = true;
};

enum class HcVariant { hc0, hc1 };

[[nodiscard]] std::string_view to_string(HcVariant v);

/// One OLS estimation. Column 0 of `design` is the intercept when `has_intercept`.
struct RegressionFit {
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd response;
    Eigen::VectorXd fitted;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd design;
    Eigen::MatrixXd xtx_inverse;
    Eigen::MatrixXd classical_cov;  // s^2 (X'X)^{-1}, s^2 = SSR/(n-k)
    Eigen::MatrixXd robust_cov;     // White HC0
    double sigma2_ml = 0.0;         // SSR/n
    std::size_t n = 0;
    std::size_t k = 0;
    bool has_intercept = false;

    [[nodiscard]] double ssr() const { return residuals.squaredNorm(); }
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
    [[nodiscard]] double coefficient(std::string_view name) const {
        return coefficients(static_cast<Eigen::Index>(index_of(name)));
    }
};

/// Least squares via column-pivoted QR.
///
/// Throws InsufficientDataError when n <= k, DataError on length mismatch or
/// non-finite input, and SingularDesignError naming the dependent columns when
/// the design is rank deficient.
[[nodiscard]] RegressionFit fit_ols(const RegressionSpec& spec);

[[nodiscard]] Eigen::MatrixXd classical_covariance(const RegressionFit& fit);

/// Sandwich (X'X)^{-1} X' diag(e^2) X (X'X)^{-1}; hc1 rescales by n/(n-k).
[[nodiscard]] Eigen::MatrixXd white_covariance(const RegressionFit& fit, HcVariant variant);

/// White's n R^2 test: e^2 on intercept, regressors, their squares and
/// (optionally) pairwise cross-products. Throws SingularDesignError when the
/// auxiliary design is rank deficient and InsufficientDataError when it has
/// as many parameters as observations.
[[nodiscard]] TestResult white_test(const RegressionFit& fit, bool cross_terms);

struct WhiteTestOutcome {
    TestResult result;
    bool cross_terms = true;  // false when the squares-only fallback was used
};

/// Full White test, falling back to squares only if the full auxiliary design is degenerate.
[[nodiscard]] WhiteTestOutcome white_test_with_fallback(const RegressionFit& fit);

/// Breusch-Godfrey LM test of serial correlation up to `order`.
/// Lagged residuals before the sample start are zero-filled, so n is preserved.
[[nodiscard]] TestResult serial_correlation_test(const RegressionFit& fit, std::size_t order);

[[nodiscard]] double durbin_watson(std::span<const double> residuals);

struct FitMetrics {
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double log_likelihood = 0.0;
    TestResult f_stat;
    double aic = 0.0;  // per observation: (-2 LL + 2k) / n

    friend bool operator==(const FitMetrics&, const FitMetrics&) = default;
};

/// Requires an intercept. Throws DegenerateSeriesError when the response is constant.
[[nodiscard]] FitMetrics fit_metrics(const RegressionFit& fit);

/// Gaussian log-likelihood at the ML variance: -(n/2)(1 + ln 2pi + ln(SSR/n)).
[[nodiscard]] double gaussian_log_likelihood(double ssr, std::size_t n);

/// Per-observation Akaike criterion (-2 LL + 2k) / n.
[[nodiscard]] double akaike_per_observation(double log_likelihood, std::size_t k, std::size_t n);

struct CoefficientEstimate {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    int stars = 0;

    friend bool operator==(const CoefficientEstimate&, const CoefficientEstimate&) = default;
};

/// t tests with n-k degrees of freedom using the standard errors of `covariance`.
[[nodiscard]] std::vector<CoefficientEstimate> coefficient_table(const RegressionFit& fit,
                                                                 const Eigen::MatrixXd& covariance);

}  // namespace linkscan::ols
