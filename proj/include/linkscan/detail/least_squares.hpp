#pragma once

#include <vector>

#include <Eigen/Dense>

namespace linkscan::detail {

/// Column-equilibrated, column-pivoted Householder QR least squares.
///
/// Columns are scaled to unit norm before factorisation so that the rank
/// threshold is relative to the shape of the design and not to the units of
/// each regressor.
struct LeastSquaresSolution {
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd xtx_inverse;  // (X'X)^{-1}, only valid when full_rank
    Eigen::Index rank = 0;
    std::vector<Eigen::Index> dependent_columns;
    double condition_estimate = 0.0;  // |R_00| / |R_kk| of the equilibrated factor

    [[nodiscard]] bool full_rank() const { return dependent_columns.empty(); }
};

inline constexpr double kRankThreshold = 1e-10;

[[nodiscard]] LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& design,
                                                       const Eigen::VectorXd& response,
                                                       double rank_threshold = kRankThreshold);

/// Centered R^2 when the design has a constant column, uncentered otherwise.
/// Returns 0 when the response has no variation to explain.
[[nodiscard]] double r_squared(const Eigen::VectorXd& response, const Eigen::VectorXd& residuals,
                               bool centered);

[[nodiscard]] bool has_constant_column(const Eigen::MatrixXd& design);

}  // namespace linkscan::detail
