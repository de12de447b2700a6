#include "linkscan/detail/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace linkscan::detail {

LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& design,
                                         const Eigen::VectorXd& response,
                                         double rank_threshold) {
    const Eigen::Index k = design.cols();
    Eigen::VectorXd scale = design.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (!(scale(j) > 0.0)) scale(j) = 1.0;
    }
    const Eigen::MatrixXd equilibrated = design * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(equilibrated);
    qr.setThreshold(rank_threshold);

    LeastSquaresSolution out;
    out.rank = qr.rank();
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = out.rank; j < k; ++j) out.dependent_columns.push_back(perm(j));
    std::sort(out.dependent_columns.begin(), out.dependent_columns.end());

    const auto r_diag = qr.matrixQR().diagonal().cwiseAbs();
    if (k > 0 && design.rows() >= k) {
        const double last = r_diag(k - 1);
        out.condition_estimate = last > 0.0 ? r_diag(0) / last : std::numeric_limits<double>::infinity();
    }
    if (!out.full_rank()) return out;

    out.coefficients = scale.cwiseInverse().asDiagonal() * qr.solve(response);

    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd pivoted = qr.colsPermutation() * (r_inv * r_inv.transpose()) *
                                    qr.colsPermutation().transpose();
    out.xtx_inverse = scale.cwiseInverse().asDiagonal() * pivoted * scale.cwiseInverse().asDiagonal();
    // Symmetrise away rounding asymmetry.
    out.xtx_inverse = 0.5 * (out.xtx_inverse + out.xtx_inverse.transpose()).eval();
    return out;
}

double r_squared(const Eigen::VectorXd& response, const Eigen::VectorXd& residuals, bool centered) {
    const double ssr = residuals.squaredNorm();
    const double sst = centered ? (response.array() - response.mean()).matrix().squaredNorm()
                                : response.squaredNorm();
    if (!(sst > 0.0)) return 0.0;
    return std::clamp(1.0 - ssr / sst, 0.0, 1.0);
}

bool has_constant_column(const Eigen::MatrixXd& design) {
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
        const auto col = design.col(j);
        if (col.size() > 0 && col(0) != 0.0 && (col.array() == col(0)).all()) return true;
    }
    return false;
}

}  // namespace linkscan::detail
