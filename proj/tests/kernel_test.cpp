#include "linkscan/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "linkscan/error.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace linkscan;
using namespace linkscan::kernel;

namespace {

struct Sample {
    std::vector<double> x;
    std::vector<double> y;
};

Sample quadratic_sample(std::size_t n, double a, double b, double c, std::uint64_t seed) {
    Sample s;
    s.x = test_support::normals(seed, n, 0.04);
    for (double v : s.x) s.y.push_back(a + b * v + c * v * v);
    return s;
}

double range_of(const std::vector<double>& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

}  // namespace

TEST(DefaultBandwidth, FactorTimesRange) {
    EXPECT_NEAR(default_bandwidth(std::vector<double>{-0.5, 0.1, 0.5}), 0.15, 1e-15);
    EXPECT_NEAR(default_bandwidth(std::vector<double>{0.0, 2.0, 1.0}), 0.30, 1e-15);
    EXPECT_NEAR(default_bandwidth(std::vector<double>{-0.5, 0.5}, 0.25), 0.25, 1e-15);
    EXPECT_THROW((void)default_bandwidth(std::vector<double>{0.2, 0.2, 0.2}), DegenerateSeriesError);
    EXPECT_THROW((void)default_bandwidth(std::vector<double>{0.0, 1.0}, 0.0), std::invalid_argument);
}

TEST(KernelWeight, Values) {
    EXPECT_NEAR(kernel_weight(0.0, KernelKind::gaussian), 0.398942, 1e-6);
    EXPECT_NEAR(kernel_weight(1.0, KernelKind::gaussian), std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-16);
    EXPECT_EQ(kernel_weight(1.5, KernelKind::epanechnikov), 0.0);
    EXPECT_EQ(kernel_weight(0.0, KernelKind::epanechnikov), 0.75);
    EXPECT_EQ(kernel_weight(1.0, KernelKind::uniform), 0.5);
    EXPECT_EQ(kernel_weight(1.0001, KernelKind::uniform), 0.0);
}

TEST(KernelWeight, SymmetricNonNegativeAndIntegratesToOne) {
    for (auto kind : {KernelKind::gaussian, KernelKind::epanechnikov, KernelKind::uniform}) {
        double integral = 0.0;
        const double step = 1e-4;
        for (double w = -10.0; w <= 10.0; w += step) {
            const double k = kernel_weight(w, kind);
            EXPECT_GE(k, 0.0);
            EXPECT_EQ(k, kernel_weight(-w, kind));
            integral += k * step;
        }
        EXPECT_NEAR(integral, 1.0, 1e-3) << to_string(kind);
    }
    EXPECT_GT(kernel_weight(30.0, KernelKind::gaussian), 0.0);
}

TEST(LocalPolyFit, ReproducesQuadraticExactly) {
    const auto s = quadratic_sample(150, 0.01, 0.4, -3.0, 7);
    for (auto kind : {KernelKind::gaussian, KernelKind::epanechnikov, KernelKind::uniform}) {
        for (double h : {0.01, 0.05, 1.0}) {
            for (double x : {-0.03, 0.0, 0.02}) {
                const auto p = local_poly_fit(x, s.x, s.y, kind, h);
                EXPECT_NEAR(p.beta0, 0.01 + 0.4 * x - 3.0 * x * x, 1e-8);
                EXPECT_NEAR(p.slope(), 0.4 - 6.0 * x, 1e-6);
                EXPECT_NEAR(p.beta2, -3.0, 1e-4);
            }
        }
    }
}

TEST(LocalPolyFit, ConstantResponse) {
    const auto x = test_support::normals(3, 60);
    const std::vector<double> y(60, 0.37);
    const auto p = local_poly_fit(0.1, x, y, KernelKind::gaussian, 0.3);
    EXPECT_NEAR(p.beta0, 0.37, 1e-13);
    EXPECT_NEAR(p.beta1, 0.0, 1e-12);
    EXPECT_NEAR(p.beta2, 0.0, 1e-11);
    EXPECT_GT(p.weight_mass, 0.0);
}

TEST(LocalPolyFit, MatchesWeightedNormalEquations) {
    const auto x = test_support::normals(21, 80, 0.04);
    auto y = test_support::normals(22, 80, 0.03);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.3 * x[i];
    const double h = 0.15 * range_of(x);
    for (double at : {-0.05, 0.0, 0.04}) {
        std::vector<oracle::Row> rows;
        std::vector<double> w;
        double mass = 0.0;
        for (double xi : x) {
            const double d = at - xi;
            rows.push_back({1.0, d, d * d});
            const double k = std::exp(-0.5 * (d / h) * (d / h)) / std::sqrt(2.0 * std::numbers::pi);
            w.push_back(k);
            mass += k;
        }
        const auto expected = oracle::weighted_normal_equations(rows, y, w);
        const auto p = local_poly_fit(at, x, y, KernelKind::gaussian, h);
        EXPECT_NEAR(p.beta0, expected[0], 1e-10);
        EXPECT_NEAR(p.beta1, expected[1], 1e-8);
        EXPECT_NEAR(p.beta2, expected[2], 1e-5 * std::max(1.0, std::abs(expected[2])));
        EXPECT_NEAR(p.weight_mass, mass, 1e-12 * mass);
    }
}

TEST(LocalPolyFit, InfiniteBandwidthIsGlobalQuadratic) {
    const auto x = test_support::normals(31, 120, 0.04);
    auto y = test_support::normals(32, 120, 0.03);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.2 * x[i] + 2.0 * x[i] * x[i];
    const auto c = oracle::global_quadratic(x, y);
    const double h = 1e6 * range_of(x);
    for (double at : {-0.08, 0.0, 0.05}) {
        const auto p = local_poly_fit(at, x, y, KernelKind::gaussian, h);
        EXPECT_NEAR(p.beta0, c[0] + c[1] * at + c[2] * at * at, 1e-6);
        EXPECT_NEAR(p.beta1, -(c[1] + 2.0 * c[2] * at), 1e-6);
        EXPECT_NEAR(p.beta2, c[2], 1e-6);
    }
}

TEST(LocalPolyFit, TooFewSupportPoints) {
    const std::vector<double> x{0.0, 0.0, 0.1, 0.5, 0.9, 1.0};
    const std::vector<double> y{1, 2, 3, 4, 5, 6};
    try {
        (void)local_poly_fit(0.02, x, y, KernelKind::epanechnikov, 0.15);
        FAIL() << "expected LocalFitError";
    } catch (const LocalFitError& e) {
        EXPECT_DOUBLE_EQ(e.x, 0.02);
    }
    // Duplicate abscissas count once: three rows but only two distinct values.
    EXPECT_THROW((void)local_poly_fit(0.0, std::vector<double>{0, 0, 1}, std::vector<double>{1, 2, 3},
                                      KernelKind::gaussian, 1.0),
                 LocalFitError);
    EXPECT_NO_THROW((void)local_poly_fit(0.5, x, y, KernelKind::gaussian, 0.15));
}

TEST(FitCurve, GridSpansRangeAndOverlayIsOls) {
    const auto x = test_support::normals(41, 100, 0.04);
    auto y = test_support::normals(42, 100, 0.02);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.001 + 0.3 * x[i];
    const auto curve = fit_curve(x, y, KernelSpec{}, 7);
    ASSERT_EQ(curve.points.size(), 7u);
    ASSERT_EQ(curve.edge_flags.size(), 7u);
    EXPECT_EQ(curve.grid_size, 7u);
    EXPECT_EQ(curve.points.front().x, *std::min_element(x.begin(), x.end()));
    EXPECT_EQ(curve.points.back().x, *std::max_element(x.begin(), x.end()));
    for (std::size_t i = 1; i < curve.points.size(); ++i) EXPECT_GT(curve.points[i].x, curve.points[i - 1].x);
    EXPECT_NEAR(curve.bandwidth, 0.15 * range_of(x), 1e-15);

    std::vector<oracle::Row> rows;
    for (double v : x) rows.push_back({1.0, v});
    const auto line = oracle::normal_equations(rows, y);
    EXPECT_NEAR(curve.linear_overlay.intercept, line[0], 1e-12);
    EXPECT_NEAR(curve.linear_overlay.slope, line[1], 1e-10);
}

TEST(FitCurve, PermutationInvariantBitwise) {
    auto x = test_support::normals(51, 90, 0.04);
    auto y = test_support::normals(52, 90, 0.03);
    const auto base = fit_curve(x, y, KernelSpec{}, 25);
    std::reverse(x.begin(), x.end());
    std::reverse(y.begin(), y.end());
    std::rotate(x.begin(), x.begin() + 13, x.end());
    std::rotate(y.begin(), y.begin() + 13, y.end());
    EXPECT_EQ(fit_curve(x, y, KernelSpec{}, 25), base);
}

TEST(FitCurve, AffineEquivarianceInY) {
    const auto x = test_support::normals(61, 70, 0.04);
    const auto y = test_support::normals(62, 70, 0.03);
    const auto base = fit_curve(x, y, KernelSpec{}, 15);
    for (double c : {-2.0, 0.5, 10.0}) {
        std::vector<double> scaled(y);
        std::vector<double> shifted(y);
        for (auto& v : scaled) v *= c;
        for (auto& v : shifted) v += c;
        const auto cs = fit_curve(x, scaled, KernelSpec{}, 15);
        const auto ct = fit_curve(x, shifted, KernelSpec{}, 15);
        for (std::size_t i = 0; i < base.points.size(); ++i) {
            EXPECT_NEAR(cs.points[i].beta0, c * base.points[i].beta0, 1e-10);
            EXPECT_NEAR(ct.points[i].beta0, base.points[i].beta0 + c, 1e-10);
        }
    }
}

TEST(FitCurve, RecoversLinearSignalInInterior) {
    const auto x = test_support::normals(2008, 400, 0.036);
    auto y = test_support::normals(2009, 400, 0.02);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.3 * x[i];
    const auto curve = fit_curve(x, y, KernelSpec{}, kDefaultGridSize);
    // Local quadratic fits carry no bias for a linear truth; within two sd of the
    // centre the remaining error is noise of roughly 0.02 / sqrt(100).
    double worst = 0.0;
    std::size_t interior = 0;
    for (const auto& p : curve.points) {
        if (std::abs(p.x) > 2.0 * 0.036) continue;
        ++interior;
        worst = std::max(worst, std::abs(p.beta0 - 0.3 * p.x));
    }
    EXPECT_GT(interior, 30u);
    EXPECT_LT(worst, 0.01);
    EXPECT_EQ(std::count(curve.edge_flags.begin(), curve.edge_flags.end(), true), 0);
}

TEST(FitCurve, EdgeFlagsFollowMidRangeMass) {
    const auto x = test_support::normals(71, 200, 0.04);
    const auto y = test_support::normals(72, 200, 0.03);
    const auto curve = fit_curve(x, y, KernelSpec{}, 40);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double mid = 0.5 * (*lo + *hi);
    double mid_mass = 0.0;
    for (double v : x) mid_mass += kernel_weight((mid - v) / curve.bandwidth, KernelKind::gaussian);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        EXPECT_EQ(curve.edge_flags[i], curve.points[i].weight_mass < kEdgeMassFraction * mid_mass);
    }
}

TEST(FitCurve, SkipAndFlagPolicy) {
    // Two clusters far apart: compact kernels leave a gap with no support.
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.001 * i);
        x.push_back(1.0 + 0.001 * i);
    }
    for (double v : x) y.push_back(v * v);
    const KernelSpec spec{KernelKind::epanechnikov, BandwidthFactor{0.05}};
    const auto curve = fit_curve(x, y, spec, 11);
    EXPECT_FALSE(curve.skipped.empty());
    EXPECT_EQ(curve.points.size() + curve.skipped.size(), 11u);
    EXPECT_EQ(curve.points.size(), curve.edge_flags.size());
    for (const auto& p : curve.points) EXPECT_TRUE(std::isfinite(p.beta0));
    EXPECT_THROW((void)fit_curve(x, y, spec, 11, LocalErrorPolicy::fail), LocalFitError);
}

TEST(FitCurve, InputErrors) {
    const std::vector<double> empty;
    EXPECT_THROW((void)fit_curve(empty, empty, KernelSpec{}), InsufficientDataError);
    EXPECT_THROW((void)fit_curve(std::vector<double>{1, 2}, std::vector<double>{1}, KernelSpec{}), DataError);
    EXPECT_THROW((void)fit_curve(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}, KernelSpec{}),
                 DegenerateSeriesError);
    EXPECT_THROW((void)fit_curve(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, KernelSpec{}, 1),
                 std::invalid_argument);
}

TEST(FitCurve, ParallelMatchesSerialReference) {
    const auto x = test_support::normals(81, 500, 0.04);
    auto y = test_support::normals(82, 500, 0.03);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += std::sin(20.0 * x[i]) * 0.02;
    for (auto kind : {KernelKind::gaussian, KernelKind::epanechnikov, KernelKind::uniform}) {
        const KernelSpec spec{kind, BandwidthFactor{0.1}};
        EXPECT_EQ(fit_curve(x, y, spec, 257), reference::fit_curve(x, y, spec, 257)) << to_string(kind);
    }
}

TEST(FitCurve, ExplicitBandwidth) {
    const auto s = quadratic_sample(100, 0.0, 1.0, 1.0, 91);
    const KernelSpec spec{KernelKind::gaussian, Bandwidth{0.02}};
    const auto curve = fit_curve(s.x, s.y, spec, 5);
    EXPECT_EQ(curve.bandwidth, 0.02);
    EXPECT_THROW((void)fit_curve(s.x, s.y, KernelSpec{KernelKind::gaussian, Bandwidth{0.0}}, 5),
                 std::invalid_argument);
}
