#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace linkscan::kernel {

enum class KernelKind { gaussian, epanechnikov, uniform };

[[nodiscard]] std::string_view to_string(KernelKind kind);
[[nodiscard]] std::optional<KernelKind> parse_kernel_kind(std::string_view text);

inline constexpr double kDefaultBandwidthFactor = 0.15;
inline constexpr std::size_t kDefaultGridSize = 100;
/// Grid points whose kernel mass falls below this fraction of the mid-range mass are edge-flagged.
inline constexpr double kEdgeMassFraction = 0.05;
/// Largest accepted |R_00|/|R_22| of the equilibrated local system.
inline constexpr double kMaxLocalCondition = 1e12;

/// Absolute bandwidth h.
struct Bandwidth {
    double value = 0.0;
    friend bool operator==(const Bandwidth&, const Bandwidth&) = default;
};

/// Bandwidth as a fraction of the regressor range, h = factor * (max X - min X).
struct BandwidthFactor {
    double value = kDefaultBandwidthFactor;
    friend bool operator==(const BandwidthFactor&, const BandwidthFactor&) = default;
};

struct KernelSpec {
    KernelKind kind = KernelKind::gaussian;
    std::variant<BandwidthFactor, Bandwidth> scale = BandwidthFactor{};

    /// Throws std::invalid_argument for a non-positive scale.
    [[nodiscard]] double resolve_bandwidth(std::span<const double> x) const;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// factor * (max - min). Throws DegenerateSeriesError when x has no range.
[[nodiscard]] double default_bandwidth(std::span<const double> x,
                                       double factor = kDefaultBandwidthFactor);

/// Gaussian: exp(-w^2/2)/sqrt(2 pi). Epanechnikov: 0.75(1-w^2) on |w|<=1. Uniform: 0.5 on |w|<=1.
[[nodiscard]] double kernel_weight(double w, KernelKind kind);

/// Local quadratic fit at one abscissa.
///
/// Coefficients follow the local model Y_i ~ beta0 + beta1 (x - X_i) + beta2 (x - X_i)^2,
/// so beta0 is the curve height, the derivative of the curve is -beta1 and beta2 is
/// half its second derivative.
struct LocalFitPoint {
    double x = 0.0;
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double weight_mass = 0.0;

    [[nodiscard]] double slope() const { return -beta1; }

    friend bool operator==(const LocalFitPoint&, const LocalFitPoint&) = default;
};

/// Kernel-weighted least squares of Y on {1, x-X_i, (x-X_i)^2}.
///
/// Throws LocalFitError carrying `x` when fewer than three distinct X values
/// carry weight or the weighted system is too badly conditioned.
[[nodiscard]] LocalFitPoint local_poly_fit(double x, std::span<const double> xs,
                                           std::span<const double> ys, KernelKind kind,
                                           double bandwidth);

[[nodiscard]] LocalFitPoint local_poly_fit(double x, std::span<const double> xs,
                                           std::span<const double> ys, const KernelSpec& spec);

struct LinearOverlay {
    double intercept = 0.0;
    double slope = 0.0;

    [[nodiscard]] double at(double x) const { return intercept + slope * x; }
    friend bool operator==(const LinearOverlay&, const LinearOverlay&) = default;
};

enum class LocalErrorPolicy { fail, flag_and_skip };

struct SkippedPoint {
    double x = 0.0;
    std::string reason;
    friend bool operator==(const SkippedPoint&, const SkippedPoint&) = default;
};

/// Smooth over an equally spaced grid spanning [min X, max X] plus the global OLS line.
///
/// `points` and `edge_flags` are index-aligned; grid abscissas whose local fit
/// failed under flag_and_skip are listed in `skipped` instead.
struct KernelCurve {
    std::vector<LocalFitPoint> points;
    std::vector<bool> edge_flags;
    std::vector<SkippedPoint> skipped;
    KernelSpec spec;
    double bandwidth = 0.0;
    std::size_t grid_size = 0;
    LinearOverlay linear_overlay;

    friend bool operator==(const KernelCurve&, const KernelCurve&) = default;
};

[[nodiscard]] std::vector<double> make_grid(double lo, double hi, std::size_t grid_size);

/// Grid points are fitted in parallel (OpenMP). The result does not depend on
/// thread count or on the order of the input pairs.
[[nodiscard]] KernelCurve fit_curve(std::span<const double> xs, std::span<const double> ys,
                                    const KernelSpec& spec,
                                    std::size_t grid_size = kDefaultGridSize,
                                    LocalErrorPolicy policy = LocalErrorPolicy::flag_and_skip);

namespace reference {

/// Single-threaded evaluation of the same curve; kept to check the parallel path.
[[nodiscard]] KernelCurve fit_curve(std::span<const double> xs, std::span<const double> ys,
                                    const KernelSpec& spec,
                                    std::size_t grid_size = kDefaultGridSize,
                                    LocalErrorPolicy policy = LocalErrorPolicy::flag_and_skip);

}  // namespace reference

}  // namespace linkscan::kernel
