#include "linkscan/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "kernel_curve_detail.hpp"
#include "linkscan/detail/least_squares.hpp"
#include "linkscan/error.hpp"

namespace linkscan::kernel {

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::epanechnikov: return "epanechnikov";
        case KernelKind::uniform: return "uniform";
    }
    return "unknown";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view text) {
    if (text == "gaussian") return KernelKind::gaussian;
    if (text == "epanechnikov") return KernelKind::epanechnikov;
    if (text == "uniform") return KernelKind::uniform;
    return std::nullopt;
}

double default_bandwidth(std::span<const double> x, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("bandwidth factor must be positive");
    if (x.empty()) throw InsufficientDataError("bandwidth of an empty sample");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) throw DegenerateSeriesError("regressor has zero range; bandwidth undefined");
    return factor * range;
}

double KernelSpec::resolve_bandwidth(std::span<const double> x) const {
    if (const auto* h = std::get_if<Bandwidth>(&scale)) {
        if (!(h->value > 0.0)) throw std::invalid_argument("bandwidth must be positive");
        return h->value;
    }
    return default_bandwidth(x, std::get<BandwidthFactor>(scale).value);
}

double kernel_weight(double w, KernelKind kind) {
    switch (kind) {
        case KernelKind::gaussian:
            return std::exp(-0.5 * w * w) * (0.5 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi);
        case KernelKind::epanechnikov:
            return std::abs(w) <= 1.0 ? 0.75 * (1.0 - w * w) : 0.0;
        case KernelKind::uniform:
            return std::abs(w) <= 1.0 ? 0.5 : 0.0;
    }
    return 0.0;
}

LocalFitPoint local_poly_fit(double x, std::span<const double> xs, std::span<const double> ys,
                             KernelKind kind, double bandwidth) {
    if (xs.size() != ys.size()) throw DataError("local fit: X and Y differ in length");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");

    std::vector<Eigen::Index> support;
    std::vector<double> weights;
    double mass = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double k = kernel_weight((x - xs[i]) / bandwidth, kind);
        mass += k;
        if (k > 0.0) {
            support.push_back(static_cast<Eigen::Index>(i));
            weights.push_back(k);
        }
    }

    std::vector<double> distinct;
    for (auto i : support) distinct.push_back(xs[static_cast<std::size_t>(i)]);
    std::sort(distinct.begin(), distinct.end());
    const auto n_distinct = std::unique(distinct.begin(), distinct.end()) - distinct.begin();
    if (n_distinct < 3) {
        throw LocalFitError("local fit at x=" + std::to_string(x) + ": only " +
                                std::to_string(n_distinct) + " distinct weighted support points",
                            x);
    }

    const auto m = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd response(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto i = static_cast<std::size_t>(support[static_cast<std::size_t>(r)]);
        const double root_w = std::sqrt(weights[static_cast<std::size_t>(r)]);
        const double d = x - xs[i];
        design(r, 0) = root_w;
        design(r, 1) = root_w * d;
        design(r, 2) = root_w * d * d;
        response(r) = root_w * ys[i];
    }

    const auto sol = linkscan::detail::solve_least_squares(design, response);
    if (!sol.full_rank() || !(sol.condition_estimate <= kMaxLocalCondition) ||
        !sol.coefficients.allFinite()) {
        throw LocalFitError("local fit at x=" + std::to_string(x) + ": ill-conditioned weighted system",
                            x);
    }
    return {x, sol.coefficients(0), sol.coefficients(1), sol.coefficients(2), mass};
}

LocalFitPoint local_poly_fit(double x, std::span<const double> xs, std::span<const double> ys,
                             const KernelSpec& spec) {
    return local_poly_fit(x, xs, ys, spec.kind, spec.resolve_bandwidth(xs));
}

std::vector<double> make_grid(double lo, double hi, std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> grid(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

namespace detail {

CurveSetup prepare_curve(std::span<const double> xs, std::span<const double> ys,
                         const KernelSpec& spec, std::size_t grid_size) {
    if (xs.size() != ys.size()) throw DataError("kernel curve: X and Y differ in length");
    if (xs.empty()) throw InsufficientDataError("kernel curve: empty input");
    if (grid_size < 2) throw std::invalid_argument("kernel curve: grid_size must be >= 2");

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
    });

    CurveSetup s;
    s.xs.reserve(xs.size());
    s.ys.reserve(ys.size());
    for (auto i : order) {
        s.xs.push_back(xs[i]);
        s.ys.push_back(ys[i]);
    }
    s.bandwidth = spec.resolve_bandwidth(s.xs);
    const double lo = s.xs.front();
    const double hi = s.xs.back();
    if (!(hi > lo)) throw DegenerateSeriesError("kernel curve: regressor has zero range");
    s.grid = make_grid(lo, hi, grid_size);

    const double mid = 0.5 * (lo + hi);
    for (double v : s.xs) s.mid_mass += kernel_weight((mid - v) / s.bandwidth, spec.kind);

    const double nd = static_cast<double>(s.xs.size());
    const double mx = std::accumulate(s.xs.begin(), s.xs.end(), 0.0) / nd;
    const double my = std::accumulate(s.ys.begin(), s.ys.end(), 0.0) / nd;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
        sxy += (s.xs[i] - mx) * (s.ys[i] - my);
        sxx += (s.xs[i] - mx) * (s.xs[i] - mx);
    }
    s.overlay.slope = sxy / sxx;
    s.overlay.intercept = my - s.overlay.slope * mx;
    return s;
}

SlotResult fit_slot(const CurveSetup& setup, KernelKind kind, std::size_t i) {
    try {
        return {local_poly_fit(setup.grid[i], setup.xs, setup.ys, kind, setup.bandwidth), {}};
    } catch (const LocalFitError& e) {
        return {std::nullopt, e.what()};
    }
}

KernelCurve assemble_curve(const CurveSetup& setup, const KernelSpec& spec,
                           std::vector<SlotResult>&& slots, LocalErrorPolicy policy) {
    KernelCurve curve;
    curve.spec = spec;
    curve.bandwidth = setup.bandwidth;
    curve.grid_size = setup.grid.size();
    curve.linear_overlay = setup.overlay;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        auto& slot = slots[i];
        if (!slot.point) {
            if (policy == LocalErrorPolicy::fail) throw LocalFitError(slot.error, setup.grid[i]);
            curve.skipped.push_back({setup.grid[i], std::move(slot.error)});
            continue;
        }
        curve.edge_flags.push_back(slot.point->weight_mass < kEdgeMassFraction * setup.mid_mass);
        curve.points.push_back(*slot.point);
    }
    return curve;
}

}  // namespace detail

KernelCurve fit_curve(std::span<const double> xs, std::span<const double> ys,
                      const KernelSpec& spec, std::size_t grid_size, LocalErrorPolicy policy) {
    const auto setup = detail::prepare_curve(xs, ys, spec, grid_size);
    const auto count = static_cast<std::ptrdiff_t>(setup.grid.size());
    std::vector<detail::SlotResult> slots(setup.grid.size());

#pragma omp parallel for schedule(dynamic, 4) if (count > 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        slots[static_cast<std::size_t>(i)] =
            detail::fit_slot(setup, spec.kind, static_cast<std::size_t>(i));
    }
    return detail::assemble_curve(setup, spec, std::move(slots), policy);
}

}  // namespace linkscan::kernel
