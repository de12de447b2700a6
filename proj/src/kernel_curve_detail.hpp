#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkscan/kernel.hpp"

namespace linkscan::kernel::detail {

/// Input pairs sorted by (X, Y) plus everything the grid loop needs.
struct CurveSetup {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> grid;
    double bandwidth = 0.0;
    double mid_mass = 0.0;
    LinearOverlay overlay;
};

struct SlotResult {
    std::optional<LocalFitPoint> point;
    std::string error;
};

[[nodiscard]] CurveSetup prepare_curve(std::span<const double> xs, std::span<const double> ys,
                                       const KernelSpec& spec, std::size_t grid_size);

/// Fits one grid slot; records the failure message instead of throwing.
[[nodiscard]] SlotResult fit_slot(const CurveSetup& setup, KernelKind kind, std::size_t i);

/// Deterministic serial assembly. Rethrows the first failure under LocalErrorPolicy::fail.
[[nodiscard]] KernelCurve assemble_curve(const CurveSetup& setup, const KernelSpec& spec,
                                         std::vector<SlotResult>&& slots, LocalErrorPolicy policy);

}  // namespace linkscan::kernel::detail
