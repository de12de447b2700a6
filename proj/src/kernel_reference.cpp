#include "kernel_curve_detail.hpp"
#include "linkscan/kernel.hpp"

namespace linkscan::kernel::reference {

KernelCurve fit_curve(std::span<const double> xs, std::span<const double> ys,
                      const KernelSpec& spec, std::size_t grid_size, LocalErrorPolicy policy) {
    const auto setup = detail::prepare_curve(xs, ys, spec, grid_size);
    std::vector<detail::SlotResult> slots;
    slots.reserve(setup.grid.size());
    for (std::size_t i = 0; i < setup.grid.size(); ++i) {
        slots.push_back(detail::fit_slot(setup, spec.kind, i));
    }
    return detail::assemble_curve(setup, spec, std::move(slots), policy);
}

}  // namespace linkscan::kernel::reference
