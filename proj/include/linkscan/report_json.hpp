#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "linkscan/kernel.hpp"
#include "linkscan/pipeline.hpp"

namespace linkscan {

using Json = nlohmann::ordered_json;

/// Report schema version written as the top-level `version` field.
inline constexpr int kReportSchemaVersion = 1;

void to_json(Json& j, const TestResult& v);
void from_json(const Json& j, TestResult& v);

namespace stats {
void to_json(Json& j, const DescriptiveStats& v);
void from_json(const Json& j, DescriptiveStats& v);
}  // namespace stats

namespace ols {
void to_json(Json& j, const CoefficientEstimate& v);
void from_json(const Json& j, CoefficientEstimate& v);
void to_json(Json& j, const FitMetrics& v);
void from_json(const Json& j, FitMetrics& v);
}  // namespace ols

namespace kernel {
void to_json(Json& j, const KernelSpec& v);
void from_json(const Json& j, KernelSpec& v);
void to_json(Json& j, const LocalFitPoint& v);
void from_json(const Json& j, LocalFitPoint& v);
void to_json(Json& j, const KernelCurve& v);
void from_json(const Json& j, KernelCurve& v);
}  // namespace kernel

namespace pipeline {
void to_json(Json& j, const LinkageReport& v);
void from_json(const Json& j, LinkageReport& v);
}  // namespace pipeline

/// Deterministic serialisation: fixed key order, two-space indent, trailing newline.
[[nodiscard]] std::string serialize_report(const pipeline::LinkageReport& report);
[[nodiscard]] pipeline::LinkageReport parse_report(const std::string& text);

/// Plot-data header. Columns: country, x, fitted, local_slope (dm/dx = -beta1),
/// local_curvature (beta2), weight_mass, edge_flag (0/1), overlay.
inline constexpr const char* kPlotCsvHeader =
    "country,x,fitted,local_slope,local_curvature,weight_mass,edge_flag,overlay";

/// One row per fitted grid point of every available curve, `%.17g` precision.
void write_plot_csv(std::ostream& out, const pipeline::LinkageReport& report);

}  // namespace linkscan
