#pragma once

#include <cstddef>
#include <span>

#include "linkscan/series.hpp"
#include "linkscan/test_result.hpp"

namespace linkscan::stats {

/// Sample moments of a return series plus the Jarque-Bera normality test.
///
/// Skewness and kurtosis use n-divisor central moments; `kurtosis` is the raw
/// (non-excess) value, so a normal sample sits near 3. `std_dev` uses the
/// (n-1)-divisor sample variance.
struct DescriptiveStats {
    std::string name;
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    TestResult jarque_bera;

    friend bool operator==(const DescriptiveStats&, const DescriptiveStats&) = default;
};

/// Differences a price series into returns.
///
/// Throws InsufficientDataError for fewer than two prices and DataError naming
/// the offending index for a non-positive or non-finite price.
[[nodiscard]] ReturnSeries compute_returns(const PriceSeries& prices, ReturnMode mode);

/// Throws InsufficientDataError for n < 4, DegenerateSeriesError for a constant series.
[[nodiscard]] DescriptiveStats describe(std::span<const double> values);
[[nodiscard]] DescriptiveStats describe(const ReturnSeries& returns);

/// JB = (n/6)(S^2 + (K-3)^2/4), chi-square with 2 degrees of freedom. K is raw kurtosis.
[[nodiscard]] TestResult jarque_bera(double skewness, double kurtosis, std::size_t n);

}  // namespace linkscan::stats
