#include "linkscan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "linkscan/error.hpp"

namespace linkscan::stats {

ReturnSeries compute_returns(const PriceSeries& prices, ReturnMode mode) {
    const auto& p = prices.values;
    if (p.size() < 2) {
        throw InsufficientDataError("series '" + prices.name +
                                    "': at least 2 prices are needed to form returns");
    }
    if (prices.dates.size() != p.size()) {
        throw DataError("series '" + prices.name + "': dates and values differ in length");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0) || !std::isfinite(p[i])) {
            throw DataError("series '" + prices.name + "': non-positive price at index " +
                            std::to_string(i));
        }
    }

    ReturnSeries out;
    out.name = prices.name;
    out.mode = mode;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.values.resize(p.size() - 1);
    for (std::size_t t = 1; t < p.size(); ++t) {
        out.values[t - 1] = mode == ReturnMode::log ? std::log(p[t] / p[t - 1]) : p[t] / p[t - 1] - 1.0;
    }
    return out;
}

DescriptiveStats describe(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) {
        throw InsufficientDataError("descriptive statistics need at least 4 observations, got " +
                                    std::to_string(n));
    }
    const double nd = static_cast<double>(n);

    double sum = 0.0;
    double scale = 0.0;
    for (double v : x) {
        sum += v;
        scale = std::max(scale, std::abs(v));
    }
    const double mean = sum / nd;

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;

    // Rounding noise around a constant value is still a constant series.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (!(std::sqrt(m2) > noise)) {
        throw DegenerateSeriesError("constant series: skewness and kurtosis are undefined");
    }

    DescriptiveStats s;
    s.n = n;
    s.mean = mean;
    s.std_dev = std::sqrt(m2 * nd / (nd - 1.0));
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    s.jarque_bera = jarque_bera(s.skewness, s.kurtosis, n);
    return s;
}

DescriptiveStats describe(const ReturnSeries& returns) {
    try {
        auto s = describe(std::span<const double>(returns.values));
        s.name = returns.name;
        return s;
    } catch (const DegenerateSeriesError& e) {
        throw DegenerateSeriesError("series '" + returns.name + "': " + e.what());
    } catch (const InsufficientDataError& e) {
        throw InsufficientDataError("series '" + returns.name + "': " + e.what());
    }
}

TestResult jarque_bera(double skewness, double kurtosis, std::size_t n) {
    if (n < 4) {
        throw InsufficientDataError("Jarque-Bera needs at least 4 observations");
    }
    const double excess = kurtosis - 3.0;
    const double stat =
        static_cast<double>(n) / 6.0 * (skewness * skewness + excess * excess / 4.0);
    return chi_square_test("jarque_bera", stat, 2.0);
}

}  // namespace linkscan::stats
