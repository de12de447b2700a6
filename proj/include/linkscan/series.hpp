#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace linkscan {

using Date = std::chrono::year_month_day;

/// Parses a strict `YYYY-MM-DD` calendar date. Returns nullopt on any malformation.
std::optional<Date> parse_iso_date(std::string_view text);
std::string to_iso_string(const Date& date);

enum class ReturnMode { log, simple };

std::string_view to_string(ReturnMode mode);
std::optional<ReturnMode> parse_return_mode(std::string_view text);

/// Dated price levels of one named series. Dates strictly increasing, values > 0.
struct PriceSeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;
};

/// Per-period returns; dates[t] is the later date of the pair (t, t+1) of the source prices.
struct ReturnSeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;
    ReturnMode mode = ReturnMode::log;

    [[nodiscard]] std::size_t size() const { return values.size(); }
};

}  // namespace linkscan
