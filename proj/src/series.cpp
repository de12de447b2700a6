#include "linkscan/series.hpp"

#include <charconv>
#include <cstdio>

namespace linkscan {

namespace {

bool parse_digits(std::string_view text, int& out) {
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    int m = 0;
    int d = 0;
    if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
        !parse_digits(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string to_iso_string(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::string_view to_string(ReturnMode mode) {
    return mode == ReturnMode::log ? "log" : "simple";
}

std::optional<ReturnMode> parse_return_mode(std::string_view text) {
    if (text == "log") return ReturnMode::log;
    if (text == "simple") return ReturnMode::simple;
    return std::nullopt;
}

}  // namespace linkscan
