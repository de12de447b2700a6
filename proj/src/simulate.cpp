#include "linkscan/simulate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace linkscan::simulate {

double NormalSource::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalSource::operator()() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

pipeline::AlignedBundle synthetic_returns(const SyntheticConfig& config) {
    if (config.prices < 2) throw std::invalid_argument("synthetic series need at least 2 prices");
    const std::size_t n = config.prices - 1;
    NormalSource normal(config.seed);

    pipeline::AlignedBundle b;
    std::chrono::sys_days day{config.start};
    for (std::size_t t = 0; t < n; ++t) {
        day += std::chrono::days{7};
        b.dates.emplace_back(day);
    }
    b.oil = {config.oil_name, b.dates, std::vector<double>(n), ReturnMode::log};
    b.world = {config.world_name, b.dates, std::vector<double>(n), ReturnMode::log};
    for (const auto& c : config.countries) {
        b.countries.push_back({c.name, b.dates, std::vector<double>(n), ReturnMode::log});
    }

    for (std::size_t t = 0; t < n; ++t) {
        const double oil = config.oil_sd * normal();
        const double world_shock = config.world_sd * normal();
        b.oil.values[t] = oil;
        b.world.values[t] = config.world_oil_beta * oil + world_shock;
        for (std::size_t i = 0; i < config.countries.size(); ++i) {
            const auto& c = config.countries[i];
            const double previous = t > 0 ? b.countries[i].values[t - 1] : 0.0;
            const double sd =
                c.noise_sd * (1.0 + c.oil_heteroskedasticity * std::abs(oil) / config.oil_sd);
            b.countries[i].values[t] = c.intercept + c.world_loading * world_shock +
                                       c.oil_loading * oil + c.own_lag * previous + sd * normal();
        }
    }
    return b;
}

std::vector<PriceSeries> synthetic_prices(const SyntheticConfig& config) {
    const auto b = synthetic_returns(config);
    std::vector<Date> dates{config.start};
    dates.insert(dates.end(), b.dates.begin(), b.dates.end());

    const auto cumulate = [&](const ReturnSeries& r) {
        PriceSeries p{r.name, dates, {100.0}};
        for (double v : r.values) p.values.push_back(p.values.back() * std::exp(v));
        return p;
    };
    std::vector<PriceSeries> out{cumulate(b.oil), cumulate(b.world)};
    for (const auto& c : b.countries) out.push_back(cumulate(c));
    return out;
}

SyntheticConfig default_fixture_config(std::uint64_t seed) {
    SyntheticConfig c;
    c.seed = seed;
    c.countries = {
        {"Bahrain", -0.001, 0.3, 0.0, 0.026, 0.4, 0.0},
        {"Kuwait", 0.002, -0.3, 0.05, 0.028, 0.0, 0.0},
        {"Oman", 0.0, 0.5, 0.2, 0.02, 0.0, 1.5},
        {"Qatar", -0.001, 0.2, 0.4, 0.025, 0.0, 1.5},
        {"Saudi", -0.003, 1.0, 0.1, 0.05, 0.0, 0.0},
        {"UAE", -0.004, 0.4, 0.35, 0.025, 0.0, 2.0},
    };
    return c;
}

}  // namespace linkscan::simulate
