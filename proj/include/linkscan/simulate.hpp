#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "linkscan/pipeline.hpp"
#include "linkscan/series.hpp"

namespace linkscan::simulate {

/// Standard normal draws from mt19937_64 via Box-Muller. Unlike
/// std::normal_distribution the sequence is fixed across standard libraries.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double operator()();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

struct SyntheticCountry {
    std::string name;
    double intercept = 0.0;
    double world_loading = 0.2;  // on the oil-orthogonal world shock
    double oil_loading = 0.3;
    double noise_sd = 0.03;
    double own_lag = 0.0;                // coefficient on the country's previous return
    double oil_heteroskedasticity = 0.0;  // noise sd scales by 1 + h |oil| / oil_sd
};

/// Weekly oil, world and country log returns with planted loadings.
///
/// world = world_oil_beta * oil + world_sd * z_w, and each country is
/// intercept + world_loading * world_sd * z_w + oil_loading * oil + own_lag * r(-1)
/// + noise_sd * (1 + h |oil| / oil_sd) * z_c.
struct SyntheticConfig {
    std::uint64_t seed = 2008;
    std::size_t prices = 177;
    Date start{std::chrono::year{2005}, std::chrono::June, std::chrono::day{3}};
    std::string oil_name = "OPEC";
    std::string world_name = "World";
    double oil_sd = 0.036;
    double world_oil_beta = 0.05;
    double world_sd = 0.006;
    std::vector<SyntheticCountry> countries;
};

[[nodiscard]] pipeline::AlignedBundle synthetic_returns(const SyntheticConfig& config);

/// Prices starting at 100 whose log returns are exactly `synthetic_returns(config)`
/// up to rounding. Order: oil, world, countries.
[[nodiscard]] std::vector<PriceSeries> synthetic_prices(const SyntheticConfig& config);

/// Six-country configuration used for the bundled fixture.
[[nodiscard]] SyntheticConfig default_fixture_config(std::uint64_t seed);

}  // namespace linkscan::simulate
