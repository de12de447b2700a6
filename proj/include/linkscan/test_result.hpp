#pragma once

#include <string>

namespace linkscan {

enum class Distribution { chi_square, fisher_f, student_t };

/// A named diagnostic statistic with its reference distribution and p-value.
struct TestResult {
    std::string name;
    double stat = 0.0;
    Distribution distribution = Distribution::chi_square;
    double df = 0.0;
    double df2 = 0.0;  // denominator df; used by fisher_f only
    double p_value = 1.0;
    int stars = 0;
    bool overflow = false;  // stat was infinite and is reported as the largest finite double

    friend bool operator==(const TestResult&, const TestResult&) = default;
};

/// Significance stars at the 10% / 5% / 1% levels.
[[nodiscard]] int significance_stars(double p_value);

[[nodiscard]] std::string stars_string(int stars);

[[nodiscard]] std::string to_string(Distribution d);

/// Upper tail of a chi-square distribution.
[[nodiscard]] double chi_square_sf(double stat, double df);
/// Upper tail of an F(df1, df2) distribution.
[[nodiscard]] double fisher_f_sf(double stat, double df1, double df2);
/// Two-sided p-value of a t statistic with `df` degrees of freedom.
[[nodiscard]] double student_t_two_sided(double t, double df);

[[nodiscard]] TestResult chi_square_test(std::string name, double stat, double df);

}  // namespace linkscan
