#include "linkscan/test_result.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace linkscan {

int significance_stars(double p_value) {
    if (p_value < 0.01) return 3;
    if (p_value < 0.05) return 2;
    if (p_value < 0.10) return 1;
    return 0;
}

std::string stars_string(int stars) {
    return std::string(static_cast<std::size_t>(std::clamp(stars, 0, 3)), '*');
}

std::string to_string(Distribution d) {
    switch (d) {
        case Distribution::chi_square: return "chi_square";
        case Distribution::fisher_f: return "f";
        case Distribution::student_t: return "t";
    }
    return "unknown";
}

double chi_square_sf(double stat, double df) {
    if (!(stat > 0.0)) return 1.0;
    if (std::isinf(stat)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
}

double fisher_f_sf(double stat, double df1, double df2) {
    if (!(stat > 0.0)) return 1.0;
    if (std::isinf(stat)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), stat));
}

double student_t_two_sided(double t, double df) {
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    const double upper =
        boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::abs(t)));
    return std::min(1.0, 2.0 * upper);
}

TestResult chi_square_test(std::string name, double stat, double df) {
    TestResult r;
    r.name = std::move(name);
    r.stat = stat;
    r.distribution = Distribution::chi_square;
    r.df = df;
    r.p_value = chi_square_sf(stat, df);
    r.stars = significance_stars(r.p_value);
    return r;
}

}  // namespace linkscan
