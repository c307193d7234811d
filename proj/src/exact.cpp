#include "ruinlab/exact.hpp"

#include "ruinlab/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace ruinlab::exact {

double one_dim_ruin(double c, double u, double T) {
    if (!(u >= 0.0) || !std::isfinite(u))
        throw std::invalid_argument("one_dim_ruin: u must be >= 0");
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("one_dim_ruin: T must be > 0");
    if (!std::isfinite(c)) throw std::invalid_argument("one_dim_ruin: non-finite drift");
    const double sq = std::sqrt(T);
    const double first = gauss::std_normal_cdf(-u / sq - c * sq);
    // second term in log space: e^{-2cu} can overflow for c < 0 while the
    // product stays <= 1
    const double lg = -2.0 * c * u + gauss::std_normal_logcdf(-u / sq + c * sq);
    const double second = lg < 700.0 ? std::exp(lg) : INFINITY;
    double p = first + second;
    if (p > 1.0) p = 1.0;
    return p;
}

double printed_sojourn_constant(double s) {
    if (!(s >= 0.0) || !std::isfinite(s))
        throw std::invalid_argument("printed_sojourn_constant: s must be >= 0");
    const double pi = 3.1415926535897932384626433832795;
    return (2.0 + s) * gauss::std_normal_cdf(std::sqrt(0.5 * s)) -
           std::sqrt(s / pi) * std::exp(-0.25 * s);
}

} // namespace ruinlab::exact
