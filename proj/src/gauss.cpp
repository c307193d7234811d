#include "ruinlab/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace ruinlab::gauss {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
} // namespace

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("std_normal_cdf: non-finite input");
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_survival(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("std_normal_survival: non-finite input");
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_normal_pdf(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("std_normal_pdf: non-finite input");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_logcdf(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("std_normal_logcdf: non-finite input");
    if (x > -36.0) return std::log(0.5 * std::erfc(-x * kInvSqrt2));
    // Phi(x) = phi(-x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
    const double y = -x;
    const double y2 = y * y;
    const double series = 1.0 - 1.0 / y2 + 3.0 / (y2 * y2) - 15.0 / (y2 * y2 * y2);
    return -0.5 * y2 - kLogSqrt2Pi - std::log(y) + std::log(series);
}

double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic expansion, relative error < 1e-16 for x >= 25
    const double ix2 = 1.0 / (x * x);
    double s = 1.0 + ix2 * (-0.5 + ix2 * (0.75 + ix2 * (-1.875 + ix2 * 6.5625)));
    return s / (x * 1.7724538509055160272981674833411);
}

BivCovariance::BivCovariance(double s_, double t_, double rho_) : s(s_), t(t_), rho(rho_) {
    if (!(s > 0.0) || !(t > 0.0) || s > 1.0 || t > 1.0)
        throw std::invalid_argument("BivCovariance: s, t must lie in (0,1]");
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("BivCovariance: |rho| must be < 1");
    if (!(det() > 0.0))
        throw std::invalid_argument("BivCovariance: degenerate covariance");
}

double biv_density(const BivCovariance& cov, double x, double y) {
    const double d = cov.det();
    if (!(d > 0.0)) throw std::invalid_argument("biv_density: degenerate covariance");
    const double m = cov.min_st();
    const double quad = (cov.t * x * x - 2.0 * cov.rho * m * x * y + cov.s * y * y) / d;
    return std::exp(-0.5 * quad) / (2.0 * 3.1415926535897932384626433832795 * std::sqrt(d));
}

} // namespace ruinlab::gauss
