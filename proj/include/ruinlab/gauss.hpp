#pragma once

#include <array>

namespace ruinlab::gauss {

// Standard normal distribution function Phi, its survival Psi = 1 - Phi and
// density phi. Tails are evaluated in survival form (erfc), never as 1 - Phi,
// so ratios of tail quantities stay accurate out to |x| ~ 30.
double std_normal_cdf(double x);
double std_normal_survival(double x);
double std_normal_pdf(double x);

// log Phi(x), usable for arbitrarily negative x (asymptotic branch below -36).
double std_normal_logcdf(double x);

// scaled complementary error function e^{x^2} erfc(x); finite for all x >= 0,
// grows like 2 e^{x^2} for x < 0 (caller guards the negative range).
double erfcx(double x);

// Covariance of (W1(s), W2(t)) for the correlated Brownian pair:
// [[s, rho*min(s,t)], [rho*min(s,t), t]].
struct BivCovariance {
    double s;
    double t;
    double rho;

    BivCovariance(double s_, double t_, double rho_);

    double min_st() const { return s < t ? s : t; }
    double det() const {
        const double m = min_st();
        return s * t - rho * rho * m * m;
    }
    std::array<std::array<double, 2>, 2> entries() const {
        const double m = min_st();
        return {{{s, rho * m}, {rho * m, t}}};
    }
};

// centered bivariate normal density with covariance cov at (x, y)
double biv_density(const BivCovariance& cov, double x, double y);

} // namespace ruinlab::gauss
