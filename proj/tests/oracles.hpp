#pragma once

// Independent numerical oracles for the test suite. Everything here is
// derived from first principles (series, continued fractions, quadrature)
// and must not call into the library code it checks.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// erf by Maclaurin series (|z| <= 4), relative error < 1e-15
inline long double erf_series(long double z) {
    const long double z2 = z * z;
    long double term = z, sum = z;
    for (int n = 1; n < 200; ++n) {
        term *= -z2 / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs((double)(add / sum)) < 1e-19L) break;
    }
    return sum * 1.1283791670955125738961589031195L;  // 2/sqrt(pi)
}

// erfc by long-double quadrature of the shifted integral (z >= 2):
// erfc(z) = (2/sqrt(pi)) e^{-z^2} int_0^inf e^{-2 z u - u^2} du
inline long double erfc_cf(long double z) {
    const long double hi = 2.0L + 25.0L / z;  // integrand below e^{-50} past here
    const int n = 100000;
    const long double h = hi / n;
    long double s = 1.0L;  // f(0) + f(hi), the latter negligible
    for (int i = 1; i < n; ++i) {
        const long double u = i * h;
        s += std::exp(-2.0L * z * u - u * u) * (i % 2 ? 4.0L : 2.0L);
    }
    s *= h / 3.0L;
    return 1.1283791670955125738961589031195L * std::exp(-z * z) * s;
}

inline double std_normal_cdf(double x) {
    const long double z = -x * 0.70710678118654752440084436210485L;
    long double erfc_z;
    if (z >= 2.0L)
        erfc_z = erfc_cf(z);
    else if (z <= -2.0L)
        erfc_z = 2.0L - erfc_cf(-z);
    else
        erfc_z = 1.0L - erf_series(z);
    return (double)(0.5L * erfc_z);
}

inline double std_normal_survival(double x) { return std_normal_cdf(-x); }

// composite Simpson on [a, b]
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// P(sup_{[0,T]}(B - c t) > u) from the reflection formula, using the oracle Phi
inline double one_dim_ruin(double c, double u, double T) {
    const double sq = std::sqrt(T);
    return std_normal_cdf(-u / sq - c * sq) +
           std::exp(-2.0 * c * u) * std_normal_cdf(-u / sq + c * sq);
}

// (1/(w2 D)) E[e^{w2 M_D}] for M_D = sup_{[0,D]}(B - w1 t) and w2 = 2 w1, by
// quadrature of the closed-form sup tail. Target accuracy ~1e-8, so the
// inner Phi can be the libm erfc (the independence of this oracle lies in
// the closed-form route, not the scalar special function).
inline double windowed_sup_moment(double w1, double w2, double D) {
    const double sq = std::sqrt(D);
    auto phi_fast = [](double x) { return 0.5 * std::erfc(-x * 0.7071067811865476); };
    // E[e^{w2 M}] = 1 + w2 int_0^inf e^{w2 x} P(M > x) dx with the integrand
    // Phi((w1 D - x)/sqrt(D)) e^{(w2-2w1)x} + e^{w2 x} Phi(-(x+w1 D)/sqrt(D)),
    // second piece in log space
    auto integrand = [&](double x) {
        const double t2 = std::exp((w2 - 2.0 * w1) * x) *
                          phi_fast((w1 * D - x) / sq);
        const double z = (x + w1 * D) / sq;
        double t1;
        if (z < 20.0) {
            t1 = std::exp(w2 * x) * phi_fast(-z);
        } else {
            const double lp = -0.5 * z * z - std::log(z * 2.5066282746310005);
            const double e = w2 * x + lp;
            t1 = e < -700.0 ? 0.0 : std::exp(e);
        }
        return t1 + t2;
    };
    const double hi = std::max(10.0 * w1 * D, 60.0 / std::max(1.0, 2.0 * w1 - w2));
    const double integral = simpson(integrand, 0.0, hi, 100000);
    return (1.0 + w2 * integral) / (w2 * D);
}

} // namespace oracles
