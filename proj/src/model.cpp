#include "ruinlab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ruinlab::model {

void ModelParams::validate() const {
    if (!std::isfinite(rho) || !(std::fabs(rho) < 1.0))
        throw std::invalid_argument("ModelParams: rho must lie strictly inside (-1,1)");
    if (!std::isfinite(a) || !(a > 0.0) || !(a <= 1.0))
        throw std::invalid_argument("ModelParams: a must lie in (0,1]");
    if (!std::isfinite(c1) || !std::isfinite(c2))
        throw std::invalid_argument("ModelParams: non-finite premium rate");
}

void SojournBudget::validate() const {
    if (!(s1 >= 0.0) || !(s2 >= 0.0))
        throw std::invalid_argument("SojournBudget: budgets must be >= 0");
    if (u && !(*u > 0.0))
        throw std::invalid_argument("SojournBudget: u must be > 0");
}

double SojournBudget::h1() const {
    if (!u) throw std::invalid_argument("SojournBudget: u not set");
    return s1 / (*u * *u);
}

double SojournBudget::h2() const {
    if (!u) throw std::invalid_argument("SojournBudget: u not set");
    return s2 / (*u * *u);
}

const char* regime_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::DimReduction: return "dim_reduction";
        case RegimeKind::Supercritical: return "supercritical";
        case RegimeKind::CriticalALt1: return "critical_a_lt_1";
        case RegimeKind::CriticalAEq1: return "critical_a_eq_1";
        case RegimeKind::SubcriticalALt1: return "subcritical_a_lt_1";
        case RegimeKind::SubcriticalAEq1: return "subcritical_a_eq_1";
    }
    return "unknown";
}

double regime_boundary(double a) {
    if (!std::isfinite(a) || !(a > 0.0) || !(a <= 1.0))
        throw std::invalid_argument("regime_boundary: a must lie in (0,1]");
    return (1.0 - std::sqrt(8.0 * a * a + 1.0)) / (4.0 * a);
}

Regime classify(const ModelParams& params, double tol) {
    params.validate();
    if (!(tol >= 0.0)) throw std::invalid_argument("classify: tol must be >= 0");

    Regime r;
    r.boundary = regime_boundary(params.a);

    if (params.a <= params.rho) {
        r.kind = RegimeKind::DimReduction;
    } else if (std::fabs(params.rho - r.boundary) <= tol) {
        r.kind = params.a == 1.0 ? RegimeKind::CriticalAEq1 : RegimeKind::CriticalALt1;
    } else if (params.rho > r.boundary) {
        r.kind = RegimeKind::Supercritical;
    } else {
        r.kind = params.a == 1.0 ? RegimeKind::SubcriticalAEq1 : RegimeKind::SubcriticalALt1;
    }

    r.t_star = t_star(params, r);
    switch (r.kind) {
        case RegimeKind::SubcriticalALt1:
            r.minimizers = {{1.0, r.t_star}};
            break;
        case RegimeKind::SubcriticalAEq1:
            r.minimizers = {{r.t_star, 1.0}, {1.0, r.t_star}};
            break;
        default:
            r.minimizers = {{1.0, 1.0}};
            break;
    }
    return r;
}

double t_star(const ModelParams& params, const Regime& regime) {
    double ts;
    switch (regime.kind) {
        case RegimeKind::DimReduction:
        case RegimeKind::Supercritical:
        case RegimeKind::CriticalALt1:
        case RegimeKind::CriticalAEq1:
            ts = 1.0;
            break;
        case RegimeKind::SubcriticalALt1:
            ts = params.a / (params.rho * (2.0 * params.a * params.rho - 1.0));
            break;
        case RegimeKind::SubcriticalAEq1:
            ts = 1.0 / (params.rho * (2.0 * params.rho - 1.0));
            break;
        default:
            throw std::logic_error("t_star: unknown regime");
    }
    if (!(ts > 0.0) || !(ts <= 1.0))
        throw std::logic_error("t_star: optimizer outside (0,1] for rho=" +
                               std::to_string(params.rho) + ", a=" + std::to_string(params.a));
    return ts;
}

std::pair<double, double> rescale_horizon(double c, double u, double T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("rescale_horizon: T must be > 0");
    if (!std::isfinite(c) || !std::isfinite(u))
        throw std::invalid_argument("rescale_horizon: non-finite input");
    const double sq = std::sqrt(T);
    return {c * sq, u / sq};
}

} // namespace ruinlab::model
