#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ruinlab::model {

// Risk-model parameters: correlation rho, barrier ratio a (second barrier is
// a*u), premium rates c1, c2.
struct ModelParams {
    double rho;
    double a;
    double c1 = 0.0;
    double c2 = 0.0;

    void validate() const;
};

// Scaled sojourn budgets: the time-above-barrier requirements are
// H_i(u) = s_i / u^2. u is carried when a concrete horizon-1 event is needed.
struct SojournBudget {
    double s1 = 0.0;
    double s2 = 0.0;
    std::optional<double> u;

    void validate() const;
    double h1() const;
    double h2() const;
};

enum class RegimeKind {
    DimReduction,      // a <= rho
    Supercritical,     // rho >  A_a
    CriticalALt1,      // rho == A_a, a < 1
    CriticalAEq1,      // rho == A_a, a = 1
    SubcriticalALt1,   // rho <  A_a, a < 1
    SubcriticalAEq1,   // rho <  A_a, a = 1
};

const char* regime_name(RegimeKind k);

struct Regime {
    RegimeKind kind;
    double boundary;  // A_a
    double t_star;
    std::vector<std::array<double, 2>> minimizers;
};

// critical correlation A_a = (1 - sqrt(8 a^2 + 1)) / (4a), a in (0,1]
double regime_boundary(double a);

// Total and deterministic on valid parameters; |rho - A_a| <= tol counts as
// the critical case.
Regime classify(const ModelParams& params, double tol = 1e-12);

// limit location of the time-coordinate optimizer for the given regime
double t_star(const ModelParams& params, const Regime& regime);

// Self-similarity reduction of {B(tT) - c tT > u} to horizon 1:
// returns (c*sqrt(T), u/sqrt(T)).
std::pair<double, double> rescale_horizon(double c, double u, double T);

} // namespace ruinlab::model
