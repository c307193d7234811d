#pragma once

namespace ruinlab::exact {

// P(sup_{t in [0,T]} (B(t) - c t) > u) for u >= 0, T > 0:
// Phi(-u/sqrt(T) - c sqrt(T)) + e^{-2cu} Phi(-u/sqrt(T) + c sqrt(T)).
double one_dim_ruin(double c, double u, double T);

// The closed form (2+S) Phi(sqrt(S/2)) - sqrt(S/pi) e^{-S/4}, evaluated
// verbatim. Reported side by side with the Monte Carlo constant; see
// asymptotics::discrepancy_report. Note it equals 1 at S=0 and increases in S,
// while the integral-representation constant starts at 2 and is nonincreasing;
// the two cannot both describe the same quantity, and the estimators treat the
// integral representation as definitive.
double printed_sojourn_constant(double s);

} // namespace ruinlab::exact
