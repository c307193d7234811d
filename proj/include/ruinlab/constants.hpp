#pragma once

#include "ruinlab/model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ruinlab::constants {

enum class ConstantKind { P, H, R };

// Specification of one Pickands-type sojourn constant.
//   P: int_R P{ soj_[0,inf) of (B - w1 t) above x > s1 } e^{w2 x} dx, 2 w1 > w2
//   H: lim_D (1/D) int_R P{ soj_[0,D] ... } e^{w2 x} dx, with w2 = 2 w1
//   R: int_R2 P{ joint sojourns of the correlated pair } e^{l1 x + l2 y} dx dy
struct ConstantSpec {
    ConstantKind kind = ConstantKind::P;
    double w1 = 1.0;
    double w2 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;   // R only
    double rho = 0.0;  // R only
    double a = 1.0;    // R only
    double lambda1 = 0.0;  // R only; 0 means derive from (rho, a)
    double lambda2 = 0.0;

    void validate() const;
    double lam1() const;  // (1 - a rho) / (1 - rho^2) unless overridden
    double lam2() const;  // (a - rho) / (1 - rho^2) unless overridden
};

struct EstimatorResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    double horizon = 0.0;  // accepted horizon (P/R) or Delta (H rows)
    double dt = 0.0;
    std::int64_t clamped = 0;          // overflow-clamped terms; nonzero => invalid
    double truncation_shift = 0.0;     // |estimate(2h) - estimate(h)| at acceptance
    bool cached = false;               // served from the on-disk result cache
    std::vector<std::string> warnings;
};

// Joint estimates over several budgets from one common-random-numbers sweep.
// cov is the covariance matrix of the reported estimates.
struct MultiEstimate {
    std::vector<EstimatorResult> results;
    std::vector<std::vector<double>> cov;
};

struct HEstimate {
    EstimatorResult fit;                    // Delta -> infinity extrapolation
    std::vector<EstimatorResult> per_delta; // windowed values g(Delta)
};

// P-hat. horizon <= 0 selects 10/w1 and the horizon then adapts (doubled until
// the estimate moves by < 0.5 stderr); n_steps <= 0 selects dt = 5e-5 / w1^2.
EstimatorResult estimate_P(const ConstantSpec& spec, double horizon, std::int64_t n_steps,
                           std::int64_t n, std::uint64_t seed, int workers = 0);
MultiEstimate estimate_P_multi(double w1, double w2, const std::vector<double>& budgets,
                               double horizon, std::int64_t n_steps, std::int64_t n,
                               std::uint64_t seed, int workers = 0);

// H-hat: windowed values over the given Deltas (strictly increasing, >= 3),
// extrapolated by a least-squares fit of g(D) = c + b/D. Requires w2 = 2 w1.
// n_steps_per_unit <= 0 selects dt = 5e-5 / w1^2.
HEstimate estimate_H(const ConstantSpec& spec, const std::vector<double>& deltas,
                     std::int64_t n_steps_per_unit, std::int64_t n, std::uint64_t seed,
                     int workers = 0);
std::vector<HEstimate> estimate_H_multi(double w1, double w2,
                                        const std::vector<double>& budgets,
                                        const std::vector<double>& deltas,
                                        std::int64_t n_steps_per_unit, std::int64_t n,
                                        std::uint64_t seed, int workers = 0);

// R-hat for budget pairs (s1, s2). Requires a > max(0, rho).
EstimatorResult estimate_R(const ConstantSpec& spec, double horizon, std::int64_t n_steps,
                           std::int64_t n, std::uint64_t seed, int workers = 0);
MultiEstimate estimate_R_multi(double rho, double a,
                               const std::vector<std::pair<double, double>>& budgets,
                               double horizon, std::int64_t n_steps, std::int64_t n,
                               std::uint64_t seed, int workers = 0);

// Case-dependent exponent weights and drifts feeding the P/H specs of the
// subcritical regimes (and the equal-time weights of the critical ones).
struct LambdaTable {
    double lambda1;
    double lambda2;
    double drift1;
    double drift2;
};

LambdaTable lambda_table(const model::Regime& regime, const model::ModelParams& params);

// stable serialization of an estimation configuration + FNV-1a hash
std::string config_string(const ConstantSpec& spec, double horizon, std::int64_t n_steps,
                          std::int64_t n, std::uint64_t seed);
std::uint64_t fnv1a(const std::string& s);

} // namespace ruinlab::constants
