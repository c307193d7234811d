#pragma once

#include "ruinlab/gauss.hpp"
#include "ruinlab/model.hpp"

#include <array>
#include <optional>
#include <vector>

namespace ruinlab::quadform {

// Input of the rate evaluation at a fixed (s,t): the covariance and the
// barrier vector. At finite u the barrier carries the drift correction
// (1 + c1 s/u, a + c2 t/u); in the asymptotic regime (u absent) it is (1, a).
struct RateInput {
    gauss::BivCovariance sigma;
    std::array<double, 2> avec;
};

RateInput make_rate_input(const model::ModelParams& params, double s, double t,
                          std::optional<double> u);

struct QValue {
    double q;                  // a' Sigma^{-1} a
    std::array<double, 2> b;   // Sigma^{-1} a
};

QValue q_value(const RateInput& input);

// min_{x >= a} x' Sigma^{-1} x by explicit active-set enumeration
// (dimension 2: both constraints active / one active / none).
double q_star_point(const RateInput& input);

struct GlobalMin {
    double value;
    std::vector<std::array<double, 2>> minimizers;  // lexicographically sorted
};

// min over [delta,1]^2 (delta = 1/grid_n) of q_star_point, grid search plus
// coordinate-descent refinement; returns every minimizer within 1e-8 of the
// minimum, merged by proximity.
GlobalMin q_star_global(const model::ModelParams& params, std::optional<double> u,
                        int grid_n = 256);

// logarithmic decay exponent: lim -u^{-2} log P = q*_a / 2 (positive)
double log_rate(const model::ModelParams& params);

} // namespace ruinlab::quadform
