#pragma once

#include "ruinlab/asymptotics.hpp"
#include "ruinlab/constants.hpp"
#include "ruinlab/model.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ruinlab::mc {

// Direct estimates of the classical two-barrier ruin probability pi, the
// cumulative Parisian (sojourn) probability S, and their ratio, from one
// set of paths. s_hat <= pi_hat holds pathwise by construction.
struct ProbeResult {
    constants::EstimatorResult pi_hat;
    constants::EstimatorResult s_hat;
    constants::EstimatorResult ratio;
    bool ratio_defined = false;
    std::int64_t n_pi = 0;      // joint sup-crossing count
    std::int64_t n_s = 0;       // joint sojourn-exceedance count
    std::int64_t n_ruin1 = 0;   // marginal crossing counts
    std::int64_t n_ruin2 = 0;
    std::int64_t n_simul = 0;   // same-instant crossing (diagnostic only)
    double ess = 0.0;           // effective sample size (tilted runs)
    // Brownian-bridge-corrected crossing probabilities (sup-only diagnostic,
    // filled when requested; the joint value assumes independent bridges)
    double bridge1 = NAN;
    double bridge2 = NAN;
    double bridge_joint = NAN;
    std::vector<std::string> warnings;
};

ProbeResult estimate_probabilities(const model::ModelParams& params, double u,
                                   const model::SojournBudget& budget, std::int64_t n,
                                   std::int64_t n_steps, std::uint64_t seed,
                                   int workers = 0);

// Importance-sampled variant: linear drifts are added to the driving motions
// so the mean path reaches (u + c1 s*, a u + c2 t*) at the rate minimizer
// (s*, t*); paths are reweighted by the exact Gaussian likelihood ratio.
ProbeResult tilted_estimate(const model::ModelParams& params, double u,
                            const model::SojournBudget& budget, std::int64_t n,
                            std::int64_t n_steps, std::uint64_t seed, int workers = 0);

// opt-in continuous-time sup correction: the probability that a Brownian
// bridge crosses the barrier between grid points sharpens the crossing
// indicators; sojourn quantities keep the grid convention
ProbeResult estimate_probabilities_bridge(const model::ModelParams& params, double u,
                                          const model::SojournBudget& budget,
                                          std::int64_t n, std::int64_t n_steps,
                                          std::uint64_t seed, int workers = 0);

struct SweepRow {
    double u;
    double h1;  // concrete sojourn requirement on horizon 1
    double h2;
};

// One common-random-numbers sweep serving several barrier levels; the
// building block of converge_table and of the budget-scaling property tests.
std::vector<ProbeResult> multi_level_sweep(const model::ModelParams& params,
                                           const std::vector<SweepRow>& rows,
                                           std::int64_t n, std::int64_t n_steps,
                                           std::uint64_t seed, int workers = 0);

struct ConvergeRow {
    double u;
    ProbeResult probe;
    double limit;
    double gap;  // |ratio - limit| (NaN when the ratio is undefined)
};

struct ConvergeTable {
    std::vector<ConvergeRow> rows;
    asymptotics::LimitResult limit;
};

ConvergeTable converge_table(const model::ModelParams& params,
                             const model::SojournBudget& budget,
                             const std::vector<double>& u_list, std::int64_t n,
                             std::int64_t n_steps, std::uint64_t seed,
                             asymptotics::ConstantStore& store, int workers = 0);

// One-dimensional ruin frequencies for several (c, u) pairs from a single
// Brownian sweep; the Monte Carlo side of the exact-formula cross-check.
std::vector<constants::EstimatorResult> one_dim_ruin_mc(
    const std::vector<std::pair<double, double>>& cu_pairs, double T, std::int64_t n,
    std::int64_t n_steps, std::uint64_t seed, int workers = 0);

} // namespace ruinlab::mc
