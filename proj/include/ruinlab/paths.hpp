#pragma once

#include "ruinlab/model.hpp"
#include "ruinlab/rng.hpp"

#include <cstdint>
#include <vector>

namespace ruinlab::paths {

// Discretized path on the uniform grid t_k = k * horizon / n_steps, values[0] = 0.
// Drift is applied at construction (the simulators produce W(t) = B(t) - c t).
struct PathGrid {
    double horizon;
    int n_steps;
    std::vector<double> values;  // length n_steps + 1

    double dt() const { return horizon / n_steps; }
};

struct PathPair {
    PathGrid w1;
    PathGrid w2;
    double rho;
};

// Exact Gaussian increments on the grid; deterministic for fixed
// (seed, path_index). n_steps must be a power of two >= 2.
PathGrid simulate_single(double c, double horizon, int n_steps, std::uint64_t seed,
                         std::uint64_t path_index = 0);

// Correlated pair: W1 = B1 - c1 t, W2 = rho B1 + sqrt(1-rho^2) B2 - c2 t.
PathPair simulate_pair(double rho, double c1, double c2, double horizon, int n_steps,
                       std::uint64_t seed, std::uint64_t path_index = 0);

// Left-endpoint Riemann occupation time above `level`:
// dt * #{k < n_steps : values[k] > level}. This convention is shared by every
// estimator and oracle in the project so discretization bias cancels in ratios.
double sojourn_time(const PathGrid& path, double level);

// Number of left-endpoint samples that must exceed a level for the discrete
// sojourn to exceed budget s: floor(s/dt) + 1.
std::int64_t quantile_rank(double s, double dt);

// Generalized inverse of sojourn_time: the level at which the discrete
// sojourn first drops to <= s, i.e. the (floor(s/dt)+1)-th largest left-endpoint
// value. s = 0 returns the grid supremum. Requires 0 <= s < horizon.
double level_quantile(const PathGrid& path, double s);

struct RuinFlags {
    bool ruin1;
    bool ruin2;
    bool soj1_ok;
    bool soj2_ok;
};

// Grid crossing indicators for barriers (u, a*u) and strict sojourn
// exceedances of the budgets H_i(u) = s_i / u^2. Both indicators are evaluated
// on the left-endpoint set, so with zero budgets soj_ok and ruin coincide
// exactly.
RuinFlags ruin_indicators(const PathPair& pair, double u, double a,
                          const model::SojournBudget& budget);

// Debug dump: header {horizon, n_steps, count} then count * (n_steps+1)
// little-endian 64-bit floats.
void dump_paths(const std::vector<PathGrid>& paths, const std::string& file);

} // namespace ruinlab::paths
