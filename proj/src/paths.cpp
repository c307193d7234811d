#include "ruinlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ruinlab::paths {

namespace {

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_sim_args(double horizon, int n_steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be > 0");
    if (!power_of_two(n_steps))
        throw std::invalid_argument("simulate: n_steps must be a power of two >= 2");
}

} // namespace

PathGrid simulate_single(double c, double horizon, int n_steps, std::uint64_t seed,
                         std::uint64_t path_index) {
    check_sim_args(horizon, n_steps);
    const double dt = horizon / n_steps;
    const double sdt = std::sqrt(dt);
    std::vector<double> z(n_steps);
    rng::fill_normals(rng::make_stream(seed, path_index), 0, z.data(), n_steps);
    PathGrid p{horizon, n_steps, std::vector<double>(n_steps + 1)};
    p.values[0] = 0.0;
    double w = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        w += z[k] * sdt - c * dt;
        p.values[k + 1] = w;
    }
    return p;
}

PathPair simulate_pair(double rho, double c1, double c2, double horizon, int n_steps,
                       std::uint64_t seed, std::uint64_t path_index) {
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("simulate_pair: |rho| must be < 1");
    check_sim_args(horizon, n_steps);
    const double dt = horizon / n_steps;
    const double sdt = std::sqrt(dt);
    const double rq = std::sqrt(1.0 - rho * rho);
    std::vector<double> z(2 * n_steps);
    rng::fill_normals(rng::make_stream(seed, path_index), 0, z.data(), 2 * n_steps);
    PathPair pair{PathGrid{horizon, n_steps, std::vector<double>(n_steps + 1)},
                  PathGrid{horizon, n_steps, std::vector<double>(n_steps + 1)}, rho};
    pair.w1.values[0] = 0.0;
    pair.w2.values[0] = 0.0;
    double w1 = 0.0, w2 = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        const double d1 = z[2 * k] * sdt;
        const double d2 = z[2 * k + 1] * sdt;
        w1 += d1 - c1 * dt;
        w2 += rho * d1 + rq * d2 - c2 * dt;
        pair.w1.values[k + 1] = w1;
        pair.w2.values[k + 1] = w2;
    }
    return pair;
}

double sojourn_time(const PathGrid& path, double level) {
    std::int64_t count = 0;
    for (int k = 0; k < path.n_steps; ++k) count += path.values[k] > level;
    return count * path.dt();
}

std::int64_t quantile_rank(double s, double dt) {
    return static_cast<std::int64_t>(std::floor(s / dt)) + 1;
}

double level_quantile(const PathGrid& path, double s) {
    if (!(s >= 0.0) || s >= path.horizon)
        throw std::invalid_argument("level_quantile: need 0 <= s < horizon");
    const std::int64_t r = quantile_rank(s, path.dt());
    std::vector<double> v(path.values.begin(), path.values.begin() + path.n_steps);
    std::nth_element(v.begin(), v.begin() + (r - 1), v.end(), std::greater<double>());
    return v[r - 1];
}

RuinFlags ruin_indicators(const PathPair& pair, double u, double a,
                          const model::SojournBudget& budget) {
    budget.validate();
    if (!budget.u || *budget.u != u)
        throw std::invalid_argument("ruin_indicators: budget.u must equal u");
    const double dt = pair.w1.dt();
    const double lvl2 = a * u;
    const std::int64_t r1 = quantile_rank(budget.h1(), dt);
    const std::int64_t r2 = quantile_rank(budget.h2(), dt);
    std::int64_t c1 = 0, c2 = 0;
    for (int k = 0; k < pair.w1.n_steps; ++k) {
        c1 += pair.w1.values[k] > u;
        c2 += pair.w2.values[k] > lvl2;
    }
    return RuinFlags{c1 > 0, c2 > 0, c1 >= r1, c2 >= r2};
}

void dump_paths(const std::vector<PathGrid>& paths, const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "wb");
    if (!f) throw std::runtime_error("dump_paths: cannot open " + file);
    const double horizon = paths.empty() ? 0.0 : paths.front().horizon;
    const double n_steps = paths.empty() ? 0.0 : paths.front().n_steps;
    const double count = static_cast<double>(paths.size());
    const double header[3] = {horizon, n_steps, count};
    std::fwrite(header, sizeof(double), 3, f);
    for (const auto& p : paths)
        std::fwrite(p.values.data(), sizeof(double), p.values.size(), f);
    std::fclose(f);
}

} // namespace ruinlab::paths
