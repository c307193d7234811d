#include "ruinlab/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ruinlab::quadform {

RateInput make_rate_input(const model::ModelParams& params, double s, double t,
                          std::optional<double> u) {
    params.validate();
    gauss::BivCovariance cov(s, t, params.rho);
    std::array<double, 2> a{1.0, params.a};
    if (u) {
        if (!(*u > 0.0)) throw std::invalid_argument("make_rate_input: u must be > 0");
        a[0] += params.c1 * s / *u;
        a[1] += params.c2 * t / *u;
    }
    return RateInput{cov, a};
}

QValue q_value(const RateInput& input) {
    const double det = input.sigma.det();
    if (!(det > 0.0)) throw std::invalid_argument("q_value: degenerate covariance");
    const double s = input.sigma.s, t = input.sigma.t;
    const double rm = input.sigma.rho * input.sigma.min_st();
    const double a1 = input.avec[0], a2 = input.avec[1];
    const double b1 = (t * a1 - rm * a2) / det;
    const double b2 = (-rm * a1 + s * a2) / det;
    return QValue{a1 * b1 + a2 * b2, {b1, b2}};
}

double q_star_point(const RateInput& input) {
    const double det = input.sigma.det();
    if (!(det > 0.0)) throw std::invalid_argument("q_star_point: degenerate covariance");
    const double s = input.sigma.s, t = input.sigma.t;
    const double rm = input.sigma.rho * input.sigma.min_st();
    const double a1 = input.avec[0], a2 = input.avec[1];

    double best = std::numeric_limits<double>::infinity();

    // both constraints active: x = a, optimal iff Sigma^{-1} a >= 0
    {
        const QValue qv = q_value(input);
        if (qv.b[0] >= 0.0 && qv.b[1] >= 0.0) best = std::min(best, qv.q);
    }
    // x1 = a1 active, x2 free: minimizer x2 = (rho m / s) x1, rate a1^2 / s
    {
        const double x2 = rm / s * a1;
        if (x2 >= a2) best = std::min(best, a1 * a1 / s);
    }
    // x2 = a2 active, x1 free: symmetric
    {
        const double x1 = rm / t * a2;
        if (x1 >= a1) best = std::min(best, a2 * a2 / t);
    }
    // both free: x = 0, feasible only for a <= 0
    if (a1 <= 0.0 && a2 <= 0.0) best = 0.0;

    if (!std::isfinite(best)) {
        // a >= 0 always admits the fully active candidate or a free one;
        // reaching here means b had a negative entry and neither relaxation
        // was feasible, which cannot happen for a nondegenerate 2x2 system
        throw std::logic_error("q_star_point: no feasible active set");
    }
    return best;
}

namespace {

double eval_qstar(const model::ModelParams& params, std::optional<double> u, double s,
                  double t) {
    return q_star_point(make_rate_input(params, s, t, u));
}

// golden-section minimization of f on [lo, hi], tolerance tol
template <typename F>
double golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.61803398874989484820458683436564;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    // ties move right so exact plateaus resolve to their upper corner
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

} // namespace

GlobalMin q_star_global(const model::ModelParams& params, std::optional<double> u,
                        int grid_n) {
    params.validate();
    if (grid_n < 64) throw std::invalid_argument("q_star_global: grid_n must be >= 64");
    const double delta = 1.0 / grid_n;

    // coarse grid on [delta,1]^2, lexicographic tie-break
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid_n; ++i) {
        const double s = static_cast<double>(i) / grid_n;
        for (int j = 1; j <= grid_n; ++j) {
            const double t = static_cast<double>(j) / grid_n;
            grid_min = std::min(grid_min, eval_qstar(params, u, s, t));
        }
    }

    // candidates near the grid minimum, refined by coordinate descent
    struct Cand { double s, t, v; };
    std::vector<Cand> cands;
    const double keep = grid_min + 1e-8 + 1e-12 * std::fabs(grid_min);
    for (int i = 1; i <= grid_n; ++i) {
        const double s = static_cast<double>(i) / grid_n;
        for (int j = 1; j <= grid_n; ++j) {
            const double t = static_cast<double>(j) / grid_n;
            const double v = eval_qstar(params, u, s, t);
            if (v <= keep) cands.push_back({s, t, v});
        }
    }

    for (auto& c : cands) {
        double s = c.s, t = c.t;
        for (int round = 0; round < 60; ++round) {
            const double s_prev = s, t_prev = t;
            const double w = std::max(1.5 * delta / (1 << std::min(round, 20)), 5e-11);
            s = golden_min([&](double x) { return eval_qstar(params, u, x, t); },
                           std::max(delta, s - w), std::min(1.0, s + w), 1e-11);
            t = golden_min([&](double x) { return eval_qstar(params, u, s, x); },
                           std::max(delta, t - w), std::min(1.0, t + w), 1e-11);
            if (std::fabs(s - s_prev) < 1e-10 && std::fabs(t - t_prev) < 1e-10 && round > 2)
                break;
        }
        c.s = s;
        c.t = t;
        c.v = eval_qstar(params, u, s, t);
    }

    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) vmin = std::min(vmin, c.v);

    std::vector<Cand> near;
    for (const auto& c : cands)
        if (c.v <= vmin + 1e-8 + 1e-12 * std::fabs(vmin)) near.push_back(c);
    std::sort(near.begin(), near.end(), [](const Cand& x, const Cand& y) {
        return x.s != y.s ? x.s < y.s : x.t < y.t;
    });

    // single-linkage clusters by proximity; one representative per cluster
    // (best value, ties to the lexicographically largest point, so exact
    // plateaus report their upper corner)
    const double merge_r = std::max(2.5 * delta, 1e-6);
    std::vector<int> cluster(near.size(), -1);
    int n_clusters = 0;
    for (std::size_t i = 0; i < near.size(); ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = n_clusters;
        // breadth-first over proximity
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < near.size(); ++j) {
                if (cluster[j] >= 0) continue;
                const double d = std::hypot(near[j].s - near[k].s, near[j].t - near[k].t);
                if (d <= merge_r) {
                    cluster[j] = n_clusters;
                    stack.push_back(j);
                }
            }
        }
        ++n_clusters;
    }

    GlobalMin out;
    out.value = vmin;
    for (int cl = 0; cl < n_clusters; ++cl) {
        int rep = -1;
        for (std::size_t i = 0; i < near.size(); ++i) {
            if (cluster[i] != cl) continue;
            if (rep < 0) { rep = static_cast<int>(i); continue; }
            const Cand& a = near[i];
            const Cand& b = near[rep];
            if (a.v < b.v - 1e-12 ||
                (std::fabs(a.v - b.v) <= 1e-12 && (a.s > b.s || (a.s == b.s && a.t > b.t))))
                rep = static_cast<int>(i);
        }
        out.minimizers.push_back({near[rep].s, near[rep].t});
    }
    std::sort(out.minimizers.begin(), out.minimizers.end());
    return out;
}

double log_rate(const model::ModelParams& params) {
    return q_star_global(params, std::nullopt).value / 2.0;
}

} // namespace ruinlab::quadform
