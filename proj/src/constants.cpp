#include "ruinlab/constants.hpp"

#include "ruinlab/gauss.hpp"
#include "ruinlab/parallel.hpp"
#include "ruinlab/paths.hpp"
#include "ruinlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace ruinlab::constants {

namespace {

// fixed-by-n batch size: worker-count independent, and small runs still
// produce enough batches for the batch-mean variance estimate
inline std::int64_t batch_size_for(std::int64_t n) {
    return std::clamp<std::int64_t>(n / 32, 64, 2048);
}
constexpr double kClampExp = 700.0;

struct BatchAcc {
    std::vector<double> sums;
    std::int64_t n = 0;
    std::int64_t clamped = 0;
};

struct Moments {
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;  // of the means
    std::int64_t n = 0;
    std::int64_t clamped = 0;
};

Moments reduce_batches(const std::vector<BatchAcc>& accs, std::size_t dim) {
    Moments m;
    m.mean.assign(dim, 0.0);
    m.cov.assign(dim, std::vector<double>(dim, 0.0));
    std::vector<double> total(dim, 0.0);
    std::int64_t N = 0;
    for (const auto& a : accs) {
        for (std::size_t p = 0; p < dim; ++p) total[p] += a.sums[p];
        N += a.n;
        m.clamped += a.clamped;
    }
    if (N == 0) throw std::invalid_argument("estimator: n must be positive");
    for (std::size_t p = 0; p < dim; ++p) m.mean[p] = total[p] / N;
    const std::int64_t B = static_cast<std::int64_t>(accs.size());
    if (B > 1) {
        const double corr = static_cast<double>(B) / (B - 1);
        for (const auto& a : accs) {
            for (std::size_t p = 0; p < dim; ++p) {
                const double dp = a.sums[p] - a.n * m.mean[p];
                for (std::size_t q = p; q < dim; ++q) {
                    const double dq = a.sums[q] - a.n * m.mean[q];
                    m.cov[p][q] += corr * dp * dq / (static_cast<double>(N) * N);
                }
            }
        }
        for (std::size_t p = 0; p < dim; ++p)
            for (std::size_t q = 0; q < p; ++q) m.cov[p][q] = m.cov[q][p];
    }
    m.n = N;
    return m;
}

// Single-coordinate sweep of the drifted path B - w1 t under a stratified
// hitting-tilt mixture: lane j drifts upward (+w1) until the path first
// reaches level L_j of a uniform level grid, then downward (-w1). With tilt
// magnitude 2 w1 the Girsanov quadratic term cancels and the lane density
// relative to the nominal measure is exp(2 w1 * path(tau_j ^ T)), evaluable
// for every lane from the path's first-hit values. This keeps the weighted
// terms e^{w2 xi_S} * LR bounded up to the level-grid top, which a plain or
// endpoint-tilted sampler cannot do for w2 = 2 w1 (excursions that return to
// the endpoint dominate the sup integrand there).
struct ScalarSweep {
    double w1, w2;
    double dt;
    double level_top;                        // level-grid coverage
    std::vector<std::int64_t> prefix_steps;  // ascending, last = total steps
    std::vector<std::int64_t> ranks;         // per budget
    std::int64_t n;
    std::uint64_t seed;
    int workers;

    Moments run() const {
        const double theta = 2.0 * w1;
        const std::int64_t m = prefix_steps.back();
        const std::size_t J = prefix_steps.size(), L = ranks.size();
        const double sdt = std::sqrt(dt);
        const int lanes = static_cast<int>(
            std::clamp(std::ceil(3.0 * w1 * level_top), 16.0, 96.0));
        std::vector<double> lgrid(lanes);
        for (int j = 0; j < lanes; ++j) lgrid[j] = level_top * j / (lanes - 1);

        auto body = [&](std::int64_t, std::int64_t i0, std::int64_t i1, BatchAcc& acc) {
            acc.sums.assign(J * L, 0.0);
            acc.n = i1 - i0;
            const std::int64_t len = i1 - i0;
            std::vector<double> z(m + (m & 1));
            std::vector<double> v(m + 1);
            std::vector<double> scratch(m);
            std::vector<double> prefix_max(J);
            std::vector<double> hit_val(lanes);
            std::vector<std::int64_t> hit_step(lanes);
            for (std::int64_t i = i0; i < i1; ++i) {
                const rng::Stream st = rng::make_stream(seed, static_cast<std::uint64_t>(i));
                // stratified lane selection: exactly uniform over lanes, with
                // batch-position strata (worker-count independent)
                const double u_sel = rng::uniform_at(st, rng::kAuxBase);
                const int lane = std::min<int>(
                    lanes - 1,
                    static_cast<int>(((i - i0) + u_sel) * lanes / len));
                const double level = lgrid[lane];
                rng::fill_normals(st, 0, z.data(), m + (m & 1));

                const double up = theta - w1;  // +w1 until the hit
                double w = 0.0, runmax = 0.0;
                v[0] = 0.0;
                bool hit = level <= 0.0;
                int reach = 0;
                hit_val[0] = 0.0;
                hit_step[0] = 0;
                reach = 1;  // lane 0 (level 0) is hit at time 0
                for (std::int64_t k = 0; k < m; ++k) {
                    w += z[k] * sdt + (hit ? -w1 : up) * dt;
                    v[k + 1] = w;
                    if (w > runmax) {
                        runmax = w;
                        while (reach < lanes && runmax >= lgrid[reach]) {
                            hit_val[reach] = w;
                            hit_step[reach] = k + 1;
                            ++reach;
                        }
                        if (!hit && runmax >= level) hit = true;
                    }
                }
                for (int j = reach; j < lanes; ++j) hit_step[j] = m + 1;
                {
                    double cur = -INFINITY;
                    std::size_t j = 0;
                    for (std::int64_t k = 0; k < m && j < J; ++k) {
                        cur = std::max(cur, v[k]);
                        while (j < J && prefix_steps[j] == k + 1) prefix_max[j++] = cur;
                    }
                }
                for (std::size_t j = 0; j < J; ++j) {
                    const std::int64_t mj = prefix_steps[j];
                    // log of (1/lanes) sum_j exp(theta * path(tau_j ^ window))
                    double emax = -INFINITY;
                    for (int q = 0; q < lanes; ++q) {
                        const double pv = hit_step[q] <= mj ? hit_val[q] : v[mj];
                        scratch[q] = theta * pv;
                        emax = std::max(emax, scratch[q]);
                    }
                    double acc_e = 0.0;
                    for (int q = 0; q < lanes; ++q) acc_e += std::exp(scratch[q] - emax);
                    const double lw = std::log(static_cast<double>(lanes)) - emax -
                                      std::log(acc_e);
                    for (std::size_t l = 0; l < L; ++l) {
                        const std::int64_t r = ranks[l];
                        if (r > mj) continue;  // budget >= window, term is 0
                        double xi;
                        if (r == 1) {
                            xi = prefix_max[j];
                        } else {
                            std::copy(v.begin(), v.begin() + mj, scratch.begin());
                            std::nth_element(scratch.begin(), scratch.begin() + (r - 1),
                                             scratch.begin() + mj, std::greater<double>());
                            xi = scratch[r - 1];
                        }
                        double e = w2 * xi + lw;
                        if (e > kClampExp) {
                            e = kClampExp;
                            ++acc.clamped;
                        }
                        acc.sums[j * L + l] += std::exp(e);
                    }
                }
            }
        };
        const auto accs = parallel::parallel_batches<BatchAcc>(n, batch_size_for(n),
                                                               workers, body);
        return reduce_batches(accs, J * L);
    }
};

std::int64_t auto_steps(double horizon, double w_exp) {
    const double dt = 1.1e-4 / (w_exp * w_exp);
    auto s = static_cast<std::int64_t>(std::ceil(horizon / dt));
    s = std::max<std::int64_t>(s, 1000);
    return s + (s & 1);
}

EstimatorResult make_result(double estimate, double se, std::int64_t n, std::uint64_t seed,
                            std::uint64_t hash, double horizon, double dt,
                            std::int64_t clamped) {
    EstimatorResult r;
    r.estimate = estimate;
    r.std_error = se;
    r.n = n;
    r.seed = seed;
    r.config_hash = hash;
    r.horizon = horizon;
    r.dt = dt;
    r.clamped = clamped;
    if (clamped > 0)
        r.warnings.push_back("overflow clamp hit " + std::to_string(clamped) +
                             " times; estimate invalid");
    return r;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void ConstantSpec::validate() const {
    switch (kind) {
        case ConstantKind::P:
            if (!(w1 > 0.0) || !(w2 > 0.0))
                throw std::invalid_argument("ConstantSpec(P): weights must be positive");
            if (!(2.0 * w1 > w2))
                throw std::invalid_argument(
                    "ConstantSpec(P): requires 2*w1 > w2 (constant may be infinite)");
            if (!(s1 >= 0.0)) throw std::invalid_argument("ConstantSpec(P): budget < 0");
            break;
        case ConstantKind::H:
            if (!(w1 > 0.0)) throw std::invalid_argument("ConstantSpec(H): w1 must be > 0");
            if (std::fabs(w2 - 2.0 * w1) > 1e-9 * std::max(1.0, w1))
                throw std::invalid_argument("ConstantSpec(H): only w2 = 2*w1 is supported");
            if (!(s1 >= 0.0)) throw std::invalid_argument("ConstantSpec(H): budget < 0");
            break;
        case ConstantKind::R:
            if (!(std::fabs(rho) < 1.0))
                throw std::invalid_argument("ConstantSpec(R): |rho| must be < 1");
            if (!(a > std::max(0.0, rho)) || !(a <= 1.0))
                throw std::invalid_argument("ConstantSpec(R): requires a in (max(0,rho), 1]");
            if (!(s1 >= 0.0) || !(s2 >= 0.0))
                throw std::invalid_argument("ConstantSpec(R): budgets < 0");
            break;
    }
}

double ConstantSpec::lam1() const {
    if (lambda1 != 0.0) return lambda1;
    return (1.0 - a * rho) / (1.0 - rho * rho);
}

double ConstantSpec::lam2() const {
    if (lambda2 != 0.0) return lambda2;
    return (a - rho) / (1.0 - rho * rho);
}

std::string config_string(const ConstantSpec& spec, double horizon, std::int64_t n_steps,
                          std::int64_t n, std::uint64_t seed) {
    std::string kind = spec.kind == ConstantKind::P ? "P"
                       : spec.kind == ConstantKind::H ? "H" : "R";
    std::string s = "ruinlab.v1|" + kind + "|w1=" + fmt(spec.w1) + "|w2=" + fmt(spec.w2) +
                    "|s1=" + fmt(spec.s1) + "|s2=" + fmt(spec.s2) + "|rho=" + fmt(spec.rho) +
                    "|a=" + fmt(spec.a) + "|l1=" + fmt(spec.lam1()) +
                    "|l2=" + fmt(spec.lam2()) + "|h=" + fmt(horizon) +
                    "|steps=" + std::to_string(n_steps) + "|n=" + std::to_string(n) +
                    "|seed=" + std::to_string(seed);
    return s;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

MultiEstimate estimate_P_multi(double w1, double w2, const std::vector<double>& budgets,
                               double horizon, std::int64_t n_steps, std::int64_t n,
                               std::uint64_t seed, int workers) {
    ConstantSpec probe{ConstantKind::P, w1, w2, budgets.empty() ? 0.0 : budgets[0]};
    probe.validate();
    for (double s : budgets)
        if (!(s >= 0.0)) throw std::invalid_argument("estimate_P: budgets must be >= 0");
    if (budgets.empty()) throw std::invalid_argument("estimate_P: no budgets");
    if (n <= 0) throw std::invalid_argument("estimate_P: n must be positive");

    double h = horizon > 0.0 ? horizon : 10.0 / w1;
    std::int64_t steps = n_steps > 0 ? n_steps : auto_steps(h, w2);

    auto run = [&](double hh, std::int64_t ss, std::int64_t nn) {
        ScalarSweep sw;
        sw.w1 = w1;
        sw.w2 = w2;
        sw.dt = hh / ss;
        // contributions above x decay like e^{(w2-2w1)x}; cover until they
        // fall below e^{-12} (lanes beyond the hittable range still act as
        // valid up-drift components, so no horizon cap is needed)
        sw.level_top = std::min(12.0 / (2.0 * w1 - w2), 2.0 * w1 * hh);
        sw.prefix_steps = {ss};
        for (double s : budgets) sw.ranks.push_back(paths::quantile_rank(s, sw.dt));
        sw.n = nn;
        sw.seed = seed;
        sw.workers = workers;
        return sw.run();
    };

    constexpr int kMaxDoublings = 3;
    Moments full = run(h, steps, n);
    std::vector<double> shift(budgets.size(), 0.0);
    bool converged = false;
    std::string hwarn;
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt) {
        const std::int64_t n_conf = std::max<std::int64_t>(n / 4, std::min<std::int64_t>(n, 4096));
        Moments conf = run(2.0 * h, 2 * steps, n_conf);
        converged = true;
        for (std::size_t l = 0; l < budgets.size(); ++l) {
            shift[l] = std::fabs(conf.mean[l] - full.mean[l]);
            // 0.5 stderr of the accepted estimate as the target precision,
            // plus the confirmation run's own noise so that pure sampling
            // fluctuation does not masquerade as truncation error
            const double tol = 0.5 * std::sqrt(full.cov[l][l]) +
                               2.0 * std::sqrt(conf.cov[l][l]) + 1e-300;
            if (shift[l] >= tol) converged = false;
        }
        if (converged || attempt == kMaxDoublings) {
            if (!converged)
                hwarn = "horizon not converged after " + std::to_string(kMaxDoublings) +
                        " doublings (last h=" + fmt(h) + ")";
            break;
        }
        h *= 2.0;
        steps *= 2;
        full = run(h, steps, n);
    }

    MultiEstimate out;
    const double dt = h / steps;
    out.cov.assign(budgets.size(), std::vector<double>(budgets.size(), 0.0));
    for (std::size_t l = 0; l < budgets.size(); ++l) {
        ConstantSpec spec{ConstantKind::P, w1, w2, budgets[l]};
        const auto hash = fnv1a(config_string(spec, h, steps, n, seed));
        EstimatorResult r =
            make_result(full.mean[l] / w2, std::sqrt(full.cov[l][l]) / w2, full.n, seed,
                        hash, h, dt, full.clamped);
        r.truncation_shift = shift[l] / w2;
        if (!hwarn.empty()) r.warnings.push_back(hwarn);
        if (budgets[l] >= h) r.warnings.push_back("budget exceeds horizon; constant is 0");
        out.results.push_back(std::move(r));
        for (std::size_t q = 0; q < budgets.size(); ++q)
            out.cov[l][q] = full.cov[l][q] / (w2 * w2);
    }
    return out;
}

EstimatorResult estimate_P(const ConstantSpec& spec, double horizon, std::int64_t n_steps,
                           std::int64_t n, std::uint64_t seed, int workers) {
    spec.validate();
    if (spec.kind != ConstantKind::P) throw std::invalid_argument("estimate_P: wrong kind");
    return estimate_P_multi(spec.w1, spec.w2, {spec.s1}, horizon, n_steps, n, seed, workers)
        .results[0];
}

std::vector<HEstimate> estimate_H_multi(double w1, double w2,
                                        const std::vector<double>& budgets,
                                        const std::vector<double>& deltas,
                                        std::int64_t n_steps_per_unit, std::int64_t n,
                                        std::uint64_t seed, int workers) {
    ConstantSpec probe{ConstantKind::H, w1, w2, budgets.empty() ? 0.0 : budgets[0]};
    probe.validate();
    if (budgets.empty()) throw std::invalid_argument("estimate_H: no budgets");
    if (deltas.size() < 3)
        throw std::invalid_argument("estimate_H: need at least 3 window lengths");
    for (std::size_t j = 1; j < deltas.size(); ++j)
        if (!(deltas[j] > deltas[j - 1]))
            throw std::invalid_argument("estimate_H: deltas must be strictly increasing");
    if (!(deltas.front() > 0.0)) throw std::invalid_argument("estimate_H: deltas must be > 0");
    if (n <= 0) throw std::invalid_argument("estimate_H: n must be positive");

    const std::int64_t spu =
        n_steps_per_unit > 0
            ? n_steps_per_unit
            : std::max<std::int64_t>(1024, std::llround(4096.0 * w1 * w1));
    const double dt = 1.0 / static_cast<double>(spu);

    ScalarSweep sw;
    sw.w1 = w1;
    sw.w2 = w2;
    sw.dt = dt;
    // cover the Gaussian shoulder above w1 * Delta as well; it carries
    // O(sqrt(Delta)/Delta) of the windowed value
    sw.level_top = w1 * deltas.back() + 3.5 * std::sqrt(deltas.back());
    for (double d : deltas)
        sw.prefix_steps.push_back(static_cast<std::int64_t>(std::llround(d * spu)));
    for (double s : budgets) sw.ranks.push_back(paths::quantile_rank(s, dt));
    sw.n = n;
    sw.seed = seed;
    sw.workers = workers;
    const Moments mo = sw.run();

    const std::size_t J = deltas.size(), L = budgets.size();
    // least-squares design for g(D) = c + b / D
    std::vector<double> x(J);
    for (std::size_t j = 0; j < J; ++j) x[j] = 1.0 / (sw.prefix_steps[j] * dt);
    double sx = 0, sxx = 0;
    for (double xi : x) {
        sx += xi;
        sxx += xi * xi;
    }
    const double det = J * sxx - sx * sx;
    std::vector<double> wc(J), wb(J);  // weights of g_j in c and b
    for (std::size_t j = 0; j < J; ++j) {
        wc[j] = (sxx - sx * x[j]) / det;
        wb[j] = (J * x[j] - sx) / det;
    }

    std::vector<HEstimate> out(L);
    for (std::size_t l = 0; l < L; ++l) {
        HEstimate& he = out[l];
        std::vector<double> g(J), se2(J);
        for (std::size_t j = 0; j < J; ++j) {
            const double window = sw.prefix_steps[j] * dt;
            const double scale = 1.0 / (w2 * window);
            g[j] = mo.mean[j * L + l] * scale;
            se2[j] = mo.cov[j * L + l][j * L + l] * scale * scale;
            ConstantSpec spec{ConstantKind::H, w1, w2, budgets[l]};
            const auto hash = fnv1a(config_string(spec, window, sw.prefix_steps[j], n, seed));
            he.per_delta.push_back(make_result(g[j], std::sqrt(se2[j]), mo.n, seed, hash,
                                               window, dt, mo.clamped));
        }
        double c = 0, b = 0, var_c = 0;
        for (std::size_t j = 0; j < J; ++j) {
            c += wc[j] * g[j];
            b += wb[j] * g[j];
            for (std::size_t k = 0; k < J; ++k) {
                const double cjk = mo.cov[j * L + l][k * L + l] /
                                   (w2 * (sw.prefix_steps[j] * dt)) /
                                   (w2 * (sw.prefix_steps[k] * dt));
                var_c += wc[j] * wc[k] * cjk;
            }
        }
        double ssr = 0;
        for (std::size_t j = 0; j < J; ++j) {
            const double resid = g[j] - c - b * x[j];
            ssr += resid * resid;
        }
        double se_sum2 = 0;
        for (std::size_t j = 0; j < J; ++j) se_sum2 += se2[j];
        ConstantSpec spec{ConstantKind::H, w1, w2, budgets[l]};
        const auto hash = fnv1a(config_string(spec, deltas.back(), spu, n, seed) +
                                "|fit=" + std::to_string(J));
        he.fit = make_result(c, std::sqrt(var_c + ssr), mo.n, seed, hash, deltas.back(), dt,
                             mo.clamped);
        if (std::sqrt(ssr) > 5.0 * std::sqrt(se_sum2))
            he.fit.warnings.push_back("extrapolation residual exceeds 5x sampling error");
    }
    return out;
}

HEstimate estimate_H(const ConstantSpec& spec, const std::vector<double>& deltas,
                     std::int64_t n_steps_per_unit, std::int64_t n, std::uint64_t seed,
                     int workers) {
    spec.validate();
    if (spec.kind != ConstantKind::H) throw std::invalid_argument("estimate_H: wrong kind");
    return estimate_H_multi(spec.w1, spec.w2, {spec.s1}, deltas, n_steps_per_unit, n, seed,
                            workers)[0];
}

MultiEstimate estimate_R_multi(double rho, double a,
                               const std::vector<std::pair<double, double>>& budgets,
                               double horizon, std::int64_t n_steps, std::int64_t n,
                               std::uint64_t seed, int workers) {
    ConstantSpec probe{ConstantKind::R};
    probe.rho = rho;
    probe.a = a;
    probe.validate();
    if (budgets.empty()) throw std::invalid_argument("estimate_R: no budgets");
    if (n <= 0) throw std::invalid_argument("estimate_R: n must be positive");
    const double l1 = probe.lam1(), l2 = probe.lam2();

    double h = horizon > 0.0 ? horizon : 10.0 / std::min(1.0, a);
    std::int64_t steps =
        n_steps > 0 ? n_steps : auto_steps(h, std::max({l1 + l2, 1.0, a}));
    const double rq = std::sqrt(1.0 - rho * rho);
    const std::size_t L = budgets.size();

    auto run = [&](double hh, std::int64_t ss, std::int64_t nn) {
        const double dt = hh / ss;
        const double sdt = std::sqrt(dt);
        std::vector<std::int64_t> r1(L), r2(L);
        for (std::size_t l = 0; l < L; ++l) {
            r1[l] = paths::quantile_rank(budgets[l].first, dt);
            r2[l] = paths::quantile_rank(budgets[l].second, dt);
        }
        auto body = [&](std::int64_t, std::int64_t i0, std::int64_t i1, BatchAcc& acc) {
            acc.sums.assign(L, 0.0);
            acc.n = i1 - i0;
            std::vector<double> z(2 * ss), v1(ss + 1), v2(ss + 1), scratch(ss);
            for (std::int64_t i = i0; i < i1; ++i) {
                const rng::Stream st = rng::make_stream(seed, static_cast<std::uint64_t>(i));
                rng::fill_normals(st, 0, z.data(), 2 * ss);
                double w1v = 0.0, w2v = 0.0, m1 = -INFINITY, m2 = -INFINITY;
                v1[0] = v2[0] = 0.0;
                for (std::int64_t k = 0; k < ss; ++k) {
                    m1 = std::max(m1, v1[k]);
                    m2 = std::max(m2, v2[k]);
                    const double d1 = z[2 * k] * sdt;
                    const double d2 = z[2 * k + 1] * sdt;
                    w1v += d1 - dt;
                    w2v += rho * d1 + rq * d2 - a * dt;
                    v1[k + 1] = w1v;
                    v2[k + 1] = w2v;
                }
                auto quant = [&](const std::vector<double>& v, std::int64_t r,
                                 double vmax) {
                    if (r == 1) return vmax;
                    std::copy(v.begin(), v.begin() + ss, scratch.begin());
                    std::nth_element(scratch.begin(), scratch.begin() + (r - 1),
                                     scratch.begin() + ss, std::greater<double>());
                    return scratch[r - 1];
                };
                for (std::size_t l = 0; l < L; ++l) {
                    if (r1[l] > ss || r2[l] > ss) continue;
                    const double xi1 = quant(v1, r1[l], m1);
                    const double xi2 = quant(v2, r2[l], m2);
                    double e = l1 * xi1 + l2 * xi2;
                    if (e > kClampExp) {
                        e = kClampExp;
                        ++acc.clamped;
                    }
                    acc.sums[l] += std::exp(e);
                }
            }
        };
        const auto accs = parallel::parallel_batches<BatchAcc>(nn, batch_size_for(nn), workers, body);
        return reduce_batches(accs, L);
    };

    constexpr int kMaxDoublings = 3;
    Moments full = run(h, steps, n);
    std::vector<double> shift(L, 0.0);
    std::string hwarn;
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt) {
        const std::int64_t n_conf = std::max<std::int64_t>(n / 4, std::min<std::int64_t>(n, 4096));
        Moments conf = run(2.0 * h, 2 * steps, n_conf);
        bool converged = true;
        for (std::size_t l = 0; l < L; ++l) {
            shift[l] = std::fabs(conf.mean[l] - full.mean[l]);
            const double tol = 0.5 * std::sqrt(full.cov[l][l]) +
                               2.0 * std::sqrt(conf.cov[l][l]) + 1e-300;
            if (shift[l] >= tol) converged = false;
        }
        if (converged || attempt == kMaxDoublings) {
            if (!converged)
                hwarn = "horizon not converged after " + std::to_string(kMaxDoublings) +
                        " doublings (last h=" + fmt(h) + ")";
            break;
        }
        h *= 2.0;
        steps *= 2;
        full = run(h, steps, n);
    }

    MultiEstimate out;
    const double scale = 1.0 / (l1 * l2);
    out.cov.assign(L, std::vector<double>(L, 0.0));
    for (std::size_t l = 0; l < L; ++l) {
        ConstantSpec spec{ConstantKind::R};
        spec.rho = rho;
        spec.a = a;
        spec.s1 = budgets[l].first;
        spec.s2 = budgets[l].second;
        const auto hash = fnv1a(config_string(spec, h, steps, n, seed));
        EstimatorResult r = make_result(full.mean[l] * scale,
                                        std::sqrt(full.cov[l][l]) * scale, full.n, seed,
                                        hash, h, h / steps, full.clamped);
        r.truncation_shift = shift[l] * scale;
        if (!hwarn.empty()) r.warnings.push_back(hwarn);
        out.results.push_back(std::move(r));
        for (std::size_t q = 0; q < L; ++q) out.cov[l][q] = full.cov[l][q] * scale * scale;
    }
    return out;
}

EstimatorResult estimate_R(const ConstantSpec& spec, double horizon, std::int64_t n_steps,
                           std::int64_t n, std::uint64_t seed, int workers) {
    spec.validate();
    if (spec.kind != ConstantKind::R) throw std::invalid_argument("estimate_R: wrong kind");
    ConstantSpec s2 = spec;
    return estimate_R_multi(s2.rho, s2.a, {{s2.s1, s2.s2}}, horizon, n_steps, n, seed,
                            workers)
        .results[0];
}

LambdaTable lambda_table(const model::Regime& regime, const model::ModelParams& params) {
    params.validate();
    const double rho = params.rho, a = params.a, ts = regime.t_star;
    switch (regime.kind) {
        case model::RegimeKind::DimReduction:
        case model::RegimeKind::Supercritical:
        case model::RegimeKind::CriticalALt1:
        case model::RegimeKind::CriticalAEq1: {
            // equal-time table at t* = 1
            const double l1 = (1.0 - a * rho) / (ts * (1.0 - rho * rho));
            const double l2 = (a - rho) / (ts * (1.0 - rho * rho));
            return LambdaTable{l1, l2, 1.0, a};
        }
        case model::RegimeKind::SubcriticalALt1:
        case model::RegimeKind::SubcriticalAEq1: {
            // first coordinate pinned at 1, second spread around t* < 1
            const double l1 = (1.0 - a * rho) / (1.0 - rho * rho * ts);
            const double l2 = (a - rho * ts) / (ts - rho * rho * ts * ts);
            return LambdaTable{l1, l2, l1, a / ts};
        }
    }
    throw std::logic_error("lambda_table: unknown regime");
}

} // namespace ruinlab::constants
