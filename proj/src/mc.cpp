#include "ruinlab/mc.hpp"

#include "ruinlab/parallel.hpp"
#include "ruinlab/paths.hpp"
#include "ruinlab/quadform.hpp"
#include "ruinlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ruinlab::mc {

namespace {

constexpr std::int64_t kBatch = 2048;

struct LevelCounters {
    std::int64_t n_pi = 0, n_s = 0, n_ruin1 = 0, n_ruin2 = 0, n_simul = 0;
    // weighted sums for tilted runs
    double w_pi = 0, w_s = 0, w_pi2 = 0, w_s2 = 0, w_cross = 0;
    // bridge-corrected crossing probabilities (opt-in)
    double b1 = 0, b2 = 0, bj = 0;
};

struct SweepAcc {
    std::vector<LevelCounters> lv;
    std::int64_t n = 0;
    double w_sum = 0, w_sum2 = 0;
};

struct SweepConfig {
    model::ModelParams params;
    std::vector<SweepRow> rows;
    std::int64_t n = 0;
    std::int64_t n_steps = 0;
    std::uint64_t seed = 0;
    int workers = 0;
    double tilt1 = 0.0;  // drift added to B1
    double tilt2 = 0.0;  // drift added to B2
    bool bridge = false;
};

std::vector<SweepAcc> run_sweep(const SweepConfig& cfg) {
    const auto& params = cfg.params;
    const std::int64_t m = cfg.n_steps;
    const double dt = 1.0 / static_cast<double>(m);
    const double sdt = std::sqrt(dt);
    const double rho = params.rho;
    const double rq = std::sqrt(1.0 - rho * rho);
    const std::size_t R = cfg.rows.size();
    const bool tilted = cfg.tilt1 != 0.0 || cfg.tilt2 != 0.0;

    std::vector<double> lvl1(R), lvl2(R);
    std::vector<std::int64_t> r1(R), r2(R);
    for (std::size_t j = 0; j < R; ++j) {
        lvl1[j] = cfg.rows[j].u;
        lvl2[j] = params.a * cfg.rows[j].u;
        r1[j] = paths::quantile_rank(cfg.rows[j].h1, dt);
        r2[j] = paths::quantile_rank(cfg.rows[j].h2, dt);
    }

    auto body = [&](std::int64_t, std::int64_t i0, std::int64_t i1, SweepAcc& acc) {
        acc.lv.assign(R, LevelCounters{});
        acc.n = i1 - i0;
        std::vector<double> z(2 * m);
        std::vector<std::int64_t> c1(R), c2(R), csim(R);
        const double drift1 = (cfg.tilt1 - params.c1) * dt;
        const double drift2 = (rho * cfg.tilt1 + rq * cfg.tilt2 - params.c2) * dt;
        std::vector<double> nox1(R), nox2(R);
        for (std::int64_t i = i0; i < i1; ++i) {
            const rng::Stream st = rng::make_stream(cfg.seed, static_cast<std::uint64_t>(i));
            rng::fill_normals(st, 0, z.data(), 2 * m);
            std::fill(c1.begin(), c1.end(), 0);
            std::fill(c2.begin(), c2.end(), 0);
            std::fill(csim.begin(), csim.end(), 0);
            if (cfg.bridge) {
                std::fill(nox1.begin(), nox1.end(), 1.0);
                std::fill(nox2.begin(), nox2.end(), 1.0);
            }
            double w1 = 0.0, w2 = 0.0, b1end = 0.0, b2end = 0.0;
            // left-endpoint counters over k = 0..m-1; v[0] = 0 never exceeds
            // a positive barrier, so start counting after the first increment
            for (std::int64_t k = 0; k < m; ++k) {
                const double d1 = z[2 * k] * sdt;
                const double d2 = z[2 * k + 1] * sdt;
                const double p1 = w1, p2 = w2;
                b1end += d1;
                b2end += d2;
                w1 += d1 + drift1;
                w2 += rho * d1 + rq * d2 + drift2;
                if (k + 1 < m) {
                    for (std::size_t j = 0; j < R; ++j) {
                        const bool x1 = w1 > lvl1[j];
                        const bool x2 = w2 > lvl2[j];
                        c1[j] += x1;
                        c2[j] += x2;
                        csim[j] += x1 & x2;
                    }
                }
                if (cfg.bridge) {
                    // P(bridge over [t_k, t_{k+1}] crosses u | endpoints below)
                    // = exp(-2 (u-a)(u-b)/dt); skip where it underflows
                    for (std::size_t j = 0; j < R; ++j) {
                        if (p1 > lvl1[j] || w1 > lvl1[j]) {
                            nox1[j] = 0.0;
                        } else {
                            const double e = -2.0 * (lvl1[j] - p1) * (lvl1[j] - w1) / dt;
                            if (e > -40.0) nox1[j] *= 1.0 - std::exp(e);
                        }
                        if (p2 > lvl2[j] || w2 > lvl2[j]) {
                            nox2[j] = 0.0;
                        } else {
                            const double e = -2.0 * (lvl2[j] - p2) * (lvl2[j] - w2) / dt;
                            if (e > -40.0) nox2[j] *= 1.0 - std::exp(e);
                        }
                    }
                }
            }
            double w = 1.0;
            if (tilted) {
                b1end += cfg.tilt1;  // simulated endpoints include the tilt
                b2end += cfg.tilt2;
                w = std::exp(-cfg.tilt1 * b1end + 0.5 * cfg.tilt1 * cfg.tilt1 -
                             cfg.tilt2 * b2end + 0.5 * cfg.tilt2 * cfg.tilt2);
            }
            acc.w_sum += w;
            acc.w_sum2 += w * w;
            for (std::size_t j = 0; j < R; ++j) {
                const bool ruin1 = c1[j] > 0, ruin2 = c2[j] > 0;
                const bool pi = ruin1 && ruin2;
                const bool s = c1[j] >= r1[j] && c2[j] >= r2[j];
                auto& L = acc.lv[j];
                L.n_ruin1 += ruin1;
                L.n_ruin2 += ruin2;
                L.n_pi += pi;
                L.n_s += s;
                L.n_simul += csim[j] > 0;
                if (tilted) {
                    L.w_pi += pi ? w : 0.0;
                    L.w_s += s ? w : 0.0;
                    L.w_pi2 += pi ? w * w : 0.0;
                    L.w_s2 += s ? w * w : 0.0;
                    L.w_cross += s ? w * w : 0.0;  // s implies pi
                } else {
                    L.w_pi += pi;
                    L.w_s += s;
                    L.w_pi2 += pi;
                    L.w_s2 += s;
                    L.w_cross += s;
                }
                if (cfg.bridge) {
                    const double cr1 = 1.0 - nox1[j];
                    const double cr2 = 1.0 - nox2[j];
                    L.b1 += w * cr1;
                    L.b2 += w * cr2;
                    L.bj += w * cr1 * cr2;
                }
            }
        }
    };
    return parallel::parallel_batches<SweepAcc>(cfg.n, kBatch, cfg.workers, body);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<ProbeResult> reduce_sweep(const SweepConfig& cfg,
                                      const std::vector<SweepAcc>& accs) {
    const std::size_t R = cfg.rows.size();
    std::vector<ProbeResult> out(R);
    std::int64_t N = 0;
    double wsum = 0, wsum2 = 0;
    for (const auto& a : accs) {
        N += a.n;
        wsum += a.w_sum;
        wsum2 += a.w_sum2;
    }
    const double ess = wsum2 > 0 ? wsum * wsum / wsum2 : 0.0;
    for (std::size_t j = 0; j < R; ++j) {
        LevelCounters t;
        for (const auto& a : accs) {
            const auto& L = a.lv[j];
            t.n_pi += L.n_pi;
            t.n_s += L.n_s;
            t.n_ruin1 += L.n_ruin1;
            t.n_ruin2 += L.n_ruin2;
            t.n_simul += L.n_simul;
            t.w_pi += L.w_pi;
            t.w_s += L.w_s;
            t.w_pi2 += L.w_pi2;
            t.w_s2 += L.w_s2;
            t.w_cross += L.w_cross;
            t.b1 += L.b1;
            t.b2 += L.b2;
            t.bj += L.bj;
        }
        ProbeResult& pr = out[j];
        pr.n_pi = t.n_pi;
        pr.n_s = t.n_s;
        pr.n_ruin1 = t.n_ruin1;
        pr.n_ruin2 = t.n_ruin2;
        pr.n_simul = t.n_simul;
        pr.ess = ess;
        if (cfg.bridge) {
            pr.bridge1 = t.b1 / N;
            pr.bridge2 = t.b2 / N;
            pr.bridge_joint = t.bj / N;
        }

        const std::string base =
            "ruinlab.v1|mc|rho=" + fmt17(cfg.params.rho) + "|a=" + fmt17(cfg.params.a) +
            "|c1=" + fmt17(cfg.params.c1) + "|c2=" + fmt17(cfg.params.c2) +
            "|u=" + fmt17(cfg.rows[j].u) + "|h1=" + fmt17(cfg.rows[j].h1) +
            "|h2=" + fmt17(cfg.rows[j].h2) + "|steps=" + std::to_string(cfg.n_steps) +
            "|n=" + std::to_string(cfg.n) + "|seed=" + std::to_string(cfg.seed) +
            "|t1=" + fmt17(cfg.tilt1) + "|t2=" + fmt17(cfg.tilt2);
        const std::uint64_t hash = constants::fnv1a(base);

        auto mk = [&](double est, double se) {
            constants::EstimatorResult r;
            r.estimate = est;
            r.std_error = se;
            r.n = N;
            r.seed = cfg.seed;
            r.config_hash = hash;
            r.horizon = 1.0;
            r.dt = 1.0 / cfg.n_steps;
            return r;
        };

        // unbiased means of weighted indicators (weights are 1 when untilted)
        const double pi = t.w_pi / N;
        const double s = t.w_s / N;
        const double v_pi = std::max(0.0, (t.w_pi2 - N * pi * pi) / (N - 1.0)) / N;
        const double v_s = std::max(0.0, (t.w_s2 - N * s * s) / (N - 1.0)) / N;
        pr.pi_hat = mk(pi, std::sqrt(v_pi));
        pr.s_hat = mk(s, std::sqrt(v_s));

        if (t.n_pi > 0 && pi > 0.0) {
            const double r = s / pi;
            double se;
            if (cfg.tilt1 == 0.0 && cfg.tilt2 == 0.0) {
                // binomial ratio conditional on the pi count
                se = std::sqrt(std::max(0.0, r * (1.0 - r) / t.n_pi));
            } else {
                // delta method on the weighted pair; cov uses s subset-of pi
                const double c_sp = (t.w_cross - N * s * pi) / (N - 1.0) / N;
                const double var =
                    (v_s + r * r * v_pi - 2.0 * r * c_sp) / (pi * pi);
                se = std::sqrt(std::max(0.0, var));
            }
            pr.ratio = mk(r, se);
            pr.ratio_defined = true;
        } else {
            pr.ratio = mk(NAN, NAN);
            pr.ratio_defined = false;
            pr.warnings.push_back(
                "no joint ruin events; raise n or lower u to estimate the ratio");
        }
        if (cfg.tilt1 != 0.0 || cfg.tilt2 != 0.0) {
            if (ess < 100.0)
                pr.warnings.push_back("effective sample size below 100; tilt too aggressive");
        }
    }
    return out;
}

void check_common(const model::ModelParams& params, std::int64_t n, std::int64_t n_steps) {
    params.validate();
    if (n < 1) throw std::invalid_argument("mc: n must be positive");
    if (n_steps < 2) throw std::invalid_argument("mc: n_steps must be >= 2");
}

} // namespace

std::vector<ProbeResult> multi_level_sweep(const model::ModelParams& params,
                                           const std::vector<SweepRow>& rows,
                                           std::int64_t n, std::int64_t n_steps,
                                           std::uint64_t seed, int workers) {
    check_common(params, n, n_steps);
    if (rows.empty()) throw std::invalid_argument("multi_level_sweep: no rows");
    for (const auto& r : rows)
        if (!(r.u > 0.0) || !(r.h1 >= 0.0) || !(r.h2 >= 0.0))
            throw std::invalid_argument("multi_level_sweep: bad row");
    SweepConfig cfg{params, rows, n, n_steps, seed, workers, 0.0, 0.0};
    auto out = reduce_sweep(cfg, run_sweep(cfg));
    // paired-resolution probe: rerun a subsample at twice the resolution and
    // report the shift as the discretization bias proxy
    SweepConfig probe = cfg;
    probe.n_steps = 2 * n_steps;
    probe.n = std::max<std::int64_t>(n / 4, std::min<std::int64_t>(n, 10000));
    const auto fine = reduce_sweep(probe, run_sweep(probe));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        out[j].pi_hat.truncation_shift =
            std::fabs(fine[j].pi_hat.estimate - out[j].pi_hat.estimate);
        out[j].s_hat.truncation_shift =
            std::fabs(fine[j].s_hat.estimate - out[j].s_hat.estimate);
        if (out[j].ratio_defined && fine[j].ratio_defined)
            out[j].ratio.truncation_shift =
                std::fabs(fine[j].ratio.estimate - out[j].ratio.estimate);
    }
    return out;
}

ProbeResult estimate_probabilities(const model::ModelParams& params, double u,
                                   const model::SojournBudget& budget, std::int64_t n,
                                   std::int64_t n_steps, std::uint64_t seed, int workers) {
    if (n < 10000)
        throw std::invalid_argument("estimate_probabilities: n must be >= 1e4");
    budget.validate();
    if (!budget.u || *budget.u != u)
        throw std::invalid_argument("estimate_probabilities: budget.u must equal u");
    return multi_level_sweep(params, {{u, budget.h1(), budget.h2()}}, n, n_steps, seed,
                             workers)[0];
}

ProbeResult estimate_probabilities_bridge(const model::ModelParams& params, double u,
                                          const model::SojournBudget& budget,
                                          std::int64_t n, std::int64_t n_steps,
                                          std::uint64_t seed, int workers) {
    check_common(params, n, n_steps);
    budget.validate();
    if (!budget.u || *budget.u != u)
        throw std::invalid_argument("estimate_probabilities_bridge: budget.u must equal u");
    SweepConfig cfg{params, {{u, budget.h1(), budget.h2()}}, n, n_steps, seed, workers,
                    0.0, 0.0, true};
    return reduce_sweep(cfg, run_sweep(cfg))[0];
}

ProbeResult tilted_estimate(const model::ModelParams& params, double u,
                            const model::SojournBudget& budget, std::int64_t n,
                            std::int64_t n_steps, std::uint64_t seed, int workers) {
    check_common(params, n, n_steps);
    if (n < 10000) throw std::invalid_argument("tilted_estimate: n must be >= 1e4");
    budget.validate();
    if (!budget.u || *budget.u != u)
        throw std::invalid_argument("tilted_estimate: budget.u must equal u");
    const auto gm = quadform::q_star_global(params, u);
    const double s_star = gm.minimizers.back()[0];
    const double t_star = gm.minimizers.back()[1];
    const double rq = std::sqrt(1.0 - params.rho * params.rho);
    const double tilt1 = (u + params.c1 * s_star) / s_star;
    const double tilt2 =
        (params.a * u + params.c2 * t_star - params.rho * tilt1 * t_star) / (rq * t_star);
    SweepConfig cfg{params, {{u, budget.h1(), budget.h2()}}, n, n_steps, seed, workers,
                    tilt1, tilt2};
    auto out = reduce_sweep(cfg, run_sweep(cfg))[0];
    SweepConfig probe = cfg;
    probe.n_steps = 2 * n_steps;
    probe.n = std::max<std::int64_t>(n / 4, std::min<std::int64_t>(n, 10000));
    const auto fine = reduce_sweep(probe, run_sweep(probe))[0];
    out.pi_hat.truncation_shift = std::fabs(fine.pi_hat.estimate - out.pi_hat.estimate);
    out.s_hat.truncation_shift = std::fabs(fine.s_hat.estimate - out.s_hat.estimate);
    if (out.ratio_defined && fine.ratio_defined)
        out.ratio.truncation_shift = std::fabs(fine.ratio.estimate - out.ratio.estimate);
    return out;
}

ConvergeTable converge_table(const model::ModelParams& params,
                             const model::SojournBudget& budget,
                             const std::vector<double>& u_list, std::int64_t n,
                             std::int64_t n_steps, std::uint64_t seed,
                             asymptotics::ConstantStore& store, int workers) {
    check_common(params, n, n_steps);
    budget.validate();
    if (u_list.empty()) throw std::invalid_argument("converge_table: empty u list");
    for (std::size_t i = 1; i < u_list.size(); ++i)
        if (!(u_list[i] > u_list[i - 1]))
            throw std::invalid_argument("converge_table: u_list must be increasing");

    std::vector<SweepRow> rows;
    for (double u : u_list) rows.push_back({u, budget.s1 / (u * u), budget.s2 / (u * u)});
    auto probes = multi_level_sweep(params, rows, n, n_steps, seed, workers);

    ConvergeTable table;
    if (params.a <= params.rho) {
        auto lr = asymptotics::limit_theorem21(budget.s1, asymptotics::Theorem21Mode::Oracle,
                                               store);
        table.limit = std::move(lr);
    } else {
        table.limit = asymptotics::limit_theorem22(params, budget, store);
    }
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        ConvergeRow row;
        row.u = u_list[i];
        row.probe = std::move(probes[i]);
        row.limit = table.limit.value;
        row.gap = row.probe.ratio_defined
                      ? std::fabs(row.probe.ratio.estimate - table.limit.value)
                      : NAN;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<constants::EstimatorResult> one_dim_ruin_mc(
    const std::vector<std::pair<double, double>>& cu_pairs, double T, std::int64_t n,
    std::int64_t n_steps, std::uint64_t seed, int workers) {
    if (cu_pairs.empty()) throw std::invalid_argument("one_dim_ruin_mc: no pairs");
    if (!(T > 0.0)) throw std::invalid_argument("one_dim_ruin_mc: T must be > 0");
    if (n < 1 || n_steps < 2) throw std::invalid_argument("one_dim_ruin_mc: bad sizes");

    // distinct drifts share one Brownian sweep
    std::vector<double> drifts;
    for (const auto& cu : cu_pairs)
        if (std::find(drifts.begin(), drifts.end(), cu.first) == drifts.end())
            drifts.push_back(cu.first);
    const std::size_t D = drifts.size(), P = cu_pairs.size();

    struct Acc {
        std::vector<std::int64_t> hits;
        std::int64_t n = 0;
    };
    const std::int64_t m = n_steps;
    const double dt = T / static_cast<double>(m);
    const double sdt = std::sqrt(dt);

    auto accs = parallel::parallel_batches<Acc>(
        n, kBatch, workers, [&](std::int64_t, std::int64_t i0, std::int64_t i1, Acc& acc) {
            acc.hits.assign(P, 0);
            acc.n = i1 - i0;
            std::vector<double> z(m + (m & 1));
            std::vector<double> sup(D);
            for (std::int64_t i = i0; i < i1; ++i) {
                rng::fill_normals(rng::make_stream(seed, static_cast<std::uint64_t>(i)), 0,
                                  z.data(), m + (m & 1));
                std::fill(sup.begin(), sup.end(), 0.0);
                double b = 0.0;
                for (std::int64_t k = 0; k + 1 < m; ++k) {
                    b += z[k] * sdt;
                    const double t = (k + 1) * dt;
                    for (std::size_t d = 0; d < D; ++d)
                        sup[d] = std::max(sup[d], b - drifts[d] * t);
                }
                for (std::size_t p = 0; p < P; ++p) {
                    const std::size_t d = static_cast<std::size_t>(
                        std::find(drifts.begin(), drifts.end(), cu_pairs[p].first) -
                        drifts.begin());
                    acc.hits[p] += sup[d] > cu_pairs[p].second;
                }
            }
        });

    std::vector<constants::EstimatorResult> out(P);
    std::int64_t N = 0;
    std::vector<std::int64_t> hits(P, 0);
    for (const auto& a : accs) {
        N += a.n;
        for (std::size_t p = 0; p < P; ++p) hits[p] += a.hits[p];
    }
    for (std::size_t p = 0; p < P; ++p) {
        const double est = static_cast<double>(hits[p]) / N;
        constants::EstimatorResult& r = out[p];
        r.estimate = est;
        r.std_error = std::sqrt(std::max(0.0, est * (1.0 - est) / N));
        r.n = N;
        r.seed = seed;
        r.horizon = T;
        r.dt = dt;
        r.config_hash = constants::fnv1a("ruinlab.v1|mc1d|c=" + fmt17(cu_pairs[p].first) +
                                         "|u=" + fmt17(cu_pairs[p].second) + "|T=" +
                                         fmt17(T) + "|steps=" + std::to_string(n_steps) +
                                         "|n=" + std::to_string(n) +
                                         "|seed=" + std::to_string(seed));
    }
    return out;
}

} // namespace ruinlab::mc
