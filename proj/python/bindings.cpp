#include "ruinlab/asymptotics.hpp"
#include "ruinlab/constants.hpp"
#include "ruinlab/exact.hpp"
#include "ruinlab/gauss.hpp"
#include "ruinlab/mc.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/paths.hpp"
#include "ruinlab/quadform.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace ruinlab;

namespace {

py::dict estimator_dict(const constants::EstimatorResult& r) {
    py::dict d;
    d["estimate"] = r.estimate;
    d["stderr"] = r.std_error;
    d["n"] = r.n;
    d["seed"] = r.seed;
    d["config_hash"] = r.config_hash;
    d["horizon"] = r.horizon;
    d["dt"] = r.dt;
    d["clamped"] = r.clamped;
    d["warnings"] = r.warnings;
    return d;
}

py::dict regime_dict(const model::Regime& regime, const model::ModelParams& p) {
    py::dict d;
    d["rho"] = p.rho;
    d["a"] = p.a;
    d["c1"] = p.c1;
    d["c2"] = p.c2;
    d["regime"] = std::string(model::regime_name(regime.kind));
    d["A_a"] = regime.boundary;
    d["t_star"] = regime.t_star;
    d["minimizers"] = regime.minimizers;
    return d;
}

py::dict limit_dict(const asymptotics::LimitResult& lr) {
    py::dict d;
    d["regime"] = std::string(model::regime_name(lr.regime.kind));
    d["t_star"] = lr.regime.t_star;
    d["limit"] = lr.value;
    d["stderr"] = lr.std_error;
    py::list used;
    for (const auto& cu : lr.constants_used) {
        py::dict u;
        u["role"] = cu.role;
        u["result"] = estimator_dict(cu.result);
        used.append(u);
    }
    d["constants_used"] = used;
    d["warnings"] = lr.warnings;
    return d;
}

py::dict probe_dict(const mc::ProbeResult& pr) {
    py::dict d;
    d["pi_hat"] = estimator_dict(pr.pi_hat);
    d["s_hat"] = estimator_dict(pr.s_hat);
    d["ratio_defined"] = pr.ratio_defined;
    if (pr.ratio_defined) d["ratio"] = estimator_dict(pr.ratio);
    d["counts"] = py::dict(py::arg("pi") = pr.n_pi, py::arg("s") = pr.n_s,
                           py::arg("ruin1") = pr.n_ruin1, py::arg("ruin2") = pr.n_ruin2,
                           py::arg("simultaneous") = pr.n_simul);
    d["ess"] = pr.ess;
    d["warnings"] = pr.warnings;
    return d;
}

} // namespace

PYBIND11_MODULE(_ruinlab, m) {
    m.doc() = "Two-dimensional Brownian risk model: exact ruin formulas, "
              "sojourn constants and cumulative Parisian ruin asymptotics";

    m.def("std_normal_cdf", &gauss::std_normal_cdf, py::arg("x"));
    m.def("std_normal_survival", &gauss::std_normal_survival, py::arg("x"));
    m.def("one_dim_ruin", &exact::one_dim_ruin, py::arg("c"), py::arg("u"), py::arg("T"),
          "P(sup_[0,T] (B(t) - c t) > u)");
    m.def("printed_sojourn_constant", &exact::printed_sojourn_constant, py::arg("s"));

    m.def("regime_boundary", &model::regime_boundary, py::arg("a"));
    m.def(
        "classify",
        [](double rho, double a, double c1, double c2, double tol) {
            model::ModelParams p{rho, a, c1, c2};
            return regime_dict(model::classify(p, tol), p);
        },
        py::arg("rho"), py::arg("a"), py::arg("c1") = 0.0, py::arg("c2") = 0.0,
        py::arg("tol") = 1e-12);
    m.def(
        "rescale_horizon",
        [](double c, double u, double T) { return model::rescale_horizon(c, u, T); },
        py::arg("c"), py::arg("u"), py::arg("T"),
        "self-similarity reduction to horizon 1: returns (c*sqrt(T), u/sqrt(T))");

    m.def(
        "q_star_global",
        [](double rho, double a, double c1, double c2, std::optional<double> u,
           int grid_n) {
            model::ModelParams p{rho, a, c1, c2};
            const auto gm = quadform::q_star_global(p, u, grid_n);
            py::dict d;
            d["q_star"] = gm.value;
            d["minimizers"] = gm.minimizers;
            d["log_rate"] = gm.value / 2.0;
            return d;
        },
        py::arg("rho"), py::arg("a"), py::arg("c1") = 0.0, py::arg("c2") = 0.0,
        py::arg("u") = std::nullopt, py::arg("grid_n") = 256);
    m.def(
        "log_rate",
        [](double rho, double a) { return quadform::log_rate({rho, a}); },
        py::arg("rho"), py::arg("a"));

    m.def(
        "simulate_pair",
        [](double rho, double c1, double c2, double horizon, int n_steps,
           std::uint64_t seed, std::uint64_t path_index) {
            const auto pr =
                paths::simulate_pair(rho, c1, c2, horizon, n_steps, seed, path_index);
            return py::make_tuple(pr.w1.values, pr.w2.values);
        },
        py::arg("rho"), py::arg("c1"), py::arg("c2"), py::arg("horizon"),
        py::arg("n_steps"), py::arg("seed"), py::arg("path_index") = 0);
    m.def(
        "sojourn_time",
        [](const std::vector<double>& values, double horizon, double level) {
            paths::PathGrid p{horizon, static_cast<int>(values.size() - 1), values};
            return paths::sojourn_time(p, level);
        },
        py::arg("values"), py::arg("horizon"), py::arg("level"));
    m.def(
        "level_quantile",
        [](const std::vector<double>& values, double horizon, double s) {
            paths::PathGrid p{horizon, static_cast<int>(values.size() - 1), values};
            return paths::level_quantile(p, s);
        },
        py::arg("values"), py::arg("horizon"), py::arg("s"));

    m.def(
        "estimate_p",
        [](double w1, double w2, double s, double horizon, std::int64_t n_steps,
           std::int64_t n, std::uint64_t seed, int workers) {
            constants::ConstantSpec sp{constants::ConstantKind::P, w1, w2, s};
            return estimator_dict(constants::estimate_P(sp, horizon, n_steps, n, seed,
                                                        workers));
        },
        py::arg("w1"), py::arg("w2"), py::arg("s") = 0.0, py::arg("horizon") = 0.0,
        py::arg("n_steps") = 0, py::arg("n") = 100000, py::arg("seed") = 1,
        py::arg("workers") = 0);
    m.def(
        "estimate_h",
        [](double w1, double w2, double s, const std::vector<double>& deltas,
           std::int64_t spu, std::int64_t n, std::uint64_t seed, int workers) {
            constants::ConstantSpec sp{constants::ConstantKind::H, w1, w2, s};
            const auto he = constants::estimate_H(sp, deltas, spu, n, seed, workers);
            py::dict d = estimator_dict(he.fit);
            py::list pd;
            for (const auto& r : he.per_delta) pd.append(estimator_dict(r));
            d["per_delta"] = pd;
            return d;
        },
        py::arg("w1"), py::arg("w2"), py::arg("s") = 0.0,
        py::arg("deltas") = std::vector<double>{4.0, 8.0, 16.0}, py::arg("spu") = 0,
        py::arg("n") = 60000, py::arg("seed") = 1, py::arg("workers") = 0);
    m.def(
        "estimate_r",
        [](double rho, double a, double s1, double s2, double horizon,
           std::int64_t n_steps, std::int64_t n, std::uint64_t seed, int workers) {
            constants::ConstantSpec sp{constants::ConstantKind::R};
            sp.rho = rho;
            sp.a = a;
            sp.s1 = s1;
            sp.s2 = s2;
            return estimator_dict(constants::estimate_R(sp, horizon, n_steps, n, seed,
                                                        workers));
        },
        py::arg("rho"), py::arg("a"), py::arg("s1") = 0.0, py::arg("s2") = 0.0,
        py::arg("horizon") = 0.0, py::arg("n_steps") = 0, py::arg("n") = 100000,
        py::arg("seed") = 1, py::arg("workers") = 0);
    m.def(
        "lambda_table",
        [](double rho, double a) {
            model::ModelParams p{rho, a};
            const auto lt = constants::lambda_table(model::classify(p), p);
            return py::make_tuple(lt.lambda1, lt.lambda2, lt.drift1, lt.drift2);
        },
        py::arg("rho"), py::arg("a"));

    m.def(
        "limit_theorem21",
        [](double s1, const std::string& mode, std::int64_t n, std::uint64_t seed,
           int workers) {
            asymptotics::McSettings st;
            st.n = n;
            st.seed = seed;
            st.workers = workers;
            asymptotics::ConstantStore store(st);
            const auto lr = asymptotics::limit_theorem21(
                s1,
                mode == "printed" ? asymptotics::Theorem21Mode::Printed
                                  : asymptotics::Theorem21Mode::Oracle,
                store);
            return limit_dict(lr);
        },
        py::arg("s1"), py::arg("mode") = "oracle", py::arg("n") = 50000,
        py::arg("seed") = 1, py::arg("workers") = 0);
    m.def(
        "limit_theorem22",
        [](double rho, double a, double c1, double c2, double s1, double s2,
           std::int64_t n, std::uint64_t seed, int workers, int force_case) {
            model::ModelParams p{rho, a, c1, c2};
            asymptotics::McSettings st;
            st.n = n;
            st.seed = seed;
            st.workers = workers;
            asymptotics::ConstantStore store(st);
            std::optional<model::RegimeKind> fk;
            if (force_case == 2) fk = model::RegimeKind::CriticalALt1;
            if (force_case == 3) fk = model::RegimeKind::CriticalAEq1;
            if (force_case == 4) fk = model::RegimeKind::SubcriticalALt1;
            if (force_case == 5) fk = model::RegimeKind::SubcriticalAEq1;
            if (force_case == 1) fk = model::RegimeKind::Supercritical;
            const auto lr = asymptotics::limit_theorem22(p, {s1, s2, std::nullopt}, store,
                                                         fk);
            return limit_dict(lr);
        },
        py::arg("rho"), py::arg("a"), py::arg("c1") = 0.0, py::arg("c2") = 0.0,
        py::arg("s1") = 0.0, py::arg("s2") = 0.0, py::arg("n") = 50000,
        py::arg("seed") = 1, py::arg("workers") = 0, py::arg("force_case") = 0);

    m.def(
        "mc_ratio",
        [](double rho, double a, double c1, double c2, double u, double s1, double s2,
           std::int64_t n, std::int64_t n_steps, std::uint64_t seed, int workers,
           bool tilted) {
            model::ModelParams p{rho, a, c1, c2};
            model::SojournBudget b{s1, s2, u};
            const auto pr = tilted
                                ? mc::tilted_estimate(p, u, b, n, n_steps, seed, workers)
                                : mc::estimate_probabilities(p, u, b, n, n_steps, seed,
                                                             workers);
            return probe_dict(pr);
        },
        py::arg("rho"), py::arg("a"), py::arg("c1"), py::arg("c2"), py::arg("u"),
        py::arg("s1") = 0.0, py::arg("s2") = 0.0, py::arg("n") = 100000,
        py::arg("n_steps") = 4096, py::arg("seed") = 1, py::arg("workers") = 0,
        py::arg("tilted") = false);

    m.attr("__version__") = "0.1.0";
}
