#include "ruinlab/io_json.hpp"

#include <cmath>

namespace ruinlab {

json to_json(const constants::EstimatorResult& r) {
    json j{{"estimate", r.estimate},
           {"stderr", r.std_error},
           {"n", r.n},
           {"seed", r.seed},
           {"config_hash", r.config_hash},
           {"horizon", r.horizon},
           {"dt", r.dt},
           {"clamped", r.clamped},
           {"truncation_shift", r.truncation_shift},
           {"cached", r.cached}};
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

constants::EstimatorResult estimator_from_json(const json& j) {
    constants::EstimatorResult r;
    r.estimate = j.at("estimate").get<double>();
    r.std_error = j.at("stderr").get<double>();
    r.n = j.at("n").get<std::int64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::uint64_t>();
    r.horizon = j.value("horizon", 0.0);
    r.dt = j.value("dt", 0.0);
    r.clamped = j.value("clamped", std::int64_t{0});
    r.truncation_shift = j.value("truncation_shift", 0.0);
    r.cached = j.value("cached", false);
    if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
    return r;
}

json to_json(const constants::MultiEstimate& m) {
    json results = json::array();
    for (const auto& r : m.results) results.push_back(to_json(r));
    return json{{"results", results}, {"cov", m.cov}};
}

constants::MultiEstimate multi_from_json(const json& j) {
    constants::MultiEstimate m;
    for (const auto& rj : j.at("results")) m.results.push_back(estimator_from_json(rj));
    m.cov = j.at("cov").get<std::vector<std::vector<double>>>();
    return m;
}

json to_json(const constants::HEstimate& h) {
    json pd = json::array();
    for (const auto& r : h.per_delta) pd.push_back(to_json(r));
    return json{{"fit", to_json(h.fit)}, {"per_delta", pd}};
}

constants::HEstimate h_from_json(const json& j) {
    constants::HEstimate h;
    h.fit = estimator_from_json(j.at("fit"));
    for (const auto& rj : j.at("per_delta")) h.per_delta.push_back(estimator_from_json(rj));
    return h;
}

json to_json(const model::Regime& regime, const model::ModelParams& params) {
    return json{{"rho", params.rho},
                {"a", params.a},
                {"c1", params.c1},
                {"c2", params.c2},
                {"regime", model::regime_name(regime.kind)},
                {"A_a", regime.boundary},
                {"t_star", regime.t_star},
                {"minimizers", regime.minimizers}};
}

json to_json(const constants::ConstantSpec& spec) {
    json j{{"kind", spec.kind == constants::ConstantKind::P   ? "P"
                    : spec.kind == constants::ConstantKind::H ? "H"
                                                              : "R"}};
    if (spec.kind == constants::ConstantKind::R) {
        j["rho"] = spec.rho;
        j["a"] = spec.a;
        j["lambda1"] = spec.lam1();
        j["lambda2"] = spec.lam2();
        j["s1"] = spec.s1;
        j["s2"] = spec.s2;
    } else {
        j["w1"] = spec.w1;
        j["w2"] = spec.w2;
        j["s"] = spec.s1;
    }
    return j;
}

json to_json(const asymptotics::LimitResult& r) {
    json used = json::array();
    for (const auto& cu : r.constants_used)
        used.push_back(json{{"role", cu.role},
                            {"spec", to_json(cu.spec)},
                            {"result", to_json(cu.result)}});
    json j{{"regime", model::regime_name(r.regime.kind)},
           {"t_star", r.regime.t_star},
           {"limit", r.value},
           {"stderr", r.std_error},
           {"constants_used", used}};
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

json to_json(const mc::ProbeResult& p) {
    json j{{"pi_hat", to_json(p.pi_hat)},
           {"s_hat", to_json(p.s_hat)},
           {"ratio_defined", p.ratio_defined},
           {"counts",
            {{"pi", p.n_pi},
             {"s", p.n_s},
             {"ruin1", p.n_ruin1},
             {"ruin2", p.n_ruin2},
             {"simultaneous", p.n_simul}}},
           {"ess", p.ess}};
    if (p.ratio_defined) j["ratio"] = to_json(p.ratio);
    if (!std::isnan(p.bridge1))
        j["bridge"] = {{"ruin1", p.bridge1}, {"ruin2", p.bridge2},
                       {"joint_indep_approx", p.bridge_joint}};
    if (!p.warnings.empty()) j["warnings"] = p.warnings;
    return j;
}

json to_json(const mc::ConvergeTable& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json rj{{"u", row.u},
                {"probe", to_json(row.probe)},
                {"limit", row.limit}};
        if (row.probe.ratio_defined) rj["gap"] = row.gap;
        rows.push_back(rj);
    }
    return json{{"rows", rows}, {"limit", to_json(t.limit)}};
}

} // namespace ruinlab
