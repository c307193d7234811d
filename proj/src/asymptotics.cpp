#include "ruinlab/asymptotics.hpp"

#include "ruinlab/exact.hpp"
#include "ruinlab/gauss.hpp"
#include "ruinlab/io_json.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ruinlab::asymptotics {

namespace {

std::string set_key(const std::string& kind, double w1, double w2,
                    const std::vector<std::pair<double, double>>& budgets) {
    std::ostringstream os;
    os.precision(17);
    os << kind << '|' << w1 << '|' << w2;
    for (const auto& b : budgets) os << '|' << b.first << ',' << b.second;
    return os.str();
}

// derived seed per (kind, weights): budgets within a set share paths, distinct
// weight combinations are decorrelated
std::uint64_t derived_seed(std::uint64_t base, const std::string& kind, double w1,
                           double w2) {
    std::ostringstream os;
    os.precision(17);
    os << kind << '|' << w1 << '|' << w2;
    return base ^ constants::fnv1a(os.str());
}

} // namespace

std::string ConstantStore::full_key(const std::string& set_key) const {
    std::ostringstream os;
    os.precision(17);
    os << set_key << "|n=" << settings_.n << "|nh=" << settings_.n_h
       << "|h=" << settings_.horizon << "|steps=" << settings_.n_steps << "|deltas=";
    for (double d : settings_.deltas) os << d << ',';
    os << "|spu=" << settings_.n_steps_per_unit << "|seed=" << settings_.seed;
    return os.str();
}

const constants::MultiEstimate& ConstantStore::p_set(double w1, double w2,
                                                     const std::vector<double>& budgets) {
    std::vector<std::pair<double, double>> b2;
    for (double s : budgets) b2.emplace_back(s, 0.0);
    const std::string key = set_key("P", w1, w2, b2);
    auto it = p_memo_.find(key);
    if (it == p_memo_.end()) {
        const std::uint64_t dkey = constants::fnv1a(full_key(key));
        if (disk_) {
            if (auto hit = disk_->lookup(dkey)) {
                auto est = multi_from_json(json::parse(*hit));
                for (auto& r : est.results) r.cached = true;
                return p_memo_.emplace(key, std::move(est)).first->second;
            }
        }
        auto est = constants::estimate_P_multi(
            w1, w2, budgets, settings_.horizon, settings_.n_steps, settings_.n,
            derived_seed(settings_.seed, "P", w1, w2), settings_.workers);
        if (disk_) disk_->store(dkey, to_json(est).dump());
        it = p_memo_.emplace(key, std::move(est)).first;
    }
    return it->second;
}

const std::vector<constants::HEstimate>& ConstantStore::h_set(
    double w1, double w2, const std::vector<double>& budgets) {
    std::vector<std::pair<double, double>> b2;
    for (double s : budgets) b2.emplace_back(s, 0.0);
    const std::string key = set_key("H", w1, w2, b2);
    auto it = h_memo_.find(key);
    if (it == h_memo_.end()) {
        const std::uint64_t dkey = constants::fnv1a(full_key(key));
        if (disk_) {
            if (auto hit = disk_->lookup(dkey)) {
                std::vector<constants::HEstimate> est;
                for (const auto& hj : json::parse(*hit)) {
                    auto he = h_from_json(hj);
                    he.fit.cached = true;
                    for (auto& r : he.per_delta) r.cached = true;
                    est.push_back(std::move(he));
                }
                return h_memo_.emplace(key, std::move(est)).first->second;
            }
        }
        auto est = constants::estimate_H_multi(
            w1, w2, budgets, settings_.deltas, settings_.n_steps_per_unit,
            settings_.n_h > 0 ? settings_.n_h : settings_.n,
            derived_seed(settings_.seed, "H", w1, w2), settings_.workers);
        if (disk_) {
            json arr = json::array();
            for (const auto& he : est) arr.push_back(to_json(he));
            disk_->store(dkey, arr.dump());
        }
        it = h_memo_.emplace(key, std::move(est)).first;
    }
    return it->second;
}

const constants::MultiEstimate& ConstantStore::r_set(
    double rho, double a, const std::vector<std::pair<double, double>>& budgets) {
    const std::string key = set_key("R", rho, a, budgets);
    auto it = r_memo_.find(key);
    if (it == r_memo_.end()) {
        const std::uint64_t dkey = constants::fnv1a(full_key(key));
        if (disk_) {
            if (auto hit = disk_->lookup(dkey)) {
                auto est = multi_from_json(json::parse(*hit));
                for (auto& r : est.results) r.cached = true;
                return r_memo_.emplace(key, std::move(est)).first->second;
            }
        }
        auto est = constants::estimate_R_multi(
            rho, a, budgets, settings_.horizon, settings_.n_steps, settings_.n,
            derived_seed(settings_.seed, "R", rho, a), settings_.workers);
        if (disk_) disk_->store(dkey, to_json(est).dump());
        it = r_memo_.emplace(key, std::move(est)).first;
    }
    return it->second;
}

constants::EstimatorResult ConstantStore::p_hat(double w1, double w2, double s) {
    return p_set(w1, w2, {s}).results[0];
}

constants::EstimatorResult ConstantStore::h_hat(double w1, double w2, double s) {
    return h_set(w1, w2, {s})[0].fit;
}

constants::EstimatorResult ConstantStore::r_hat(double rho, double a, double s1,
                                                double s2) {
    return r_set(rho, a, {{s1, s2}}).results[0];
}

LimitResult limit_theorem21(double s1, Theorem21Mode mode, ConstantStore& store) {
    if (!(s1 >= 0.0)) throw std::invalid_argument("limit_theorem21: s1 must be >= 0");
    LimitResult out;
    out.regime.kind = model::RegimeKind::DimReduction;
    out.regime.boundary = NAN;
    out.regime.t_star = 1.0;
    if (mode == Theorem21Mode::Printed) {
        out.value = exact::printed_sojourn_constant(s1) / 2.0;
        return out;
    }
    const auto& pe = store.p_set(1.0, 1.0, {s1, 0.0});
    const double num = pe.results[0].estimate, den = pe.results[1].estimate;
    out.value = num / den;
    const double vn = pe.cov[0][0], vd = pe.cov[1][1], cnd = pe.cov[0][1];
    out.std_error = std::sqrt(std::max(
        0.0, vn / (den * den) + num * num * vd / (den * den * den * den) -
                 2.0 * num * cnd / (den * den * den)));
    constants::ConstantSpec sp{constants::ConstantKind::P, 1.0, 1.0, s1};
    out.constants_used.push_back({"numerator", sp, pe.results[0]});
    sp.s1 = 0.0;
    out.constants_used.push_back({"denominator", sp, pe.results[1]});
    return out;
}

double case3_c31(double c1, double c2) {
    if (-0.5 * c1 < c2) {
        const double z = 0.5 * c1 + c2;
        return std::exp(-2.0 * z * z / 3.0) * gauss::std_normal_cdf(c2 + 0.5 * c1);
    }
    return 1.0;
}

double case3_c32(double c1, double c2) {
    if (-0.5 * c2 < c1) {
        const double z = 0.5 * c2 + c1;
        return std::exp(-2.0 * z * z / 3.0) * gauss::std_normal_cdf(c1 + 0.5 * c2);
    }
    return 1.0;
}

double case3_c3(double c1, double c2) {
    const double e1 = case3_c31(c1, c2);
    const double e2 = case3_c32(c1, c2);
    if (c2 > std::max(-0.5 * c1, -2.0 * c1)) return e1 + e2;
    if (-0.5 * c1 < c2 && c2 <= -2.0 * c1) return e1 + 0.5;
    if (-2.0 * c1 < c2 && c2 <= -0.5 * c1) return 0.5 + e2;
    return 1.0;
}

LimitResult limit_theorem22(const model::ModelParams& params,
                            const model::SojournBudget& budget, ConstantStore& store,
                            std::optional<model::RegimeKind> force_kind,
                            double classify_tol) {
    params.validate();
    budget.validate();
    model::Regime regime = model::classify(params, classify_tol);
    if (force_kind) {
        regime.kind = *force_kind;
        regime.t_star = model::t_star(params, regime);
    }
    if (regime.kind == model::RegimeKind::DimReduction)
        throw std::invalid_argument(
            "limit_theorem22: a <= rho is the dimension-reduction regime; "
            "use limit_theorem21");

    const double rho = params.rho, a = params.a;
    const double s1 = budget.s1, s2 = budget.s2;
    const auto lt = constants::lambda_table(regime, params);
    LimitResult out;
    out.regime = regime;

    auto use_p = [&](const char* role, double w, double s,
                     const constants::EstimatorResult& r) {
        constants::ConstantSpec sp{constants::ConstantKind::P, w, w, s};
        out.constants_used.push_back({role, sp, r});
    };
    auto use_h = [&](const char* role, double w, double s,
                     const constants::EstimatorResult& r) {
        constants::ConstantSpec sp{constants::ConstantKind::H, w, 2.0 * w, s};
        out.constants_used.push_back({role, sp, r});
    };

    switch (regime.kind) {
        case model::RegimeKind::Supercritical: {
            const auto& re = store.r_set(rho, a, {{s1, s2}, {0.0, 0.0}});
            const double num = re.results[0].estimate, den = re.results[1].estimate;
            out.value = num / den;
            const double vn = re.cov[0][0], vd = re.cov[1][1], cnd = re.cov[0][1];
            out.std_error = std::sqrt(std::max(
                0.0, vn / (den * den) + num * num * vd / (den * den * den * den) -
                         2.0 * num * cnd / (den * den * den)));
            constants::ConstantSpec sp{constants::ConstantKind::R};
            sp.rho = rho;
            sp.a = a;
            sp.s1 = s1;
            sp.s2 = s2;
            out.constants_used.push_back({"numerator", sp, re.results[0]});
            sp.s1 = sp.s2 = 0.0;
            out.constants_used.push_back({"denominator", sp, re.results[1]});
            break;
        }
        case model::RegimeKind::CriticalALt1: {
            const double w = lt.lambda1;  // (1 - a rho)/(1 - rho^2)
            const auto pe = store.p_hat(w, w, s1);
            const auto he = store.h_hat(a, 2.0 * a, s2);
            const double coef = (1.0 - a * rho) / (2.0 * a * (1.0 - rho * rho));
            out.value = coef * pe.estimate * he.estimate;
            out.std_error =
                std::fabs(out.value) *
                std::sqrt(std::pow(pe.std_error / pe.estimate, 2) +
                          std::pow(he.std_error / he.estimate, 2));
            use_p("P", w, s1, pe);
            use_h("H", a, s2, he);
            break;
        }
        case model::RegimeKind::CriticalAEq1: {
            // C31 = P(2,2,s1) H(1,2,s2), C32 = P(2,2,s2) H(1,2,s1)
            const auto& pe = store.p_set(2.0, 2.0, {s1, s2});
            const auto& hset = store.h_set(1.0, 2.0, {s1, s2});
            const double p1 = pe.results[0].estimate, p2 = pe.results[1].estimate;
            const double h1 = hset[0].fit.estimate, h2 = hset[1].fit.estimate;
            const double cp1 = case3_c31(params.c1, params.c2);
            const double cp2 = case3_c32(params.c1, params.c2);
            const double c3 = case3_c3(params.c1, params.c2);
            out.value = (p1 * h2 * cp1 + p2 * h1 * cp2) / c3;
            // delta method; P and H runs are decorrelated by construction
            const double dP1 = h2 * cp1 / c3, dP2 = h1 * cp2 / c3;
            const double dH1 = p2 * cp2 / c3, dH2 = p1 * cp1 / c3;
            const double vP = dP1 * dP1 * pe.cov[0][0] + dP2 * dP2 * pe.cov[1][1] +
                              2.0 * dP1 * dP2 * pe.cov[0][1];
            const double vH1 = hset[0].fit.std_error * hset[0].fit.std_error;
            const double vH2 = hset[1].fit.std_error * hset[1].fit.std_error;
            out.std_error = std::sqrt(std::max(0.0, vP + dH1 * dH1 * vH1 + dH2 * dH2 * vH2));
            use_p("P(s1)", 2.0, s1, pe.results[0]);
            use_p("P(s2)", 2.0, s2, pe.results[1]);
            use_h("H(s1)", 1.0, s1, hset[0].fit);
            use_h("H(s2)", 1.0, s2, hset[1].fit);
            break;
        }
        case model::RegimeKind::SubcriticalALt1: {
            if (!(rho < 0.0))
                throw std::logic_error("limit_theorem22: case (iv) requires rho < 0");
            const double w = lt.lambda1;  // (1 - a rho)/(1 - rho^2 t*)
            const double hw = lt.drift2;  // a / t*
            const auto pe = store.p_hat(w, w, s1);
            const auto he = store.h_hat(hw, 2.0 * hw, s2);
            out.value = -pe.estimate * he.estimate / (2.0 * rho);
            out.std_error =
                std::fabs(out.value) *
                std::sqrt(std::pow(pe.std_error / pe.estimate, 2) +
                          std::pow(he.std_error / he.estimate, 2));
            use_p("P", w, s1, pe);
            use_h("H", hw, s2, he);
            break;
        }
        case model::RegimeKind::SubcriticalAEq1: {
            if (!(rho < 0.0))
                throw std::logic_error("limit_theorem22: case (v) requires rho < 0");
            const double ts = regime.t_star;
            const double w = (1.0 - rho) / (1.0 - rho * rho * ts);
            const double hw = 1.0 / ts;
            const double sp = params.c1 <= params.c2 ? s1 : s2;
            const double sh = params.c1 <= params.c2 ? s2 : s1;
            const auto pe = store.p_hat(w, w, sp);
            const auto he = store.h_hat(hw, 2.0 * hw, sh);
            out.value = -pe.estimate * he.estimate / (2.0 * rho);
            out.std_error =
                std::fabs(out.value) *
                std::sqrt(std::pow(pe.std_error / pe.estimate, 2) +
                          std::pow(he.std_error / he.estimate, 2));
            use_p("P", w, sp, pe);
            use_h("H", hw, sh, he);
            break;
        }
        default:
            throw std::logic_error("limit_theorem22: unhandled regime");
    }

    if (!(out.value > 0.0))
        out.warnings.push_back("limit evaluated non-positive; estimates unreliable");
    for (const auto& cu : out.constants_used)
        for (const auto& w : cu.result.warnings)
            out.warnings.push_back(cu.role + ": " + w);
    return out;
}

DiscrepancyReport discrepancy_report(const std::vector<double>& s_grid,
                                     ConstantStore& store) {
    DiscrepancyReport rep;
    if (s_grid.empty()) return rep;
    const auto& pe = store.p_set(1.0, 1.0, s_grid);
    double prev_printed = -INFINITY;
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        DiscrepancyRow row;
        row.s = s_grid[i];
        row.printed = exact::printed_sojourn_constant(s_grid[i]);
        row.oracle = pe.results[i].estimate;  // w2 = 1, so P equals E[e^{xi_S}]
        row.oracle_se = pe.results[i].std_error;
        row.ratio = row.printed / row.oracle;
        row.monotone_violation = i > 0 && row.printed > prev_printed;
        rep.any_violation = rep.any_violation || row.monotone_violation;
        prev_printed = row.printed;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace ruinlab::asymptotics
