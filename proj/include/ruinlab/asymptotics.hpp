#pragma once

#include "ruinlab/cache.hpp"
#include "ruinlab/constants.hpp"
#include "ruinlab/model.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ruinlab::asymptotics {

// Monte Carlo configuration shared by every constant estimated for a limit
// evaluation. Zeros select the estimator defaults.
struct McSettings {
    std::int64_t n = 100000;
    std::int64_t n_h = 0;  // paths for H runs (0 = n)
    double horizon = 0.0;
    std::int64_t n_steps = 0;
    std::vector<double> deltas = {4.0, 8.0, 16.0};
    std::int64_t n_steps_per_unit = 0;
    std::uint64_t seed = 20250801;
    int workers = 0;
};

// Memoizing provider of constant estimates. Each distinct (kind, weights)
// combination draws from its own derived seed so that estimates entering a
// product are decorrelated, while budgets within one combination share paths
// (common random numbers).
class ConstantStore {
  public:
    explicit ConstantStore(McSettings settings) : settings_(std::move(settings)) {}

    const McSettings& settings() const { return settings_; }

    // optional on-disk layer under the in-memory memo; hits are flagged cached
    void set_disk_cache(std::shared_ptr<cache::ResultCache> c) { disk_ = std::move(c); }

    const constants::MultiEstimate& p_set(double w1, double w2,
                                          const std::vector<double>& budgets);
    const std::vector<constants::HEstimate>& h_set(double w1, double w2,
                                                   const std::vector<double>& budgets);
    const constants::MultiEstimate& r_set(
        double rho, double a, const std::vector<std::pair<double, double>>& budgets);

    constants::EstimatorResult p_hat(double w1, double w2, double s);
    constants::EstimatorResult h_hat(double w1, double w2, double s);
    constants::EstimatorResult r_hat(double rho, double a, double s1, double s2);

  private:
    McSettings settings_;
    std::shared_ptr<cache::ResultCache> disk_;
    std::map<std::string, constants::MultiEstimate> p_memo_;
    std::map<std::string, std::vector<constants::HEstimate>> h_memo_;
    std::map<std::string, constants::MultiEstimate> r_memo_;

    std::string full_key(const std::string& set_key) const;
};

enum class Theorem21Mode { Printed, Oracle };

struct ConstantUse {
    std::string role;
    constants::ConstantSpec spec;
    constants::EstimatorResult result;
};

struct LimitResult {
    model::Regime regime;
    double value = 0.0;
    double std_error = 0.0;
    std::vector<ConstantUse> constants_used;
    std::vector<std::string> warnings;
};

// Dimension-reduction limit (a <= rho). Printed mode evaluates the closed
// form; oracle mode returns the integral-representation ratio
// P(1,1,s1)/P(1,1,0) estimated with common random numbers.
LimitResult limit_theorem21(double s1, Theorem21Mode mode, ConstantStore& store);

// The five-case limit. The regime comes from model::classify unless
// force_kind is set (needed to land exactly on the measure-zero critical
// boundary). Constant specs are constructed internally via lambda_table.
LimitResult limit_theorem22(const model::ModelParams& params,
                            const model::SojournBudget& budget, ConstantStore& store,
                            std::optional<model::RegimeKind> force_kind = std::nullopt,
                            double classify_tol = 1e-12);

struct DiscrepancyRow {
    double s;
    double printed;         // closed form as printed (Theorem 2.1 numerator)
    double oracle;          // E[e^{xi_S}] estimate
    double oracle_se;
    double ratio;           // printed / oracle
    bool monotone_violation;  // printed increased vs previous row
};

struct DiscrepancyReport {
    std::vector<DiscrepancyRow> rows;
    bool any_violation = false;
};

DiscrepancyReport discrepancy_report(const std::vector<double>& s_grid,
                                     ConstantStore& store);

// piecewise coefficients of the critical a=1 case, exposed for the
// boundary-continuity diagnostics
double case3_c31(double c1, double c2);
double case3_c32(double c1, double c2);
double case3_c3(double c1, double c2);

} // namespace ruinlab::asymptotics
