#include <doctest.h>

#include "oracles.hpp"
#include "ruinlab/exact.hpp"
#include "ruinlab/mc.hpp"

#include <cmath>
#include <stdexcept>

using namespace ruinlab;

TEST_CASE("zero budgets force the ratio to one exactly") {
    model::ModelParams p{0.5, 0.8, 1.0, 1.0};
    model::SojournBudget zero{0.0, 0.0, 1.0};
    const auto pr = mc::estimate_probabilities(p, 1.0, zero, 20000, 512, 5, 0);
    REQUIRE(pr.ratio_defined);
    CHECK(pr.n_s == pr.n_pi);
    CHECK(pr.ratio.estimate == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sojourn count never exceeds the ruin count, ratio in [0,1]") {
    model::ModelParams p{-0.3, 0.9, 0.5, 1.0};
    for (double s : {0.1, 0.5, 1.5}) {
        model::SojournBudget b{s, s, 1.2};
        const auto pr = mc::estimate_probabilities(p, 1.2, b, 20000, 512, 11, 0);
        CHECK(pr.n_s <= pr.n_pi);
        CHECK(pr.s_hat.estimate <= pr.pi_hat.estimate + 1e-15);
        if (pr.ratio_defined) {
            CHECK(pr.ratio.estimate >= 0.0);
            CHECK(pr.ratio.estimate <= 1.0);
        }
    }
}

TEST_CASE("budget exceeding the horizon kills the sojourn event") {
    model::ModelParams p{0.5, 0.8, 0.0, 0.0};
    model::SojournBudget b{2.0, 0.0, 1.0};  // h1 = 2 > horizon 1
    const auto pr = mc::estimate_probabilities(p, 1.0, b, 10000, 256, 3, 0);
    CHECK(pr.n_s == 0);
    if (pr.ratio_defined) CHECK(pr.ratio.estimate == 0.0);
}

TEST_CASE("ratio is nonincreasing in each budget under common random numbers") {
    model::ModelParams p{0.5, 0.8, 1.0, 1.0};
    std::vector<mc::SweepRow> rows;
    for (double s : {0.0, 0.5, 1.0, 2.0}) rows.push_back({1.0, s, s});
    const auto probes = mc::multi_level_sweep(p, rows, 20000, 512, 17, 0);
    for (std::size_t i = 1; i < probes.size(); ++i) {
        CHECK(probes[i].n_s <= probes[i - 1].n_s);
        CHECK(probes[i].n_pi == probes[i - 1].n_pi);  // same levels, same paths
    }
}

TEST_CASE("first-coordinate marginal matches the exact formula") {
    model::ModelParams p{0.3, 1.0, 1.0, 0.5};
    model::SojournBudget zero{0.0, 0.0, 1.0};
    const std::int64_t n = 200000;
    const auto pr = mc::estimate_probabilities(p, 1.0, zero, n, 4096, 23, 0);
    const double want = exact::one_dim_ruin(1.0, 1.0, 1.0);
    const double got = static_cast<double>(pr.n_ruin1) / n;
    const double se = std::sqrt(want * (1 - want) / n);
    CHECK(std::fabs(got - want) < 3.0 * se + 0.005);
}

TEST_CASE("one_dim_ruin_mc shares paths across drift-matched pairs") {
    const auto rs = mc::one_dim_ruin_mc({{0.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}}, 1.0, 100000,
                                        4096, 29, 0);
    const double want[3] = {exact::one_dim_ruin(0, 1, 1), exact::one_dim_ruin(1, 1, 1),
                            exact::one_dim_ruin(1, 2, 1)};
    for (int i = 0; i < 3; ++i)
        CHECK(std::fabs(rs[i].estimate - want[i]) < 3.0 * rs[i].std_error + 0.005);
}

TEST_CASE("no-data marker when the barrier is out of reach") {
    model::ModelParams p{0.0, 1.0, 2.0, 2.0};
    model::SojournBudget zero{0.0, 0.0, 25.0};
    const auto pr = mc::estimate_probabilities(p, 25.0, zero, 10000, 256, 3, 0);
    CHECK_FALSE(pr.ratio_defined);
    CHECK(!pr.warnings.empty());
}

TEST_CASE("results are bit-identical across worker counts") {
    model::ModelParams p{0.5, 0.8, 1.0, 1.0};
    model::SojournBudget b{1.0, 1.0, 1.5};
    const auto r1 = mc::estimate_probabilities(p, 1.5, b, 30000, 512, 7, 1);
    const auto r2 = mc::estimate_probabilities(p, 1.5, b, 30000, 512, 7, 2);
    CHECK(r1.pi_hat.estimate == r2.pi_hat.estimate);
    CHECK(r1.s_hat.estimate == r2.s_hat.estimate);
    CHECK(r1.n_pi == r2.n_pi);
    CHECK(r1.n_simul == r2.n_simul);
}

TEST_CASE("tilted estimator with zero drift target equals the plain one") {
    // a tilt computed from the minimizer is only zero when u is zero-like;
    // instead check the internal consistency: plain vs tilted agree within
    // combined error bars where both are feasible
    model::ModelParams p{0.0, 1.0, 0.0, 0.0};
    model::SojournBudget zero{0.0, 0.0, 1.5};
    const auto plain = mc::estimate_probabilities(p, 1.5, zero, 200000, 1024, 13, 0);
    const auto tilt = mc::tilted_estimate(p, 1.5, zero, 200000, 1024, 13, 0);
    REQUIRE(plain.ratio_defined);
    const double se = std::hypot(plain.pi_hat.std_error, tilt.pi_hat.std_error);
    CHECK(std::fabs(plain.pi_hat.estimate - tilt.pi_hat.estimate) < 3.5 * se);
    CHECK(tilt.ess > 100.0);
}

TEST_CASE("tilted estimator matches the independence factorization oracle") {
    // rho = 0, no drift: pi(u) = (2 Psi(u))^2 with Psi the survival function.
    // Discrete monitoring at this level undershoots each marginal sup by
    // about 3%, hence a 10% allowance on the continuous-time product.
    model::ModelParams p{0.0, 1.0, 0.0, 0.0};
    model::SojournBudget zero{0.0, 0.0, 3.0};
    const auto pr = mc::tilted_estimate(p, 3.0, zero, 100000, 4096, 37, 0);
    const double psi = oracles::std_normal_survival(3.0);
    const double want = 4.0 * psi * psi;  // ~3.7e-6, far beyond plain MC reach here
    CHECK(std::fabs(pr.pi_hat.estimate - want) < 3.0 * pr.pi_hat.std_error + 0.10 * want);
}

TEST_CASE("converge_table on the dimension-reduction regime") {
    model::ModelParams p{0.8, 0.5, 0.0, 0.0};
    model::SojournBudget b{0.0, 0.0, std::nullopt};
    asymptotics::McSettings st;
    st.n = 2000;
    st.n_steps = 16000;
    st.seed = 99;
    asymptotics::ConstantStore store(st);
    const auto table = mc::converge_table(p, b, {1.0, 1.5}, 20000, 512, 3, store, 0);
    REQUIRE(table.rows.size() == 2);
    // S = 0: every ratio is exactly 1 and the oracle limit is exactly 1
    CHECK(table.limit.value == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& row : table.rows) {
        REQUIRE(row.probe.ratio_defined);
        CHECK(row.probe.ratio.estimate == doctest::Approx(1.0));
        CHECK(row.gap == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("vanishing budgets push the ratio toward one along u (o(1/u^2) scaling)") {
    // H_i(u) = 1/u^3, i.e. budgets S_i(u) = 1/u on the natural u^-2 scale.
    // At desk-scale u the limit 1 is far away; the assertion is the 3-point
    // monotone trend, plus dominance over the fixed-budget S = 1 ratios.
    model::ModelParams p{0.5, 0.8, 1.0, 1.0};
    std::vector<mc::SweepRow> rows;
    for (double u : {1.2, 1.6, 2.0}) {
        rows.push_back({u, 1.0 / (u * u * u), 1.0 / (u * u * u)});  // vanishing
        rows.push_back({u, 1.0 / (u * u), 1.0 / (u * u)});          // fixed S=1
    }
    const auto probes = mc::multi_level_sweep(p, rows, 400000, 2048, 41, 0);
    double prev = -1.0;
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        REQUIRE(probes[i].ratio_defined);
        CHECK(probes[i].ratio.estimate > prev);  // monotone trend toward 1
        prev = probes[i].ratio.estimate;
        // the o(1/u^2) budget admits strictly more sojourn events than S=1
        REQUIRE(probes[i + 1].ratio_defined);
        CHECK(probes[i].ratio.estimate >= probes[i + 1].ratio.estimate);
    }
}

TEST_CASE("bridge correction removes most of the discrete-sup bias") {
    // coarse grid, driftless, rho = 0: marginal P(sup B > 1) = 2 Psi(1)
    model::ModelParams p{0.0, 1.0, 0.0, 0.0};
    model::SojournBudget zero{0.0, 0.0, 1.0};
    const auto pr = mc::estimate_probabilities_bridge(p, 1.0, zero, 100000, 256, 19, 0);
    const double want = 2.0 * oracles::std_normal_survival(1.0);
    const double plain = static_cast<double>(pr.n_ruin1) / pr.pi_hat.n;
    REQUIRE(!std::isnan(pr.bridge1));
    // the corrected marginal lands within noise of the continuous value
    CHECK(std::fabs(pr.bridge1 - want) < 0.006);
    // and recovers most of the grid shortfall
    CHECK(std::fabs(pr.bridge1 - want) < 0.35 * std::fabs(plain - want));
    CHECK(pr.bridge_joint <= std::min(pr.bridge1, pr.bridge2) + 1e-12);
}

TEST_CASE("paired-resolution probe reports the discretization shift") {
    model::ModelParams p{0.5, 0.8, 1.0, 1.0};
    model::SojournBudget b{0.5, 0.5, 1.0};
    const auto pr = mc::estimate_probabilities(p, 1.0, b, 20000, 512, 3, 0);
    // discrete monitoring undershoots; the finer grid must sit higher, and
    // the recorded shift is that difference
    CHECK(pr.pi_hat.truncation_shift > 0.0);
    CHECK(pr.pi_hat.truncation_shift < 0.05);
}

TEST_CASE("input validation") {
    model::ModelParams p{0.5, 0.8};
    model::SojournBudget b{0.0, 0.0, 2.0};
    CHECK_THROWS_AS(mc::estimate_probabilities(p, 1.0, b, 1000, 256, 1, 0),
                    std::invalid_argument);  // budget.u != u
    asymptotics::ConstantStore store(asymptotics::McSettings{});
    CHECK_THROWS_AS(mc::converge_table(p, {0, 0, std::nullopt}, {2.0, 1.0}, 100, 64, 1,
                                       store, 0),
                    std::invalid_argument);  // decreasing u_list
}
