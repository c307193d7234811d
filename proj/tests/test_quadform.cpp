#include <doctest.h>

#include "ruinlab/mc.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/quadform.hpp"

#include <cmath>
#include <stdexcept>

using namespace ruinlab;

namespace {
quadform::RateInput input_at(double rho, double a1, double a2, double s, double t) {
    gauss::BivCovariance cov(s, t, rho);
    return quadform::RateInput{cov, {a1, a2}};
}
} // namespace

TEST_CASE("q_value closed forms") {
    // independent coordinates: rates add
    CHECK(quadform::q_value(input_at(0.0, 1.0, 0.7, 1, 1)).q ==
          doctest::Approx(1.0 + 0.49).epsilon(1e-14));
    // 2x2 inversion at s=t=1: (1 - 2 a rho + a^2)/(1 - rho^2)
    CHECK(quadform::q_value(input_at(0.5, 1.0, 1.0, 1, 1)).q ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(quadform::q_value(input_at(0.0, 1.0, 1.0, 0.5, 1)).q ==
          doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("q_value exposes b = Sigma^{-1} a") {
    const auto qv = quadform::q_value(input_at(0.5, 1.0, 1.0, 1, 1));
    // Sigma = [[1, .5],[.5, 1]], a = (1,1): b = (2/3, 2/3)
    CHECK(qv.b[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(qv.b[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("q_star_point active-set cases") {
    // interior gradient positive: minimum sits at a
    const auto in1 = input_at(0.3, 1.0, 0.8, 1, 1);
    const auto qv1 = quadform::q_value(in1);
    CHECK(qv1.b[0] > 0.0);
    CHECK(qv1.b[1] > 0.0);
    CHECK(quadform::q_star_point(in1) == doctest::Approx(qv1.q).epsilon(1e-14));
    // second coordinate relaxes: rate collapses to the first marginal
    CHECK(quadform::q_star_point(input_at(0.8, 1.0, 0.5, 1, 1)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // independent coordinates bind both constraints
    CHECK(quadform::q_star_point(input_at(0.0, 1.0, 0.9, 0.5, 1.0)) ==
          doctest::Approx(1.0 / 0.5 + 0.81).epsilon(1e-14));
}

TEST_CASE("q_star_point never exceeds q_value") {
    for (double rho : {-0.7, -0.2, 0.4, 0.85}) {
        for (double s : {0.25, 0.6, 1.0}) {
            for (double t : {0.25, 0.6, 1.0}) {
                const auto in = input_at(rho, 1.0, 0.8, s, t);
                const auto qv = quadform::q_value(in);
                const double qs = quadform::q_star_point(in);
                CHECK(qs <= qv.q + 1e-12);
                if (qv.b[0] >= 0 && qv.b[1] >= 0)
                    CHECK(qs == doctest::Approx(qv.q).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("q_star_global minimizers match the closed-form optimizers") {
    {
        model::ModelParams p{0.9, 1.0};
        const auto gm = quadform::q_star_global(p, std::nullopt);
        REQUIRE(gm.minimizers.size() == 1);
        CHECK(std::fabs(gm.minimizers[0][0] - 1.0) < 1e-6);
        CHECK(std::fabs(gm.minimizers[0][1] - 1.0) < 1e-6);
    }
    {
        model::ModelParams p{-0.6, 0.9};
        const auto gm = quadform::q_star_global(p, std::nullopt);
        REQUIRE(gm.minimizers.size() == 1);
        CHECK(std::fabs(gm.minimizers[0][0] - 1.0) < 1e-6);
        CHECK(std::fabs(gm.minimizers[0][1] - model::classify(p).t_star) < 1e-6);
    }
    {
        model::ModelParams p{-0.8, 1.0};
        const auto gm = quadform::q_star_global(p, std::nullopt);
        REQUIRE(gm.minimizers.size() == 2);
        const double ts = model::classify(p).t_star;
        CHECK(std::fabs(gm.minimizers[0][0] - ts) < 1e-6);
        CHECK(std::fabs(gm.minimizers[0][1] - 1.0) < 1e-6);
        CHECK(std::fabs(gm.minimizers[1][0] - 1.0) < 1e-6);
        CHECK(std::fabs(gm.minimizers[1][1] - ts) < 1e-6);
    }
    {
        // dimension reduction plateau resolves to (1,1)
        model::ModelParams p{0.8, 0.5};
        const auto gm = quadform::q_star_global(p, std::nullopt);
        REQUIRE(gm.minimizers.size() == 1);
        CHECK(std::fabs(gm.minimizers[0][0] - 1.0) < 1e-9);
        CHECK(std::fabs(gm.minimizers[0][1] - 1.0) < 1e-9);
        CHECK(gm.value == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("grid refinement is resolution-stable") {
    for (auto p : {model::ModelParams{0.5, 1.0}, model::ModelParams{-0.6, 0.9},
                   model::ModelParams{-0.8, 1.0, 0.5, 0.25}}) {
        const auto g256 = quadform::q_star_global(p, std::nullopt, 256);
        const auto g512 = quadform::q_star_global(p, std::nullopt, 512);
        CHECK(g256.value == doctest::Approx(g512.value).epsilon(1e-8));
    }
}

TEST_CASE("swap symmetry at a=1 with equal premiums") {
    model::ModelParams p{-0.8, 1.0, 0.7, 0.7};
    const auto gm = quadform::q_star_global(p, 2.0);
    for (const auto& m : gm.minimizers) {
        const auto in1 = quadform::make_rate_input(p, m[0], m[1], 2.0);
        const auto in2 = quadform::make_rate_input(p, m[1], m[0], 2.0);
        CHECK(quadform::q_star_point(in1) ==
              doctest::Approx(quadform::q_star_point(in2)).epsilon(1e-10));
    }
    // minimizer set closed under coordinate swap
    for (const auto& m : gm.minimizers) {
        bool found = false;
        for (const auto& other : gm.minimizers)
            if (std::fabs(other[0] - m[1]) < 1e-6 && std::fabs(other[1] - m[0]) < 1e-6)
                found = true;
        CHECK(found);
    }
}

TEST_CASE("log_rate closed forms") {
    CHECK(quadform::log_rate({0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(quadform::log_rate({0.5, 1.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(quadform::log_rate({0.8, 0.5}) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("finite-u barrier vector carries the drift correction") {
    model::ModelParams p{0.2, 0.8, 1.0, 2.0};
    const auto in = quadform::make_rate_input(p, 0.5, 1.0, 4.0);
    CHECK(in.avec[0] == doctest::Approx(1.0 + 1.0 * 0.5 / 4.0));
    CHECK(in.avec[1] == doctest::Approx(0.8 + 2.0 * 1.0 / 4.0));
}

TEST_CASE("grid_n below 64 rejected") {
    CHECK_THROWS_AS(quadform::q_star_global({0.5, 1.0}, std::nullopt, 32),
                    std::invalid_argument);
}

TEST_CASE("logarithmic decay of the joint ruin probability (MC trend)") {
    // rho = 0, a = 1, no drift: pi(u) = (2 Psi(u))^2 and -log pi / u^2 must
    // drift toward the rate 1 from above as u grows
    model::ModelParams p{0.0, 1.0, 0.0, 0.0};
    std::vector<mc::SweepRow> rows{{1.5, 0, 0}, {2.0, 0, 0}, {2.5, 0, 0}};
    const auto probes = mc::multi_level_sweep(p, rows, 100000, 4096, 91, 0);
    double prev = INFINITY;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(probes[i].n_pi > 0);
        const double rate = -std::log(probes[i].pi_hat.estimate) / (rows[i].u * rows[i].u);
        CHECK(rate > 1.0);
        CHECK(rate < prev);
        prev = rate;
    }
}
