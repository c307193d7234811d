"""Smoke tests for the python module: every bound operation is exercised once
against a known value or structural property."""

import math
import sys

import ruinlab as rl


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    approx(rl.std_normal_cdf(0.0), 0.5, 1e-15)
    approx(rl.std_normal_cdf(-1.0), 0.15865525393145707, 1e-13)
    approx(rl.std_normal_survival(1.0), 0.15865525393145707, 1e-13)

    approx(rl.one_dim_ruin(0, 1, 1), 0.31731050786291415, 1e-12)
    approx(rl.printed_sojourn_constant(0.0), 1.0, 1e-14)

    approx(rl.regime_boundary(1.0), -0.5, 1e-15)
    reg = rl.classify(-0.5, 1.0)
    assert reg["regime"] == "critical_a_eq_1", reg
    approx(reg["t_star"], 1.0, 1e-15)

    cp, up = rl.rescale_horizon(2.0, 3.0, 4.0)
    approx(cp, 4.0, 1e-15)
    approx(up, 1.5, 1e-15)

    qs = rl.q_star_global(0.5, 1.0)
    approx(qs["q_star"], 4.0 / 3.0, 1e-8)
    approx(rl.log_rate(0.8, 0.5), 0.5, 1e-8)

    w1, w2 = rl.simulate_pair(0.5, 1.0, 1.0, 1.0, 256, seed=7)
    assert len(w1) == 257 and len(w2) == 257
    assert w1[0] == 0.0 and w2[0] == 0.0
    w1b, _ = rl.simulate_pair(0.5, 1.0, 1.0, 1.0, 256, seed=7)
    assert w1 == w1b, "determinism"

    ramp = [k / 256 for k in range(257)]
    approx(rl.sojourn_time(ramp, 1.0, 0.5), 0.5, 1e-2)
    approx(rl.level_quantile(ramp, 1.0, 0.0), max(ramp[:-1]), 1e-12)

    lam = rl.lambda_table(0.5, 1.0)
    approx(lam[0], 2.0 / 3.0, 1e-12)

    p = rl.estimate_p(1.0, 1.0, n=4000, n_steps=20000, horizon=10.0, seed=42)
    assert abs(p["estimate"] - 2.0) < 6 * p["stderr"] + 0.1, p

    h = rl.estimate_h(1.0, 2.0, deltas=[4.0, 8.0, 16.0], spu=1024, n=4000, seed=42)
    assert len(h["per_delta"]) == 3
    assert 0.5 < h["estimate"] < 1.5, h

    r = rl.estimate_r(0.0, 0.5, n=2000, n_steps=20000, horizon=15.0, seed=42)
    assert abs(r["estimate"] - 8.0) < 6 * r["stderr"] + 0.8, r

    t21 = rl.limit_theorem21(0.0, n=2000)
    approx(t21["limit"], 1.0, 1e-12)
    assert rl.limit_theorem21(0.0, mode="printed", n=100)["limit"] == 0.5

    t22 = rl.limit_theorem22(0.5, 0.8, 1.0, 1.0, 0.0, 0.0, n=1000)
    assert t22["regime"] == "supercritical"
    approx(t22["limit"], 1.0, 1e-12)

    pr = rl.mc_ratio(0.5, 0.8, 1.0, 1.0, u=1.0, s1=0.0, s2=0.0, n=20000, n_steps=512,
                     seed=5)
    assert pr["ratio_defined"]
    approx(pr["ratio"]["estimate"], 1.0, 1e-12)

    # error paths surface as python exceptions
    try:
        rl.one_dim_ruin(0, -1, 1)
        raise AssertionError("expected ValueError")
    except ValueError:
        pass

    print("python smoke: all checks passed")


if __name__ == "__main__":
    sys.exit(main())
