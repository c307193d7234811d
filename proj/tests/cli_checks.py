"""CLI contract checks: JSON emission, exit codes, replay reproducibility and
the result-cache round trip. Invoked by ctest with the binary path as argv[1]."""

import json
import os
import shutil
import subprocess
import sys
import tempfile

BIN = sys.argv[1]


def run(*args, env=None, expect=0):
    e = dict(os.environ)
    if env:
        e.update(env)
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=e)
    assert p.returncode == expect, (args, p.returncode, p.stderr[:500])
    return p


def run_json(*args, env=None):
    return json.loads(run(*args, env=env).stdout)


def main():
    tmp = tempfile.mkdtemp(prefix="ruinlab_cli_")
    try:
        # classify
        j = run_json("classify", "--rho", "-0.5", "--a", "1")
        assert j["regime"] == "critical_a_eq_1", j
        assert abs(j["A_a"] + 0.5) < 1e-15
        assert abs(j["t_star"] - 1.0) < 1e-15

        # exact-ruin with the rescale diagnostic
        j = run_json("exact-ruin", "--c", "0", "--u", "1", "--T", "1")
        assert abs(j["value"] - 0.31731050786291415) < 1e-12
        j = run_json("exact-ruin", "--c", "2", "--u", "3", "--T", "4")
        assert abs(j["rescaled"]["c_prime"] - 4.0) < 1e-15
        assert abs(j["rescaled"]["value"] - j["value"]) < 1e-13
        assert "alt_value" in j["rescaled"]

        # qopt
        j = run_json("qopt", "--rho", "0.5", "--a", "1")
        assert abs(j["q_star"] - 4.0 / 3.0) < 1e-7
        assert j["regime"] == "supercritical"

        # simulate-paths produces the binary dump with the documented header
        bin_path = os.path.join(tmp, "paths.bin")
        j = run_json("simulate-paths", "--rho", "0.3", "--steps", "64", "--seed", "9",
                     "--count", "2", "--bin", bin_path)
        import struct
        with open(bin_path, "rb") as f:
            horizon, n_steps, count = struct.unpack("<3d", f.read(24))
            assert (horizon, n_steps, count) == (1.0, 64.0, 4.0)
            values = struct.unpack(f"<{65}d", f.read(65 * 8))
            assert values[0] == 0.0

        # constant: cache round trip with identical numbers
        cache = os.path.join(tmp, "cache")
        args = ("constant", "--kind", "P", "--w1", "1", "--w2", "1", "--s", "0",
                "--n", "2000", "--steps", "8000", "--horizon", "10",
                "--seed", "7", "--cache-dir", cache)
        j1 = run_json(*args)
        assert not j1["cached"]
        assert abs(j1["estimate"] - 2.0) < 0.4
        j2 = run_json(*args)
        assert j2["cached"], j2
        assert j2["estimate"] == j1["estimate"]
        assert j2["config_hash"] == j1["config_hash"]

        # replaying the embedded configuration reproduces the numbers bit-exactly
        j3 = run_json("constant", "--kind", "P", "--w1", "1", "--w2", "1", "--s", "0",
                      "--n", str(j1["n"]), "--steps", "8000", "--horizon", "10",
                      "--seed", str(j1["seed"]), "--no-cache")
        assert j3["estimate"] == j1["estimate"]
        assert j3["stderr"] == j1["stderr"]

        # the env var positions the cache directory
        envcache = os.path.join(tmp, "envcache")
        run_json("constant", "--kind", "P", "--w1", "1", "--w2", "1", "--s", "0",
                 "--n", "500", "--steps", "4000", "--horizon", "10", "--seed", "3",
                 env={"RUINLAB_CACHE_DIR": envcache})
        j = run_json("cache", "--list", env={"RUINLAB_CACHE_DIR": envcache})
        assert j["dir"] == envcache
        assert len(j["entries"]) == 1
        j = run_json("cache", "--clear", env={"RUINLAB_CACHE_DIR": envcache})
        assert j["cleared"] == 1

        # mc-ratio at zero budgets: ratio exactly 1, counts embedded
        j = run_json("mc-ratio", "--rho", "0.5", "--a", "0.8", "--c1", "1", "--c2", "1",
                     "--u", "1", "--n", "20000", "--steps", "512", "--seed", "5")
        assert j["ratio"]["estimate"] == 1.0
        assert j["counts"]["s"] == j["counts"]["pi"]

        # converge: CSV columns
        csv_path = os.path.join(tmp, "table.csv")
        run("converge", "--rho", "0.5", "--a", "0.8", "--c1", "1", "--c2", "1",
            "--s1", "0", "--s2", "0", "--u-list", "1.0", "1.5",
            "--n", "5000", "--steps", "256", "--seed", "5", "--out", csv_path,
            "--cache-dir", os.path.join(tmp, "cache2"))
        with open(csv_path) as f:
            header = f.readline().strip()
            assert header == "u,pi_hat,pi_se,s_hat,s_se,ratio,ratio_lo,ratio_hi,limit,regime"
            rows = f.read().strip().splitlines()
            assert len(rows) == 2
            assert "." in rows[0].split(",")[1]  # C-locale decimal separator

        # limit in dimension reduction, printed mode
        j = run_json("limit", "--rho", "0.5", "--a", "0.3", "--s1", "0",
                     "--mode", "printed", "--n", "100")
        assert j["mode"] == "printed"
        assert abs(j["limit"] - 0.5) < 1e-14

        # error paths: domain error -> exit 1, unknown flag -> nonzero
        run("exact-ruin", "--c", "0", "--u", "-1", expect=1)
        p = subprocess.run([BIN, "classify", "--bogus"], capture_output=True)
        assert p.returncode != 0

        print("cli checks: all passed")
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


if __name__ == "__main__":
    main()
