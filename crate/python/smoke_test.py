"""Smoke test for the pyqtrellis extension.

Build it first:  pip install --no-build-isolation ./crates/python
"""

import math

import pyqtrellis as qt


def main():
    assert qt.builtin_codes() == ["code422", "steane713", "shor913", "rm1513"]

    steane = qt.Code.load("steane713")
    assert (steane.n, steane.k, steane.is_css) == (7, 1, True)

    t = qt.Trellis.build(steane, "multigoal", "bcjr_wolf")
    assert t.state_profile == [1, 4, 16, 64, 16, 64, 16, 4]
    assert (t.num_vertices, t.num_edges, t.viterbi_cost) == (185, 292, 399)
    again = qt.Trellis.from_json(t.to_json())
    assert again.is_isomorphic(qt.Trellis.build(steane, "multigoal", "merge"))

    tx = qt.Trellis.build(steane, "x")
    assert (tx.num_vertices, tx.num_edges) == (33, 42)

    sx, sz = steane.css_syndrome("ZIZIIIY")
    r = qt.decode(steane, f"{sx}/{sz}", 0.05, mode="css")
    # same syndrome and logical label means the two differ by a stabilizer
    assert steane.css_syndrome(r.error_estimate) == (sx, sz)
    assert steane.logical_label(r.error_estimate) == steane.logical_label("ZIZIIIY")

    syn = "101100"
    r = qt.decode(steane, syn, 0.05, mode="dml")
    brute = qt.brute_force_dml(steane, syn, 0.05)
    for a, b in zip(r.coset_log_probs, brute):
        assert abs(math.exp(a) - b) <= 1e-9 * b
    assert r.multiplications == 292

    rows = qt.simulate(steane, [0.1, 0.2], mode="dml", trials=500, seed=1)
    assert [row["p"] for row in rows] == [0.1, 0.2]
    assert all(row["ci_lo"] <= row["rate"] <= row["ci_hi"] for row in rows)

    try:
        qt.Code.load("no-such-code")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("pyqtrellis smoke test OK")


if __name__ == "__main__":
    main()
