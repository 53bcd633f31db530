"""Smoke test for the spantri Python extension."""

import json

import spantri


def main():
    t = spantri.build(14, 7)
    tri = json.loads(t)
    assert tri["regime_tag"] == "nested", tri["regime_tag"]
    assert json.loads(spantri.validate(t))["passed"]
    faces = spantri.faces(t)
    assert len(faces) == 2 * 14 - 1 - 7
    rep = json.loads(spantri.verify(t, "nested"))
    assert rep["passed"] and rep["violations"] == []

    wheel = spantri.build(5, 4, "two-ring")
    bounds = json.loads(spantri.spread_bounds(wheel, 4))
    assert bounds["automorphisms"] == 8 and bounds["copies"] == 15
    assert bounds["passed"]

    assert spantri.gnp_edges(6, 1.0, 1) == [(a, b) for a in range(6) for b in range(a + 1, 6)]
    assert spantri.gnp_edges(6, 0.0, 1) == []

    one = json.loads(spantri.containment(9, 9, 1.0, 10, 3))
    assert one["p_hat"] == 1.0

    cert = json.loads(spantri.lower_bound(100, 50))
    assert abs(cert["p"] - 0.013207) < 1e-6 and cert["negative"]

    est = json.loads(spantri.threshold(8, 8, 40, 0.05, 7))
    assert 0.0 < est["p_hat_c"] < 1.0

    try:
        spantri.build(3, 5)
    except ValueError:
        pass
    else:
        raise AssertionError("bad (n, k) accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
