"""Smoke test for the `mutual_consensus` extension module.

Build and install first, e.g. `maturin build -m crates/py/Cargo.toml -o dist`
followed by `pip install dist/mutual_consensus-*.whl`.
"""

import json
import math
import pathlib
import sys

import mutual_consensus as mc

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "core" / "fixtures"


def close(a, b, tol=1e-9):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


def check_measures():
    omega = [0.4, 0.3, 0.2, 0.1]
    x = [0.2, 0.9, 0.5, 0.1]
    assert close(mc.owa(omega, x), 0.4 * 0.9 + 0.3 * 0.5 + 0.2 * 0.2 + 0.1 * 0.1)
    assert close(mc.kappa_mutual(x), 0.8)
    assert mc.kappa_owa(omega, x) <= mc.kappa_mutual(x)
    assert mc.kappa_pairwise(x, [0.25] * 4) <= mc.kappa_mutual(x)
    assert mc.kappa_weighted_dev(x, [0.25] * 4, omega) <= mc.kappa_mutual(x)


def check_mcmc():
    r = mc.solve_mcmc([0.0, 1.0], [0.5, 0.5], 0.2)
    assert close(r["cost"], 0.4)
    assert close(r["interval"][0], 0.0)
    mid = mc.solve_mcmc([0.0, 1.0], [0.5, 0.5], 0.2, tie_break="midpoint")
    assert close(mid["x"][0], 0.4) and close(mid["x"][1], 0.6)
    try:
        mc.solve_mcmc([0.1, 0.9], [0.5, 0.5], 0.1, window=(0.6, 0.4))
    except mc.InfeasibleError:
        pass
    else:
        raise AssertionError("empty window accepted")


def check_instance():
    inst = mc.Instance.load(str(FIXTURES / "example1.json"))
    assert inst.n == 5
    b = inst.bounds()
    assert b["delta_minus"] <= b["delta_plus"]
    ap = inst.approx()
    ex = inst.exact()
    assert ap["kappa_owa"] <= inst.epsilon + 1e-12
    assert b["cost_lower"] - 1e-9 <= ex["cost"] <= ap["cost"] + 1e-9 <= b["cost_upper"] + 2e-9
    assert inst.membership(ap["x"])["owa"] is True

    again = mc.Instance.from_json(inst.to_json())
    assert again.opinions == inst.opinions and again.costs == inst.costs

    sym = mc.Instance([0.1, 0.8, 0.4], [1 / 3] * 3, [0.5, 0.3, 0.2], 0.1)
    assert close(sym.symmetric()["cost"], sym.exact()["cost"], 1e-7)

    try:
        mc.Instance([0.1, 0.2], [0.5, 0.5], [0.5, 0.5], 1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("epsilon outside [0, 1] accepted")


def check_harness():
    a = mc.simulate(5, 6, seed=7, record_timings=False)
    b = mc.simulate(5, 6, seed=7, record_timings=False, threads=1)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert len(a["records"]) == 6
    inst = mc.Instance.load(str(FIXTURES / "example1.json"))
    pts = mc.sample_region(inst, "owa", 50, seed=1)
    assert len(pts) == 50
    for coords, inside in pts:
        assert inside == (mc.kappa_owa(inst.owa_weights, coords) <= inst.epsilon)


def main():
    for check in (check_measures, check_mcmc, check_instance, check_harness):
        check()
        print(f"ok {check.__name__}")
    print("python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
