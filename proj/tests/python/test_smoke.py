import math

import pytest

import hamsys


def test_classify_superlinear_subcritical():
    cl = hamsys.classify(3.0, 3.0, N=2)
    assert cl["regime"] == "superlinear"
    assert cl["hyperbola"] == "below"
    assert cl["H1"] and cl["H3"] and cl["H4"]


def test_classify_on_critical_hyperbola():
    cl = hamsys.classify(5.0, 5.0, N=3)
    assert cl["hyperbola"] == "on"
    assert not cl["H1"]


def test_classify_rejects_bad_exponents():
    with pytest.raises(Exception):
        hamsys.classify(-1.0, 2.0)


def test_interval_eigenvalues():
    lam = hamsys.eigenvalues("interval", math.pi, modes=5)
    assert lam == pytest.approx([1.0, 4.0, 9.0, 16.0, 25.0], rel=1e-12)


def test_disk_principal_eigenvalue():
    lam = hamsys.eigenvalues("disk", 1.0, modes=4)
    j01 = 2.404825557695773
    assert lam[0] == pytest.approx(j01 * j01, rel=1e-12)


def test_ground_state_level_cross_framework():
    kw = dict(kind="interval", a=math.pi, modes=32)
    c_inv = hamsys.ground_state_level(3.0, 3.0, framework="inversion", **kw)
    c_dual = hamsys.ground_state_level(3.0, 3.0, framework="dual", **kw)
    assert c_inv > 0
    assert c_dual == pytest.approx(c_inv, rel=1e-3)


def test_solve_runs_and_verifies():
    verified, manifest = hamsys.solve(
        "problem.p = 3\nproblem.q = 3\n"
        "domain.kind = interval\ndomain.length = 3.141592653589793\n"
        "solver.modes = 24\nsolver.frameworks = inversion, dual\n"
    )
    assert verified
    assert "inversion" in manifest
