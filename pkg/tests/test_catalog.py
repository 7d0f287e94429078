# tests/test_catalog.py

import numpy as np
import pytest

from rmx import catalog
from rmx.catalog import apply_sl2_automorphism, stolin_gauge
from rmx.tensorcore import E12, E21, H, Tensor2, casimir, project_sl
from rmx.thetafn import ThetaParams


def s(a, b):
    return Tensor2.simple(a, b)


def test_registry_names():
    for name in catalog.NAMES:
        sol = catalog.get(name)
        assert sol.name == name
        assert sol.n == 2
    with pytest.raises(KeyError):
        catalog.get("does-not-exist")


def test_yang_formula():
    y = 2.0
    want = (1 / y) * (0.5 * s(H, H) + s(E12, E21) + s(E21, E12))
    assert (catalog.get("yang").evaluator(y) - want).norm() < 1e-15
    assert (catalog.get("yang").evaluator(y) - (1 / y) * casimir(2)).norm() < 1e-15


def test_cherednik_formula():
    y = 0.63 + 0.11j
    want = 0.5 * np.cos(y) / np.sin(y) * s(H, H) \
        + (1 / np.sin(y)) * (s(E12, E21) + s(E21, E12)) + np.sin(y) * s(E21, E21)
    assert (catalog.get("cherednik").evaluator(y) - want).norm() < 1e-14


def test_rat21_projects_to_stolin_at_lam_zero():
    rat = catalog.get("rat21")
    st = catalog.get("stolin")
    y1, y2 = 0.2, 0.9
    # the sl2 (x) sl2 part of rat21 is stolin plus O(lam)
    for lam in (1e-5, 1e-6):
        diff = project_sl(rat.evaluator(lam, y1, y2)) - st.evaluator(y1, y2)
        assert diff.norm() < 10 * lam


def test_trg21_is_the_additive_nodal_form():
    # trg21(v, z) is the gauged multiplicative nodal solution at
    # lam = exp(-iv), y = exp(2iz): sqrt-y gauge, conjugation by diag(1, i/2)
    # and overall factor 2i
    from rmx.rmatrix import conjugate_legs
    trg = catalog.get("trg21")
    rng = np.random.default_rng(3)
    for _ in range(10):
        v, z = rng.uniform(0.2, 1.0, 2) + 1j * rng.uniform(-0.2, 0.2, 2)
        lam, y = np.exp(-1j * v), np.exp(2j * z)
        pre = catalog.nodal21_multiplicative(lam, 1.0, y)
        a2 = np.diag([np.sqrt(complex(y)), 1.0])
        gauged = conjugate_legs(pre, np.eye(2), a2)
        cand = 2j * conjugate_legs(gauged, np.diag([1.0, 0.5j]), np.diag([1.0, 0.5j]))
        assert (cand - trg.evaluator(v, z)).norm() < 1e-12


def test_trg20_is_the_additive_semistable_form():
    # y = exp(2iz), lam = exp(-2iv), the e12 -> 2 e12 rescaling, one more
    # constant conjugation by diag(1, -i) per leg and an overall factor i
    from rmx.rmatrix import conjugate_legs
    trg20 = catalog.get("trg20_semistable")
    rng = np.random.default_rng(4)
    d = np.diag([np.sqrt(2.0), 1 / np.sqrt(2.0)])
    d2 = np.diag([1.0, -1.0j])
    for _ in range(10):
        v, z = rng.uniform(0.2, 1.0, 2) + 1j * rng.uniform(-0.2, 0.2, 2)
        mult = catalog.semistable20_multiplicative(np.exp(-2j * v), np.exp(2j * z))
        cand = 1j * conjugate_legs(conjugate_legs(mult, d, d), d2, d2)
        assert (cand - trg20.evaluator(v, z)).norm() < 1e-11


def test_ell21_normalization_against_construction_form():
    # stored entry = (1/4) of the full-argument theta-ratio form
    #             = (1/2) * closed construction form at x = 2v
    p = ThetaParams(1.1j)
    v, y = 0.21 + 0.03j, 0.37 - 0.08j
    stored = catalog.get("ell21", tau=1.1j).evaluator(v, y)
    constr = catalog.elliptic_closed_form(2 * v, y, p)
    assert (2 * stored - constr).norm() < 1e-12


def test_ell21_classical_coefficients():
    from rmx.thetafn import sn, cn, dn
    from rmx.tensorcore import SIGMA, GAMMA
    p = ThetaParams(1.1j)
    y = 0.41 + 0.05j
    got = catalog.get("ell21_classical", tau=1.1j).evaluator(y)
    want = 0.5 * ((cn(y, p) / sn(y, p)) * s(H, H)
                  + (1 / sn(y, p)) * s(GAMMA, GAMMA)
                  + (dn(y, p) / sn(y, p)) * s(SIGMA, SIGMA))
    assert (got - want).norm() < 1e-13


def test_classical_partners():
    assert catalog.classical_of("trg21").name == "cherednik"
    assert catalog.classical_of("rat21").name == "stolin"
    assert catalog.classical_of("rat21_degenerate").name == "yang"
    assert catalog.classical_of("ell21").name == "ell21_classical"
    with pytest.raises(ValueError, match="no classical limit"):
        catalog.classical_of("trg20_semistable")


def test_stolin_gauge_relation():
    # (phi(y1) (x) phi(y2)) stolin(y1, y2) = s(y2 - y1)
    st = catalog.get("stolin")
    sd = catalog.get("stolin_difference_s")
    rng = np.random.default_rng(7)
    for _ in range(20):
        y1, y2 = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        t = st.evaluator(y1, y2)
        t = apply_sl2_automorphism(stolin_gauge(y1), t, leg=1)
        t = apply_sl2_automorphism(stolin_gauge(y2), t, leg=2)
        assert (t - sd.evaluator(y2 - y1)).norm() < 1e-12


def test_stolin_gauge_is_an_automorphism():
    g = stolin_gauge(0.7 + 0.2j)
    basis = [H, E12, E21]

    def coords(m):
        return np.array([m[0, 0], m[0, 1], m[1, 0]])

    def mat(c):
        return c[0] * H + c[1] * E12 + c[2] * E21

    for i in range(3):
        for j in range(3):
            br = basis[i] @ basis[j] - basis[j] @ basis[i]
            lhs = mat(g @ coords(br))
            a, b = mat(g @ coords(basis[i])), mat(g @ coords(basis[j]))
            assert np.allclose(lhs, a @ b - b @ a, atol=1e-12)


def test_arity_metadata():
    assert catalog.get("ell21").nargs() == 2
    assert catalog.get("rat21").nargs() == 3
    assert catalog.get("stolin").nargs() == 2
    assert catalog.get("yang").nargs() == 1
    assert catalog.get("yang").is_classical
    assert not catalog.get("rat21").is_classical
