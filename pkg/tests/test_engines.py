# tests/test_engines.py

import numpy as np
import pytest

from rmx import catalog, verify
from rmx.rmatrix import (
    DegenerateSystemError, EngineError, apply_gauge, engine_cusp,
    engine_elliptic_21, engine_nodal, engine_semistable_nodal_20,
    engine_solution,
)
from rmx.thetafn import ThetaParams


def ring_points(rng, k, lo=0.3, hi=1.3):
    return rng.uniform(lo, hi, k) * np.exp(1j * rng.uniform(0, 2 * np.pi, k))


# --- closed-form comparisons ---------------------------------------------------

def test_nodal_21_spot_value():
    # lam = 2, y1 = 1, y2 = 3: image of e11 under the linear map is
    # diag(1/6, -2/3), i.e. the tensor has e11(x)e11 = 1/6, e11(x)e22 = -2/3
    t = engine_nodal(2, 1, 1.0, 2.0, 1.0, 3.0)
    assert abs(t.coeffs[0, 0, 0, 0] - 1 / 6) < 1e-12
    assert abs(t.coeffs[0, 0, 1, 1] + 2 / 3) < 1e-12


def test_nodal_21_matches_closed_form():
    rng = np.random.default_rng(20)
    for _ in range(20):
        l1, l2, y1, y2 = ring_points(rng, 4)
        if abs(l1 - l2) < 0.1 or abs(l1 + l2) < 0.1 or abs(y1 - y2) < 0.1:
            continue
        got = engine_nodal(2, 1, l1, l2, y1, y2)
        want = catalog.nodal21_multiplicative(l2 / l1, y1, y2)
        assert (got - want).norm() < 1e-10


def test_cusp_21_matches_rational_closed_form():
    rng = np.random.default_rng(21)
    rat = catalog.get("rat21")
    t = engine_cusp(2, 1, 0.0, 1.5, 0.2, 0.9)
    assert (t - rat.evaluator(1.5, 0.2, 0.9)).norm() < 1e-12
    for _ in range(20):
        l1, l2, y1, y2 = (rng.uniform(-1, 1, 4) + 1j * rng.uniform(-0.4, 0.4, 4))
        if abs(l1 - l2) < 0.15 or abs(y1 - y2) < 0.15:
            continue
        got = engine_cusp(2, 1, l1, l2, y1, y2)
        assert (got - rat.evaluator(l2 - l1, y1, y2)).norm() < 1e-10


def test_semistable_matches_closed_form():
    got = engine_semistable_nodal_20(1.0, 2.0, 1.0, 3.0)
    want = catalog.semistable20_multiplicative(2.0, 3.0)
    assert (got - want).norm() < 1e-12


def test_elliptic_matches_closed_form():
    for tau in (1.1j, 0.3 + 1.2j):
        p = ThetaParams(tau)
        rng = np.random.default_rng(22)
        checked = 0
        while checked < 10:
            x1, x2, y1, y2 = (rng.uniform(-0.4, 0.4, 4)
                              + 1j * rng.uniform(-0.2, 0.2, 4))
            if abs(x1 - x2) < 0.08 or abs(y1 - y2) < 0.08:
                continue
            got = engine_elliptic_21(tau, x1, x2, y1, y2)
            want = catalog.elliptic_closed_form(x2 - x1, y2 - y1, p)
            assert (got - want).norm() < 1e-11
            checked += 1


# --- engine-level identities -----------------------------------------------------

ENGINES = [
    ("nodal", {"n": 2, "d": 1}),
    ("nodal", {"n": 3, "d": 2}),
    ("cusp", {"n": 2, "d": 1}),
    ("cusp", {"n": 3, "d": 1}),
    ("nodal-semistable", {}),
    ("elliptic", {"tau": 1.1j}),
]


@pytest.mark.parametrize("kind,kw", ENGINES)
def test_engine_aybe_and_unitarity(kind, kw):
    sol = engine_solution(kind, **kw)
    samples = 15 if kind == "elliptic" else 50
    assert verify.aybe(sol, samples=samples, tol=1e-8, seed=30).passed
    assert verify.unitarity(sol, samples=samples, tol=1e-10, seed=31).passed


def test_elliptic_v_shift_invariance():
    rng = np.random.default_rng(32)
    for _ in range(5):
        s = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))
        a = engine_elliptic_21(1.1j, 0.05 + s, 0.43 + s, 0.03, 0.3)
        b = engine_elliptic_21(1.1j, 0.05, 0.43, 0.03, 0.3)
        assert (a - b).norm() < 1e-10


def test_nodal_ratio_invariance():
    rng = np.random.default_rng(33)
    for _ in range(5):
        beta = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        a = engine_nodal(2, 1, 0.7 * beta, 1.4 * beta, 0.5, 1.1)
        b = engine_nodal(2, 1, 0.7, 1.4, 0.5, 1.1)
        assert (a - b).norm() < 1e-11


def test_cusp_difference_invariance():
    rng = np.random.default_rng(34)
    for _ in range(5):
        s = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
        a = engine_cusp(2, 1, 0.1 + s, 0.8 + s, 0.2, 0.9)
        b = engine_cusp(2, 1, 0.1, 0.8, 0.2, 0.9)
        assert (a - b).norm() < 1e-11


def test_sqrt_y_gauge_leaves_ratio_dependence():
    # after conjugating by diag(sqrt(y_i), 1) the nodal (2,1) output depends
    # on y2/y1 only
    from rmx.rmatrix import conjugate_legs

    def gauged(l1, l2, y1, y2):
        t = engine_nodal(2, 1, l1, l2, y1, y2)
        return conjugate_legs(t, np.diag([np.sqrt(complex(y1)), 1]),
                              np.diag([np.sqrt(complex(y2)), 1]))

    a = gauged(0.7, 1.3, 0.4, 1.0)
    b = gauged(0.7, 1.3, 0.4 * 1.9, 1.0 * 1.9)
    assert (a - b).norm() < 1e-11


def test_semistable_pole_order_three():
    # the e12 (x) e12 coefficient blows up like (1 - lam)^-3
    vals = []
    for eps in (0.02, 0.01, 0.005):
        # near the pole the residue system is genuinely ill-conditioned;
        # lift the cap to probe the blowup rate
        t = engine_semistable_nodal_20(1.0, 1.0 + eps, 1.0, 3.0, cond_cap=1e12)
        vals.append(abs(t.coeffs[0, 1, 0, 1]))
    assert vals[1] / vals[0] == pytest.approx(8.0, rel=0.15)
    assert vals[2] / vals[1] == pytest.approx(8.0, rel=0.15)


def test_engine_rejects_bad_input():
    with pytest.raises(EngineError):
        engine_nodal(4, 2, 0.5, 1.0, 0.3, 0.8)     # not coprime
    with pytest.raises(EngineError):
        engine_nodal(2, 1, 0.0, 1.0, 0.3, 0.8)     # lam = 0
    with pytest.raises(EngineError):
        engine_cusp(2, 1, 0.3, 0.9, 0.5, 0.5)      # y1 = y2
    with pytest.raises(EngineError):
        engine_semistable_nodal_20(1.0, 1.0, 0.3, 0.8)


def test_elliptic_coincident_moduli_degenerate():
    # x1 = x2 makes the residue systems singular
    with pytest.raises((DegenerateSystemError, EngineError)):
        rmx_engine = engine_elliptic_21(1.1j, 0.2, 0.2, 0.1, 0.4)


def test_conditioning_guard_near_exceptional_locus():
    # nodal (2,1) degenerates at lam2 -> -lam1 (the 1 - lam^2 denominators)
    with pytest.raises(DegenerateSystemError) as exc:
        engine_nodal(2, 1, 1.0, -1.0 - 1e-9, 0.5, 1.2, cond_cap=1e6)
    assert exc.value.cond is None or exc.value.cond > 1e6


def test_residue_system_well_conditioned_generically():
    rng = np.random.default_rng(35)
    for _ in range(10):
        l1, l2, y1, y2 = ring_points(rng, 4)
        if abs(l1 - l2) < 0.15 or abs(l1 + l2) < 0.15 or abs(y1 - y2) < 0.15:
            continue
        engine_nodal(3, 2, l1, l2, y1, y2, cond_cap=1e6)  # must not raise


def test_engine_holomorphy_second_order_fd():
    # central difference estimates of d/dy2 converge at second order
    f = lambda y2: engine_nodal(2, 1, 0.6, 1.2, 0.5, y2).coeffs
    y2 = 1.1 + 0.2j
    errs = []
    ref = (f(y2 + 1e-5) - f(y2 - 1e-5)) / 2e-5
    for h in (0.08, 0.04):
        errs.append(np.max(np.abs((f(y2 + h) - f(y2 - h)) / (2 * h) - ref)))
    assert errs[1] / errs[0] == pytest.approx(0.25, rel=0.2)


# --- gauges ----------------------------------------------------------------------

def test_identity_gauge_is_identity():
    sol = catalog.get("rat21")
    g = apply_gauge(sol, lambda v, y: np.eye(2))
    r4 = verify.as_four_param(sol)
    pt = (0.3, 0.8, 0.2, 0.9)
    assert (g.evaluator(*pt) - r4(*pt)).norm() < 1e-14


def test_special_gauge_multiplies_by_exponential():
    c = 0.37 + 0.21j
    sol = catalog.get("rat21")
    g = apply_gauge(sol, lambda v, y: np.exp(c * v * y) * np.eye(2))
    r4 = verify.as_four_param(sol)
    rng = np.random.default_rng(36)
    for _ in range(10):
        v1, v2, y1, y2 = ring_points(rng, 4, 0.3, 1.0)
        want = np.exp(c * (v2 - v1) * (y2 - y1)) * r4(v1, v2, y1, y2)
        assert (g.evaluator(v1, v2, y1, y2) - want).norm() < 1e-12


def test_gauged_solution_still_satisfies_aybe():
    g = apply_gauge(catalog.get("rat21"),
                    lambda v, y: np.exp(0.2 * v * y) * np.eye(2))
    assert verify.aybe(g, samples=8, tol=1e-9, seed=37).passed
    assert verify.unitarity(g, samples=8, tol=1e-10, seed=38).passed


def test_singular_gauge_raises():
    g = apply_gauge(catalog.get("rat21"), lambda v, y: np.zeros((2, 2)))
    with pytest.raises(EngineError):
        g.evaluator(0.3, 0.8, 0.2, 0.9)
