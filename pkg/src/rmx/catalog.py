# src/rmx/catalog.py

"""Closed-form evaluators for the named r-matrix solutions.

Each entry is an RSolution: an evaluatable family (spectral parameters) ->
Tensor2 with a declared arity:

    "vdiff_ydiff"   r(v; y)        associative, difference in both slots
    "vdiff_y12"     r(v; y1, y2)   associative, difference in v only
    "v12_y12"       r(v1,v2;y1,y2) associative, no reduction
    "cl_ydiff"      r(y)           classical, difference form
    "cl_y12"        r(y1, y2)      classical, two-point form

Trigonometric entries are written with complex exponentials directly so the
catalog stays independent of the theta-function code paths used by the
construction engines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .tensorcore import E12, E21, GAMMA, H, ID2, SIGMA, Tensor2
from .thetafn import ThetaParams, theta_j, theta1_prime_at_0, sn, cn, dn


def _t(a, b) -> Tensor2:
    return Tensor2.simple(a, b)


def _csin(z):
    return np.sin(complex(z))


def _ccos(z):
    return np.cos(complex(z))


@dataclass(frozen=True)
class RSolution:
    name: str
    arity: str
    n: int
    evaluator: Callable[..., Tensor2]
    poles: str = ""
    params: dict = field(default_factory=dict)

    def __call__(self, *args) -> Tensor2:
        return self.evaluator(*args)

    @property
    def is_classical(self) -> bool:
        return self.arity.startswith("cl_")

    def nargs(self) -> int:
        return {"vdiff_ydiff": 2, "vdiff_y12": 3, "v12_y12": 4,
                "cl_ydiff": 1, "cl_y12": 2}[self.arity]


# --- associative solutions ---------------------------------------------------

def _ell21(v, y, p: ThetaParams) -> Tensor2:
    """Elliptic rank-2 degree-1 solution, normalized so res_v = (1/4) 1(x)1."""
    pref = 0.25 * theta1_prime_at_0(p) / theta_j(1, y, p)
    out = pref * (theta_j(1, y + v, p) / theta_j(1, v, p)) * _t(ID2, ID2)
    out = out + pref * (theta_j(2, y + v, p) / theta_j(2, v, p)) * _t(H, H)
    out = out + pref * (theta_j(3, y + v, p) / theta_j(3, v, p)) * _t(SIGMA, SIGMA)
    out = out + pref * (theta_j(4, y + v, p) / theta_j(4, v, p)) * _t(GAMMA, GAMMA)
    return out


def elliptic_closed_form(x, y, p: ThetaParams) -> Tensor2:
    """Elliptic solution in the half-argument normalization produced by the
    rank-2 degree-1 construction: prefactor 1/2 and theta ratios at (y+x/2, x/2).
    Identical to 2 * _ell21(x/2, y)."""
    pref = 0.5 * theta1_prime_at_0(p) / theta_j(1, y, p)
    out = pref * (theta_j(1, y + x / 2, p) / theta_j(1, x / 2, p)) * _t(ID2, ID2)
    out = out + pref * (theta_j(2, y + x / 2, p) / theta_j(2, x / 2, p)) * _t(H, H)
    out = out + pref * (theta_j(3, y + x / 2, p) / theta_j(3, x / 2, p)) * _t(SIGMA, SIGMA)
    out = out + pref * (theta_j(4, y + x / 2, p) / theta_j(4, x / 2, p)) * _t(GAMMA, GAMMA)
    return out


def _ell21_classical(y, p: ThetaParams) -> Tensor2:
    s = sn(y, p)
    return 0.5 * ((cn(y, p) / s) * _t(H, H)
                  + (1.0 / s) * _t(GAMMA, GAMMA)
                  + (dn(y, p) / s) * _t(SIGMA, SIGMA))


def _trg21(v, y) -> Tensor2:
    sv, sy = _csin(v), _csin(y)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    out = (_csin(y + v) / (sy * sv)) * (_t(e11, e11) + _t(e22, e22))
    out = out + (1.0 / sv) * (_t(e11, e22) + _t(e22, e11))
    out = out + (1.0 / sy) * (_t(E12, E21) + _t(E21, E12))
    out = out + _csin(y + v) * _t(E21, E21)
    return out


def nodal21_multiplicative(lam, y1, y2) -> Tensor2:
    """Rank-2 degree-1 nodal solution before the sqrt-y gauge, lam = lam2/lam1."""
    lam, y1, y2 = complex(lam), complex(y1), complex(y2)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    dy = y2 - y1
    a = (y2 - lam**2 * y1) / (dy * (1 - lam**2))
    out = a * (_t(e11, e11) + _t(e22, e22))
    out = out + (lam / (1 - lam**2)) * (_t(e11, e22) + _t(e22, e11))
    out = out + (y1 / dy) * _t(E21, E12) + (y2 / dy) * _t(E12, E21)
    out = out + ((y2 - lam**2 * y1) / lam) * _t(E21, E21)
    return out


def semistable20_multiplicative(lam, y) -> Tensor2:
    """Rank-2 degree-0 semistable nodal solution, lam = lam2/lam1, y = y2/y1."""
    lam, y = complex(lam), complex(y)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    a = (y - lam) / ((y - 1) * (1 - lam))
    out = a * (_t(e11, e11) + _t(e22, e22) + _t(E21, E12) + _t(E12, E21))
    out = out + (lam / (1 - lam) ** 2) * (_t(E12, H) - _t(H, E12))
    out = out - (lam * (1 + lam) / (1 - lam) ** 3) * _t(E12, E12)
    return out


def _cherednik(y) -> Tensor2:
    sy = _csin(y)
    return (0.5 * _ccos(y) / sy) * _t(H, H) \
        + (1.0 / sy) * (_t(E12, E21) + _t(E21, E12)) \
        + sy * _t(E21, E21)


def _rat21(v, y1, y2) -> Tensor2:
    lam, y1, y2 = complex(v), complex(y1), complex(y2)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    dy = y2 - y1
    out = (1 / (2 * lam)) * _t(ID2, ID2)
    out = out + (1 / dy) * (_t(e11, e11) + _t(e22, e22) + _t(E12, E21) + _t(E21, E12))
    out = out + ((lam - y1) / 2) * _t(E21, H)
    out = out + ((lam + y2) / 2) * _t(H, E21)
    out = out - (lam * (lam - y1) * (lam + y2) / 2) * _t(E21, E21)
    return out


def _stolin(y1, y2) -> Tensor2:
    y1, y2 = complex(y1), complex(y2)
    dy = y2 - y1
    return (1 / dy) * (0.5 * _t(H, H) + _t(E12, E21) + _t(E21, E12)) \
        + (y2 / 2) * _t(H, E21) - (y1 / 2) * _t(E21, H)


def _stolin_difference(y) -> Tensor2:
    y = complex(y)
    return (1 / y) * (0.5 * _t(H, H) + _t(E12, E21) + _t(E21, E12)) \
        + y * (_t(E21, H) + _t(H, E21)) - y**3 * _t(E21, E21)


def _yang(y) -> Tensor2:
    return (1 / complex(y)) * (0.5 * _t(H, H) + _t(E12, E21) + _t(E21, E12))


def _rat21_degenerate(v, y) -> Tensor2:
    v, y = complex(v), complex(y)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    return (1 / (2 * v)) * _t(ID2, ID2) \
        + (1 / y) * (_t(e11, e11) + _t(e22, e22) + _t(E12, E21) + _t(E21, E12))


def _trg20(v, y) -> Tensor2:
    sv, sy = _csin(v), _csin(y)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    out = (_csin(y + v) / (2 * sy * sv)) * (
        _t(e11, e11) + _t(e22, e22) + _t(E21, E12) + _t(E12, E21))
    out = out + (1 / (2 * sv**2)) * (_t(E12, H) - _t(H, E12))
    out = out - (_ccos(v) / sv**3) * _t(E12, E12)
    return out


# --- gauge used to bring Stolin's solution to difference form ---------------

def stolin_gauge(y) -> np.ndarray:
    """Matrix of the sl2 automorphism phi(y) in the ordered basis
    (h, e12, e21):

        phi(y) h   = h - 2 y^2 e21
        phi(y) e12 = (y^2/4) h + (1/4) e12 - (y^4/4) e21
        phi(y) e21 = 4 e21

    The h-component of phi(y)e12 is forced by phi being a Lie algebra
    automorphism ([phi h, phi e12] = phi [h, e12] pins it to +y^2/4).
    """
    y = complex(y)
    return np.array([
        [1, (y**2) / 4, 0],
        [0, 0.25, 0],
        [-2 * y**2, -(y**4) / 4, 4],
    ], dtype=complex)


def apply_sl2_automorphism(mat3: np.ndarray, t: Tensor2, leg: int) -> Tensor2:
    """Apply an sl2 automorphism (3x3 matrix in the ordered basis h, e12,
    e21) to one tensor leg.  The tensor must lie in sl2 (x) sl2."""
    basis = [H, E12, E21]
    # coordinates: for traceless M = a*h + b*e12 + c*e21 we have
    # a = M[0,0], b = M[0,1], c = M[1,0]
    slots = [(0, 0), (0, 1), (1, 0)]
    coords = np.empty((3, 3), dtype=complex)
    for i, (ia, ib) in enumerate(slots):
        for j, (ja, jb) in enumerate(slots):
            coords[i, j] = t.coeffs[ia, ib, ja, jb]
    if leg == 1:
        coords = mat3 @ coords
    elif leg == 2:
        coords = coords @ mat3.T
    else:
        raise ValueError("leg must be 1 or 2")
    out = Tensor2.zero(2)
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            out = out + coords[i, j] * _t(bi, bj)
    return out


# --- registry ---------------------------------------------------------------

DEFAULT_TAU = 1.1j

_CLASSICAL_PARTNER = {
    "ell21": "ell21_classical",
    "trg21": "cherednik",
    "rat21": "stolin",
    "rat21_degenerate": "yang",
}

NAMES = (
    "ell21", "trg21", "rat21", "trg20_semistable", "ell21_classical",
    "cherednik", "stolin", "stolin_difference_s", "yang", "rat21_degenerate",
)


def get(name: str, tau: complex = DEFAULT_TAU, tol: float = 1e-14) -> RSolution:
    """Look up a named solution.  tau only matters for the elliptic entries."""
    if name == "ell21":
        p = ThetaParams(tau, tol)
        return RSolution(name, "vdiff_ydiff", 2, lambda v, y: _ell21(v, y, p),
                         poles="v = 0, y = 0 (mod lattice)", params={"tau": tau})
    if name == "ell21_classical":
        p = ThetaParams(tau, tol)
        return RSolution(name, "cl_ydiff", 2, lambda y: _ell21_classical(y, p),
                         poles="y = 0 (mod lattice)", params={"tau": tau})
    if name == "trg21":
        return RSolution(name, "vdiff_ydiff", 2, _trg21, poles="v, y = 0 mod pi")
    if name == "cherednik":
        return RSolution(name, "cl_ydiff", 2, _cherednik, poles="y = 0 mod pi")
    if name == "rat21":
        return RSolution(name, "vdiff_y12", 2, _rat21, poles="v = 0, y1 = y2")
    if name == "stolin":
        return RSolution(name, "cl_y12", 2, _stolin, poles="y1 = y2")
    if name == "stolin_difference_s":
        return RSolution(name, "cl_ydiff", 2, _stolin_difference, poles="y = 0")
    if name == "yang":
        return RSolution(name, "cl_ydiff", 2, _yang, poles="y = 0")
    if name == "rat21_degenerate":
        return RSolution(name, "vdiff_ydiff", 2, _rat21_degenerate,
                         poles="v = 0, y = 0")
    if name == "trg20_semistable":
        return RSolution(name, "vdiff_ydiff", 2, _trg20,
                         poles="v, y = 0 mod pi; pole of order 3 in v")
    raise KeyError(f"unknown solution name {name!r}; known: {', '.join(NAMES)}")


def classical_of(name: str, tau: complex = DEFAULT_TAU) -> RSolution:
    """The classical (pr(x)pr, v->0) partner of a named associative solution."""
    if name == "trg20_semistable":
        raise ValueError("trg20_semistable has no classical limit "
                         "(higher-order pole in v)")
    try:
        partner = _CLASSICAL_PARTNER[name]
    except KeyError:
        raise ValueError(f"no classical partner recorded for {name!r}") from None
    return get(partner, tau=tau)
