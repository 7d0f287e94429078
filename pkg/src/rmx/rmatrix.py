# src/rmx/rmatrix.py

"""Construction engines for the geometric associative r-matrices.

Each engine realizes the evaluation/residue recipe: describe the space Pi of
homomorphisms between two (twisted) bundle gluing data that are compatible
over the singular fiber, then compose

    Mat_n(C) --res^{-1}--> Pi --ev--> Mat_n(C)

and convert the resulting linear map to a tensor via the trace pairing
(e_{ij} -> alpha e_{kl}  corresponds to  alpha e_{ji} (x) e_{kl}).

For the singular curves Pi is a space of matrices of homogeneous polynomials
in (z0, z1) and the compatibility constraint is an exact linear system on
the coefficients; for the elliptic curve Pi is spanned by four explicit
theta-type matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi

import numpy as np

from . import bundles
from .catalog import RSolution
from .tensorcore import LinMap, Tensor2, linmap_to_tensor
from .thetafn import ThetaParams, theta_j

DEFAULT_COND_CAP = 1e6


class EngineError(RuntimeError):
    pass


class DegenerateSystemError(EngineError):
    """Residue system singular or ill-conditioned at these parameters."""

    def __init__(self, msg, cond=None):
        super().__init__(msg)
        self.cond = cond


@dataclass(frozen=True)
class EngineConfig:
    """Engine configuration record.  The residue functional's differential
    form is baked per curve type: dz/z on the nodal curve (prefactor 1/y1),
    dz on the cuspidal curve, dz on the torus (theta-normalized)."""

    kind: str                     # "nodal" | "cuspidal" | "elliptic" | "nodal-semistable"
    n: int
    d: int
    tau: complex = 1.1j           # elliptic only
    tol: float = 1e-14
    cond_cap: float = DEFAULT_COND_CAP


# --- polynomial Hom spaces on P^1 -------------------------------------------

class HomSpace:
    """Matrices of homogeneous polynomials F with block degrees deg[i][j],
    restricted by a gluing constraint; entries are q = sum_k c_k z0^(d-k) z1^k.

    basis has shape (dim, n, n, max_deg+1): basis[b, i, j, k] is the
    coefficient c_k of basis element b at entry (i, j).
    """

    def __init__(self, degrees: np.ndarray, basis: np.ndarray):
        self.degrees = degrees
        self.basis = basis
        self.dim = basis.shape[0]
        self.n = degrees.shape[0]

    def at_affine(self, y: complex) -> np.ndarray:
        """Evaluate every basis element at (z0, z1) = (1, y): shape (dim, n, n)."""
        kmax = self.basis.shape[-1]
        powers = np.array([complex(y)**k for k in range(kmax)])
        return np.einsum("bijk,k->bij", self.basis, powers)


def _entry_degrees(n1: int, n2: int, semistable: bool) -> np.ndarray:
    n = n1 + n2
    deg = np.empty((n, n), dtype=int)
    if semistable:
        deg[:] = 1
        return deg
    # source O^{n1} + O(1)^{n2}, target O(1)^{n1} + O(2)^{n2}
    for i in range(n):
        for j in range(n):
            ti = 1 if i < n1 else 2
            sj = 0 if j < n1 else 1
            deg[i, j] = ti - sj
    return deg


def _coeff_layout(deg: np.ndarray):
    """Flat layout of polynomial coefficients: list of (i, j, k) slots."""
    slots = []
    n = deg.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(deg[i, j] + 1):
                slots.append((i, j, k))
    return slots


def _nullspace(a: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Rows span the right nullspace of a (SVD threshold relative to s[0])."""
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > rtol * s[0])) if s.size else 0
    return vh[rank:].conj()


def _hom_space_glued(deg: np.ndarray, m0_src: np.ndarray, m0_dst: np.ndarray,
                     cuspidal: bool, meps_src=None, meps_dst=None) -> HomSpace:
    """Hom space cut out by the gluing constraint.

    Nodal: F(0) m0_src = m0_dst F(inf) with F(0)/F(inf) the (z1 - z0)-
    normalized evaluations.  Cuspidal: F1 + F0 meps_src = meps_dst F0 over
    C[eps]/eps^2, with F0 + eps F1 the z1-normalized evaluation.
    """
    n = deg.shape[0]
    slots = _coeff_layout(deg)
    nc = len(slots)
    kmax = int(deg.max()) + 1

    rows = []
    for idx in range(nc):
        vec = np.zeros(nc)
        vec[idx] = 1.0
        coeff = np.zeros((n, n, kmax), dtype=complex)
        i, j, k = slots[idx]
        coeff[i, j, k] = 1.0
        if not cuspidal:
            f0 = np.array([[(-1.0)**deg[i, j] * coeff[i, j, 0]
                            for j in range(n)] for i in range(n)])
            finf = np.array([[coeff[i, j, deg[i, j]]
                              for j in range(n)] for i in range(n)])
            eq = f0 @ m0_src - m0_dst @ finf
        else:
            f0 = np.array([[coeff[i, j, deg[i, j]]
                            for j in range(n)] for i in range(n)])
            f1 = np.array([[coeff[i, j, deg[i, j] - 1] if deg[i, j] >= 1 else 0.0
                            for j in range(n)] for i in range(n)])
            eq = f1 + f0 @ meps_src - meps_dst @ f0
        rows.append(eq.ravel())
    constraint = np.array(rows).T  # (n^2) x nc

    ns = _nullspace(constraint)
    if ns.shape[0] != n * n:
        raise DegenerateSystemError(
            f"gluing constraint has nullity {ns.shape[0]}, expected {n*n} "
            "(parameters on an exceptional locus)")
    basis = np.zeros((ns.shape[0], n, n, kmax), dtype=complex)
    for b in range(ns.shape[0]):
        for idx, (i, j, k) in enumerate(slots):
            basis[b, i, j, k] = ns[b, idx]
    return HomSpace(deg, basis)


def _compose_ev_res(dim: int, n: int, res_vals: np.ndarray, ev_vals: np.ndarray,
                    cond_cap: float) -> Tensor2:
    """LinMap ev o res^{-1} from per-basis residue/evaluation matrices."""
    r_mat = res_vals.reshape(dim, n * n).T      # maps coeff vector -> Mat_n
    e_mat = ev_vals.reshape(dim, n * n).T
    cond = np.linalg.cond(r_mat)
    if not np.isfinite(cond) or cond > cond_cap:
        raise DegenerateSystemError(
            f"residue system condition number {cond:.3g} exceeds cap "
            f"{cond_cap:.3g}", cond=cond)
    # action on the standard basis e_{ab}: solve res(F) = e_{ab}, apply ev
    sol = np.linalg.solve(r_mat, np.eye(n * n, dtype=complex))
    lin = (e_mat @ sol)                          # (n^2)x(n^2): basis-to-basis
    action = lin.T.reshape(n, n, n, n)           # [a,b,k,l]
    return linmap_to_tensor(LinMap(n, action))


def engine_nodal(n: int, d: int, lam1: complex, lam2: complex,
                 y1: complex, y2: complex,
                 cond_cap: float = DEFAULT_COND_CAP) -> Tensor2:
    """Geometric r-matrix of the family of stable bundles of rank n, degree d
    (0 < d < n coprime) on the nodal cubic, at moduli points lam1, lam2 in C*
    and curve points y1 != y2 in C*.

    Depends on lam2/lam1 only; the gluing data is the Jacobian-compatible
    family with every nonzero canonical entry equal to lam.
    """
    if gcd(n, d) != 1 or not (0 < d < n):
        raise EngineError(f"(n, d) = ({n}, {d}) must be coprime with 0 < d < n")
    if lam1 == 0 or lam2 == 0 or y1 == 0 or y2 == 0:
        raise EngineError("nodal parameters must be nonzero")
    if y1 == y2 or lam1 == lam2:
        raise EngineError("coincident spectral points")
    n1, n2 = n - d, d
    deg = _entry_degrees(n1, n2, semistable=False)
    m_src = bundles.jacobian_form_nodal(n1, n2, lam1).m0
    m_dst = complex(y1) * bundles.jacobian_form_nodal(n1, n2, lam2).m0
    space = _hom_space_glued(deg, m_src, m_dst, cuspidal=False)
    res_vals = space.at_affine(y1) / y1
    ev_vals = space.at_affine(y2) / (y2 - y1)
    return _compose_ev_res(space.dim, space.n, res_vals, ev_vals, cond_cap)


def engine_semistable_nodal_20(lam1: complex, lam2: complex,
                               y1: complex, y2: complex,
                               cond_cap: float = DEFAULT_COND_CAP) -> Tensor2:
    """r-matrix of the rank-2 degree-0 semistable family m(0) = lam J_2(1)
    on the nodal cubic; all polynomial blocks have degree one.  Pole of
    order three in the moduli direction at lam1 = lam2."""
    if lam1 == 0 or lam2 == 0 or y1 == 0 or y2 == 0:
        raise EngineError("nodal parameters must be nonzero")
    if y1 == y2:
        raise EngineError("coincident curve points")
    if lam1 == lam2:
        raise EngineError("residue system degenerate at lam1 = lam2")
    j2 = np.array([[1, 1], [0, 1]], dtype=complex)
    deg = _entry_degrees(2, 0, semistable=True)
    m_src = complex(lam1) * j2
    m_dst = complex(y1) * complex(lam2) * j2
    space = _hom_space_glued(deg, m_src, m_dst, cuspidal=False)
    res_vals = space.at_affine(y1) / y1
    ev_vals = space.at_affine(y2) / (y2 - y1)
    return _compose_ev_res(space.dim, space.n, res_vals, ev_vals, cond_cap)


def engine_cusp(n: int, d: int, lam1: complex, lam2: complex,
                y1: complex, y2: complex,
                cond_cap: float = DEFAULT_COND_CAP) -> Tensor2:
    """Geometric r-matrix of the family of stable bundles of rank n, degree d
    on the cuspidal cubic; moduli points lam1, lam2 in C, curve points
    y1 != y2 in C.  Depends on lam2 - lam1 only.

    The gluing family is 1 + eps(lam I + Z) with Z the off-diagonal canonical
    pattern; twisting by O(y1) shifts the target matrix by -y1.
    """
    if gcd(n, d) != 1 or not (0 < d < n):
        raise EngineError(f"(n, d) = ({n}, {d}) must be coprime with 0 < d < n")
    if y1 == y2:
        raise EngineError("coincident curve points")
    if lam1 == lam2:
        raise EngineError("coincident moduli points")
    n1, n2 = n - d, d
    deg = _entry_degrees(n1, n2, semistable=False)
    z_pat = bundles.canonical_cusp_matrix(n1, n2, 0.0)
    np.fill_diagonal(z_pat, 0.0)
    eye = np.eye(n, dtype=complex)
    meps_src = z_pat + complex(lam1) * eye
    meps_dst = z_pat + (complex(lam2) - complex(y1)) * eye
    space = _hom_space_glued(deg, None, None, cuspidal=True,
                             meps_src=meps_src, meps_dst=meps_dst)
    res_vals = space.at_affine(y1)
    ev_vals = space.at_affine(y2) / (y2 - y1)
    return _compose_ev_res(space.dim, space.n, res_vals, ev_vals, cond_cap)


# --- elliptic engine ---------------------------------------------------------

def engine_elliptic_21(tau: complex, x1: complex, x2: complex,
                       y1: complex, y2: complex, tol: float = 1e-14,
                       cond_cap: float = DEFAULT_COND_CAP) -> Tensor2:
    """Geometric r-matrix of the rank-2 degree-1 family on the torus
    C/(Z + tau Z), from the four-dimensional theta basis of the compatible
    homomorphisms, with the diagonal post-gauge diag(e(y/2), e(-tau/4)) that
    makes the output a function of (x2 - x1, y2 - y1) alone."""
    p = ThetaParams(tau, tol)
    tau = complex(tau)
    x = complex(x2) - complex(x1)
    y1, y2 = complex(y1), complex(y2)
    if y1 == y2:
        raise EngineError("coincident curve points")
    q_x = np.exp(-1j * pi * x)

    def e(w):
        return np.exp(-2j * pi * w)

    def phi(z):
        return e(z + tau)

    def psi(z):  # automorphy factor of O(y1)
        return -e(z + tau - y1)

    p4 = ThetaParams(4 * tau, tol)

    def u(k, z):
        return theta_j(3 if k == 1 else 2, 2 * (z - y1 + (x + tau) / 2), p4)

    def v(k, z):
        return theta_j(3 if k == 1 else 2, 2 * (z - y1 + x / 2), p4)

    def basis_mat(b, z):
        if b in (0, 1):      # F_1, F_2: diagonal
            k = b + 1
            return np.array([
                [u(k, z), 0.0],
                [0.0, u(k, z + tau) / (q_x * psi(z))],
            ], dtype=complex)
        k = b - 1            # G_1, G_2: off-diagonal
        return np.array([
            [0.0, v(k, z)],
            [phi(z) * v(k, z + tau) / (q_x * psi(z)), 0.0],
        ], dtype=complex)

    theta3p = theta_j(3, (1 + tau) / 2, p, deriv=1)
    ev_den = theta_j(3, (y2 - y1) + (1 + tau) / 2, p)
    res_vals = np.stack([basis_mat(b, y1) for b in range(4)]) / theta3p
    ev_vals = np.stack([basis_mat(b, y2) for b in range(4)]) / ev_den

    raw = _compose_ev_res(4, 2, res_vals, ev_vals, cond_cap)

    g1 = np.diag([e(y1 / 2), e(-tau / 4)])
    g2 = np.diag([e(y2 / 2), e(-tau / 4)])
    return conjugate_legs(raw, g1, g2)


def conjugate_legs(t: Tensor2, a1: np.ndarray, a2: np.ndarray) -> Tensor2:
    """(a1 (x) a2) t (a1^{-1} (x) a2^{-1})."""
    b1 = np.linalg.inv(a1)
    b2 = np.linalg.inv(a2)
    c = np.einsum("ia,abkl,bj->ijkl", a1, t.coeffs, b1)
    c = np.einsum("ka,ijab,bl->ijkl", a2, c, b2)
    return Tensor2(t.n, c)


# --- gauge transformations ---------------------------------------------------

def apply_gauge(sol: RSolution, phi) -> RSolution:
    """Gauge-transform a solution by a pointwise invertible matrix function
    phi(v, y):

    r'(v1,v2;y1,y2) = (phi(v1,y1) (x) phi(v2,y2)) r (phi(v2,y1)^{-1} (x) phi(v1,y2)^{-1})

    The result is a four-parameter solution.
    """
    from .verify import as_four_param
    r4 = as_four_param(sol)

    def ev(v1, v2, y1, y2):
        t = r4(v1, v2, y1, y2)
        a1, a2 = np.asarray(phi(v1, y1)), np.asarray(phi(v2, y2))
        c1, c2 = np.asarray(phi(v2, y1)), np.asarray(phi(v1, y2))
        try:
            i1, i2 = np.linalg.inv(c1), np.linalg.inv(c2)
        except np.linalg.LinAlgError:
            raise EngineError("gauge matrix singular at a sample point") from None
        c = np.einsum("ia,abkl,bj->ijkl", a1, t.coeffs, i1)
        c = np.einsum("ka,ijab,bl->ijkl", a2, c, i2)
        return Tensor2(t.n, c)

    return RSolution(f"gauge({sol.name})", "v12_y12", sol.n, ev,
                     poles=sol.poles, params=dict(sol.params))


# --- engine outputs as solutions --------------------------------------------

def engine_solution(kind: str, n: int = 2, d: int = 1, tau: complex = 1.1j,
                    cond_cap: float = DEFAULT_COND_CAP) -> RSolution:
    """Wrap an engine as a four-parameter RSolution for the verifier."""
    cfg = EngineConfig(kind, n, d, tau=tau, cond_cap=cond_cap)
    return engine_from_config(cfg)


def engine_from_config(cfg: EngineConfig) -> RSolution:
    kind, n, d = cfg.kind, cfg.n, cfg.d
    if kind == "elliptic":
        if (n, d) != (2, 1):
            raise EngineError("elliptic engine implemented for (n, d) = (2, 1)")
        ev = lambda v1, v2, y1, y2: engine_elliptic_21(
            cfg.tau, v1, v2, y1, y2, tol=cfg.tol, cond_cap=cfg.cond_cap)
        name = f"engine-elliptic({n},{d})"
    elif kind == "nodal":
        ev = lambda v1, v2, y1, y2: engine_nodal(n, d, v1, v2, y1, y2,
                                                 cond_cap=cfg.cond_cap)
        name = f"engine-nodal({n},{d})"
    elif kind in ("cusp", "cuspidal"):
        ev = lambda v1, v2, y1, y2: engine_cusp(n, d, v1, v2, y1, y2,
                                                cond_cap=cfg.cond_cap)
        name = f"engine-cuspidal({n},{d})"
    elif kind == "nodal-semistable":
        ev = lambda v1, v2, y1, y2: engine_semistable_nodal_20(
            v1, v2, y1, y2, cond_cap=cfg.cond_cap)
        name = "engine-nodal-semistable(2,0)"
    else:
        raise ValueError(f"unknown engine kind {kind!r}")
    return RSolution(name, "v12_y12", n, ev,
                     params={"kind": kind, "n": n, "d": d})
