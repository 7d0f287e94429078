# src/rmx/bundles.py

"""Gluing data for vector bundles over the normalization of a Weierstrass
cubic: canonical matrix forms of simple bundles on nodal/cuspidal curves,
Jacobian-compatible families, Atiyah bundles, endomorphism-space
certificates, and elliptic automorphy factors.

A bundle on a singular curve is encoded by its pullback to P^1 together
with gluing data over the preimage of the singular point: a pair of
invertible matrices (m(0), m(infty)) in the nodal case, a dual-number
matrix 1 + eps*mEps over C[eps]/eps^2 in the cuspidal case.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi

import numpy as np

SVD_RTOL = 1e-10  # rank threshold relative to the largest singular value


@dataclass(frozen=True)
class NodalTriple:
    n1: int
    n2: int
    m0: np.ndarray
    mInf: np.ndarray

    def __post_init__(self):
        n = self.n1 + self.n2
        m0 = np.asarray(self.m0, dtype=complex)
        mi = np.asarray(self.mInf, dtype=complex)
        if m0.shape != (n, n) or mi.shape != (n, n):
            raise ValueError(f"gluing matrices must be {n}x{n}")
        if abs(np.linalg.det(m0)) < 1e-300 or abs(np.linalg.det(mi)) < 1e-300:
            raise ValueError("gluing matrices must be invertible")
        object.__setattr__(self, "m0", m0)
        object.__setattr__(self, "mInf", mi)

    @property
    def n(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class CuspTriple:
    """1 + eps*mEps over C[eps]/eps^2; the lower-left n2 x n1 block of mEps
    is the 'non-existing' block: stored as written but never read by the
    morphism constraints."""

    n1: int
    n2: int
    mEps: np.ndarray

    def __post_init__(self):
        n = self.n1 + self.n2
        m = np.asarray(self.mEps, dtype=complex)
        if m.shape != (n, n):
            raise ValueError(f"mEps must be {n}x{n}")
        object.__setattr__(self, "mEps", m)

    @property
    def n(self) -> int:
        return self.n1 + self.n2


def _require_coprime(n1: int, n2: int):
    if n1 < 1 or n2 < 1:
        raise ValueError("block sizes must be positive")
    if gcd(n1, n2) != 1:
        raise ValueError(f"({n1}, {n2}) must be coprime")


def _reduction_chain(n1: int, n2: int) -> list:
    """Euclidean chain from (n1, n2) down to (1, 1)."""
    chain = []
    while (n1, n2) != (1, 1):
        chain.append((n1, n2))
        if n1 > n2:
            n1 -= n2
        else:
            n2 -= n1
    return chain[::-1]


def canonical_nodal_matrix(n1: int, n2: int, lam: complex) -> np.ndarray:
    """Canonical m(0) of the simple bundle class M_{n1,n2}(lam): built from
    [[0,1],[lam,0]] by the two recursive block-insertion rules.  The result
    has exactly one nonzero entry per row and column; the single lam sits in
    the last row."""
    _require_coprime(n1, n2)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    m = np.array([[0, 1], [lam, 0]], dtype=complex)
    m1, m2 = 1, 1
    for (t1, t2) in _reduction_chain(n1, n2):
        x = m[:m1, :m1]
        y = m[:m1, m1:]
        z = m[m1:, :m1]
        w = m[m1:, m1:]
        if t1 == m1 + m2:      # (m1, m2) -> (m1 + m2, m2)
            new = np.zeros((t1 + t2, t1 + t2), dtype=complex)
            new[:m1, :m1] = x
            new[:m1, m1:m1 + m2] = y
            new[m1:m1 + m2, m1 + m2:] = np.eye(m2)
            new[m1 + m2:, :m1] = z
            new[m1 + m2:, m1:m1 + m2] = w
        else:                  # (m1, m2) -> (m1, m1 + m2)
            new = np.zeros((t1 + t2, t1 + t2), dtype=complex)
            new[:m1, m1:2 * m1] = np.eye(m1)
            new[m1:, :m1] = np.vstack([x, z])
            new[m1:, 2 * m1:] = np.vstack([y, w])
        m, m1, m2 = new, t1, t2
    return m


def canonical_nodal(n1: int, n2: int, lam: complex) -> NodalTriple:
    m = canonical_nodal_matrix(n1, n2, lam)
    return NodalTriple(n1, n2, m, np.eye(n1 + n2, dtype=complex))


def canonical_cusp_matrix(n1: int, n2: int, lam: complex) -> np.ndarray:
    """Canonical mEps of the cuspidal M_{n1,n2}(lam), built from
    [[lam,1],[x,0]] by reversing the reduction steps.  tr = lam; the current
    lower-left n2 x n1 block is the masked one (stored as zeros)."""
    _require_coprime(n1, n2)
    m = np.array([[lam, 1], [0, 0]], dtype=complex)
    m1, m2 = 1, 1
    for (t1, t2) in _reduction_chain(n1, n2):
        x = m[:m1, :m1]
        y = m[:m1, m1:]
        w = m[m1:, m1:]
        new = np.zeros((t1 + t2, t1 + t2), dtype=complex)
        if t1 == m1 + m2:      # (m1, m2) -> (m1 + m2, m2)
            new[:m1, :m1] = x
            new[:m1, m1:m1 + m2] = y
            new[m1:m1 + m2, m1:m1 + m2] = w
            new[m1:m1 + m2, m1 + m2:] = np.eye(m2)
        else:                  # (m1, m2) -> (m1, m1 + m2)
            new[:m1, m1:2 * m1] = np.eye(m1)
            new[m1:2 * m1, m1:2 * m1] = x
            new[m1:2 * m1, 2 * m1:] = y
            new[2 * m1:, 2 * m1:] = w
        m, m1, m2 = new, t1, t2
    return m


def canonical_cusp(n1: int, n2: int, lam: complex) -> CuspTriple:
    return CuspTriple(n1, n2, canonical_cusp_matrix(n1, n2, lam))


def jacobian_form_nodal(n1: int, n2: int, t: complex) -> NodalTriple:
    """Jacobian-compatible family Ntilde_{n1,n2}(t): the canonical pattern
    with every nonzero entry replaced by t, so Ntilde(beta*t) =
    beta*Ntilde(t).  The determinant coordinate is lam = +-t^n."""
    if t == 0:
        raise ValueError("t must be nonzero")
    pattern = canonical_nodal_matrix(n1, n2, 1.0)
    return NodalTriple(n1, n2, t * (pattern != 0), np.eye(n1 + n2, dtype=complex))


def jacobian_form_cusp(n1: int, n2: int, lam: complex) -> CuspTriple:
    """N_{n1,n2}(lam): canonical pattern with every diagonal entry set to
    lam/n, so that beta*1 + N(lam) = N(n*beta + lam)."""
    n = n1 + n2
    m = canonical_cusp_matrix(n1, n2, 0.0)
    np.fill_diagonal(m, complex(lam) / n)
    return CuspTriple(n1, n2, m)


def jacobian_form(kind: str, n1: int, n2: int, value: complex):
    if kind == "nodal":
        return jacobian_form_nodal(n1, n2, value)
    if kind in ("cusp", "cuspidal"):
        return jacobian_form_cusp(n1, n2, value)
    raise ValueError(f"unknown curve kind {kind!r}")


def atiyah_nodal(m: int) -> NodalTriple:
    """Atiyah bundle of rank m on the nodal curve: (J_m(1), I_m), blocks (m, 0)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    j = np.eye(m, dtype=complex) + np.diag(np.ones(m - 1), 1)
    return NodalTriple(m, 0, j, np.eye(m, dtype=complex))


def det_triple(triple) -> complex:
    """Determinant line-bundle coordinate: det m(0)/det m(infty) for a nodal
    triple, tr(mEps) (the eps-coefficient of det(1 + eps mEps)) for a
    cuspidal one."""
    if isinstance(triple, NodalTriple):
        return complex(np.linalg.det(triple.m0) / np.linalg.det(triple.mInf))
    if isinstance(triple, CuspTriple):
        return complex(np.trace(triple.mEps))
    raise TypeError(f"expected a bundle triple, got {type(triple).__name__}")


def _nullity(rows: list, ncols: int) -> int:
    a = np.array(rows, dtype=complex).reshape(-1, ncols)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0:
        return ncols
    return int(np.sum(sv <= SVD_RTOL * sv[0])) + max(0, ncols - len(sv))


def endo_dimension(triple) -> int:
    """Dimension of the endomorphism space of the triple; 1 certifies
    simplicity.

    Nodal: morphisms are (S0, Sinf, f) with S0, Sinf sharing diagonal blocks
    (A, B), zero upper-right block and independent lower-left blocks, and
    S0 m0 = m0 f, Sinf mInf = mInf f.  Cuspidal: a single block matrix S
    with the three block equations of S M = M S, the lower-left block of
    both products being ignored.
    """
    if isinstance(triple, NodalTriple):
        return _endo_dim_nodal(triple)
    if isinstance(triple, CuspTriple):
        return _endo_dim_cusp(triple)
    raise TypeError(f"expected a bundle triple, got {type(triple).__name__}")


def _endo_dim_nodal(t: NodalTriple) -> int:
    n1, n2, n = t.n1, t.n2, t.n
    # unknowns: A (n1^2), B (n2^2), C0, Cinf (n2*n1 each), f (n^2)
    sizes = [n1 * n1, n2 * n2, n2 * n1, n2 * n1, n * n]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = offs[-1]

    def s_matrix(vec, which):
        s = np.zeros((n, n), dtype=complex)
        s[:n1, :n1] = vec[offs[0]:offs[1]].reshape(n1, n1)
        s[n1:, n1:] = vec[offs[1]:offs[2]].reshape(n2, n2)
        c = vec[offs[2]:offs[3]] if which == 0 else vec[offs[3]:offs[4]]
        s[n1:, :n1] = c.reshape(n2, n1)
        return s

    rows = []
    for k in range(total):
        v = np.zeros(total)
        v[k] = 1.0
        f = v[offs[4]:offs[5]].reshape(n, n)
        eq0 = s_matrix(v, 0) @ t.m0 - t.m0 @ f
        eqi = s_matrix(v, 1) @ t.mInf - t.mInf @ f
        rows.append(np.concatenate([eq0.ravel(), eqi.ravel()]))
    a = np.array(rows).T  # (2n^2) x total
    sv = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(sv > SVD_RTOL * sv[0]))
    return int(total) - rank


def _endo_dim_cusp(t: CuspTriple) -> int:
    n1, n2 = t.n1, t.n2
    m11 = t.mEps[:n1, :n1]
    m12 = t.mEps[:n1, n1:]
    m22 = t.mEps[n1:, n1:]
    sizes = [n1 * n1, n2 * n1, n2 * n2]  # S11, S21, S22
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = offs[-1]
    rows = []
    for k in range(total):
        v = np.zeros(total)
        v[k] = 1.0
        s11 = v[offs[0]:offs[1]].reshape(n1, n1)
        s21 = v[offs[1]:offs[2]].reshape(n2, n1)
        s22 = v[offs[2]:offs[3]].reshape(n2, n2)
        eq1 = s11 @ m11 - m11 @ s11 - m12 @ s21
        eq2 = s11 @ m12 - m12 @ s22
        eq3 = s21 @ m12 + s22 @ m22 - m22 @ s22
        rows.append(np.concatenate([eq1.ravel(), eq2.ravel(), eq3.ravel()]))
    a = np.array(rows).T
    sv = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(sv > SVD_RTOL * sv[0]))
    return int(total) - rank


def offdiag_block_rank(t: NodalTriple) -> int:
    """Rank of the n1 x n2 upper-right block of m(0) (full for simple objects)."""
    block = t.m0[:t.n1, t.n1:]
    if block.size == 0:
        return 0
    sv = np.linalg.svd(block, compute_uv=False)
    return int(np.sum(sv > SVD_RTOL * sv[0]))


# --- elliptic automorphy factors --------------------------------------------

@dataclass(frozen=True)
class AutomorphyFactor:
    """Cyclic automorphy factor Phi_{n,d}(z, x) of the twisted family of
    stable bundles of rank n and degree d:

        Phi_{n,d}(z, x) = q_{x/n} * (cycle with phi_n(z)^d corner),
        q_{x/n} = exp(-2 pi i x / n),  phi_n(z) = exp(-pi i n tau - 2 pi i z),

    satisfying Phi(z+1, x) = Phi(z, x) and
    exp(-2 pi i y) Phi_{n,d}(z, x) = Phi_{n,d}(z, x + n y).
    """

    n: int
    d: int
    x: complex
    tau: complex

    def __post_init__(self):
        if gcd(self.n, abs(self.d)) != 1:
            raise ValueError(f"({self.n}, {self.d}) must be coprime")

    def __call__(self, z: complex) -> np.ndarray:
        n, d, tau = self.n, self.d, self.tau
        qxn = np.exp(-2j * pi * self.x / n)
        phi_n = np.exp(-1j * pi * n * tau - 2j * pi * z)
        m = np.diag(np.ones(n - 1, dtype=complex), 1)
        m[n - 1, 0] = phi_n**d
        if n == 1:
            m = np.array([[phi_n**d]], dtype=complex)
        return qxn * m


def automorphy(n: int, d: int, x: complex, tau: complex) -> AutomorphyFactor:
    return AutomorphyFactor(n, d, complex(x), complex(tau))


def line_bundle_factor(y: complex, tau: complex):
    """psi_y(z) = -exp(-2 pi i z + 2 pi i y - 2 pi i tau), the automorphy
    factor of O(y); its section is theta(z + (1+tau)/2 - y | tau)."""
    y, tau = complex(y), complex(tau)

    def psi(z: complex) -> complex:
        return -np.exp(-2j * pi * complex(z) + 2j * pi * y - 2j * pi * tau)

    return psi
