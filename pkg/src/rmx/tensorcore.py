# src/rmx/tensorcore.py

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _as_matrix(a, n: int) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class Tensor2:
    """Element of Mat_n (x) Mat_n over C.

    coeffs[i1, j1, i2, j2] is the coefficient of e_{i1 j1} (x) e_{i2 j2}
    (0-based indices).  Serialization flattens to the Kronecker layout
    (i1*n + i2, j1*n + j2), row-major, so that simple tensors A (x) B
    flatten to np.kron(A, B).
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.n,) * 4:
            raise ValueError(f"coeffs must have shape {(self.n,)*4}, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int) -> "Tensor2":
        return cls(n, np.zeros((n,) * 4, dtype=complex))

    @classmethod
    def simple(cls, a, b) -> "Tensor2":
        """Simple tensor a (x) b from two n x n matrices."""
        a = np.asarray(a, dtype=complex)
        n = a.shape[0]
        b = _as_matrix(b, n)
        return cls(n, np.einsum("ij,kl->ijkl", _as_matrix(a, n), b))

    @classmethod
    def from_kron(cls, k: np.ndarray, n: int) -> "Tensor2":
        k = np.asarray(k, dtype=complex)
        if k.shape != (n * n, n * n):
            raise ValueError(f"expected {(n*n, n*n)} Kronecker matrix, got {k.shape}")
        return cls(n, k.reshape(n, n, n, n).transpose(0, 2, 1, 3))

    def kron(self) -> np.ndarray:
        """Flattened n^2 x n^2 matrix in the Kronecker layout."""
        return self.coeffs.transpose(0, 2, 1, 3).reshape(self.n**2, self.n**2)

    def __add__(self, other: "Tensor2") -> "Tensor2":
        return Tensor2(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: "Tensor2") -> "Tensor2":
        return Tensor2(self.n, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "Tensor2":
        return Tensor2(self.n, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor2":
        return Tensor2(self.n, -self.coeffs)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def to_json_dict(self) -> dict:
        flat = self.kron().ravel()
        return {
            "n": self.n,
            "layout": "kron-rowmajor",
            "data": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Tensor2":
        n = int(d["n"])
        if d.get("layout", "kron-rowmajor") != "kron-rowmajor":
            raise ValueError(f"unknown layout {d.get('layout')!r}")
        flat = np.array([complex(re, im) for re, im in d["data"]])
        return cls.from_kron(flat.reshape(n * n, n * n), n)


@dataclass(frozen=True)
class Tensor3:
    """Element of Mat_n (x) Mat_n (x) Mat_n; coeffs[i1,j1,i2,j2,i3,j3]."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.n,) * 6:
            raise ValueError(f"coeffs must have shape {(self.n,)*6}, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int) -> "Tensor3":
        return cls(n, np.zeros((n,) * 6, dtype=complex))

    def kron(self) -> np.ndarray:
        n = self.n
        return self.coeffs.transpose(0, 2, 4, 1, 3, 5).reshape(n**3, n**3)

    @classmethod
    def from_kron(cls, k: np.ndarray, n: int) -> "Tensor3":
        k = np.asarray(k, dtype=complex)
        return cls(n, k.reshape(n, n, n, n, n, n).transpose(0, 3, 1, 4, 2, 5))

    def __add__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(self.n, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "Tensor3":
        return Tensor3(self.n, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor3":
        return Tensor3(self.n, -self.coeffs)

    def matmul(self, other: "Tensor3") -> "Tensor3":
        """Product in Mat_n^(x3): legwise matrix multiplication."""
        c = np.einsum("iajbkc,adbecf->idjekf", self.coeffs, other.coeffs)
        return Tensor3(self.n, c)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def to_json_dict(self) -> dict:
        flat = self.kron().ravel()
        return {
            "n": self.n,
            "layout": "kron-rowmajor",
            "data": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Tensor3":
        n = int(d["n"])
        if d.get("layout", "kron-rowmajor") != "kron-rowmajor":
            raise ValueError(f"unknown layout {d.get('layout')!r}")
        flat = np.array([complex(re, im) for re, im in d["data"]])
        return cls.from_kron(flat.reshape(n**3, n**3), n)


@dataclass(frozen=True)
class LinMap:
    """Linear map Mat_n -> Mat_n; action[i,j,k,l] = coeff of e_{kl} in L(e_{ij})."""

    n: int
    action: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.action, dtype=complex)
        if a.shape != (self.n,) * 4:
            raise ValueError(f"action must have shape {(self.n,)*4}, got {a.shape}")
        object.__setattr__(self, "action", a)

    @classmethod
    def zero(cls, n: int) -> "LinMap":
        return cls(n, np.zeros((n,) * 4, dtype=complex))

    @classmethod
    def identity(cls, n: int) -> "LinMap":
        a = np.zeros((n,) * 4, dtype=complex)
        for i in range(n):
            for j in range(n):
                a[i, j, i, j] = 1.0
        return cls(n, a)

    def apply(self, m) -> np.ndarray:
        m = _as_matrix(m, self.n)
        return np.einsum("ij,ijkl->kl", m, self.action)

    def compose(self, other: "LinMap") -> "LinMap":
        """self after other: (self.compose(other)).apply(m) = self(other(m))."""
        return LinMap(self.n, np.einsum("ijab,abkl->ijkl", other.action, self.action))


# --- fixed 2x2 basis symbols ------------------------------------------------

ID2 = np.eye(2, dtype=complex)
H = np.array([[1, 0], [0, -1]], dtype=complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)
E21 = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA = np.array([[0, -1j], [1j, 0]], dtype=complex)
GAMMA = np.array([[0, 1], [1, 0]], dtype=complex)


def unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    """Matrix unit e_{ij}, 0-based."""
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def embed_leg(t: Tensor2, legs: int) -> Tensor3:
    """Embed a two-leg tensor into Mat_n^(x3) on the given pair of legs.

    legs is one of 12, 13, 23; the first tensor factor goes to the first
    named leg, the second factor to the second, identity on the rest.
    """
    n = t.n
    eye = np.eye(n, dtype=complex)
    if legs == 12:
        c = np.einsum("ijkl,mn->ijklmn", t.coeffs, eye)
    elif legs == 13:
        c = np.einsum("ijkl,mn->ijmnkl", t.coeffs, eye)
    elif legs == 23:
        c = np.einsum("ijkl,mn->mnijkl", t.coeffs, eye)
    else:
        raise ValueError(f"invalid leg tag {legs!r}; expected one of 12, 13, 23")
    return Tensor3(n, c)


def swap(t: Tensor2) -> Tensor2:
    """Exchange the two tensor legs: a (x) b -> b (x) a."""
    return Tensor2(t.n, t.coeffs.transpose(2, 3, 0, 1))


def project_traceless(m: np.ndarray) -> np.ndarray:
    """pr(A) = A - (tr A / n) * 1, the projection along scalar matrices."""
    n = m.shape[0]
    return m - (np.trace(m) / n) * np.eye(n, dtype=complex)


def project_sl(t: Tensor2) -> Tensor2:
    """Apply the traceless projection pr on both legs of the tensor."""
    n = t.n
    eye = np.eye(n, dtype=complex)
    # pr as a 4-index operator: P[i,j,a,b] maps e_{ab} -> component on e_{ij}
    pr = np.einsum("ia,jb->ijab", eye, eye) - np.einsum("ij,ab->ijab", eye, eye) / n
    c = np.einsum("ijab,klcd,abcd->ijkl", pr, pr, t.coeffs)
    return Tensor2(n, c)


def casimir(n: int) -> Tensor2:
    """Casimir element of sl_n with dual bases taken in the trace pairing.

    Equals P - (1/n) 1(x)1 with P the permutation tensor; for n = 2 this is
    (1/2) h(x)h + e12(x)e21 + e21(x)e12.
    """
    if n < 2:
        raise ValueError("casimir requires n >= 2")
    c = np.zeros((n,) * 4, dtype=complex)
    for i in range(n):
        for j in range(n):
            c[i, j, j, i] += 1.0
    eye = np.eye(n, dtype=complex)
    c -= np.einsum("ij,kl->ijkl", eye, eye) / n
    return Tensor2(n, c)


def linmap_to_tensor(lm: LinMap) -> Tensor2:
    """Tensor corresponding to a linear map under X (x) Y -> tr(X . ) Y.

    The map e_{ij} -> alpha e_{kl} corresponds to alpha e_{ji} (x) e_{kl}.
    """
    return Tensor2(lm.n, lm.action.transpose(1, 0, 2, 3))


def tensor_to_linmap(t: Tensor2) -> LinMap:
    """Inverse of linmap_to_tensor."""
    return LinMap(t.n, t.coeffs.transpose(1, 0, 2, 3))
