"""Dense complex linear algebra for density matrices on composite spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Composite
spaces are described by a :class:`SpaceShape`, an ordered tuple of factors
where the leftmost factor is the most significant tensor index. An
antisymmetric factor is stored compactly: its dimension is ``d``, not
``d**(d-1)``.

Every entropy in this package is measured in bits (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadFactorIndex,
    InvalidState,
    NoConvergence,
    NonHermitian,
    ShapeMismatch,
)

#: Hermiticity / trace / positivity tolerance of a stored density matrix.
STATE_TOL = 1e-10
#: Eigenvalues above ``-CLIP_TOL`` and below zero are rounding noise.
CLIP_TOL = 1e-10


@dataclass(frozen=True)
class Factor:
    """One tensor factor: ``kind`` is ``"plain"`` or ``"antisym"``."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in ("plain", "antisym"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if int(self.dim) < 1:
            raise ValueError("factor dimension must be positive")
        if self.kind == "antisym" and self.dim < 3:
            raise ValueError("antisymmetric factors need d >= 3")

    def to_json(self) -> dict:
        return {"kind": self.kind, "dim": int(self.dim)}


def Plain(k: int) -> Factor:
    return Factor("plain", int(k))


def Antisym(d: int) -> Factor:
    return Factor("antisym", int(d))


@dataclass(frozen=True)
class SpaceShape:
    """Ordered list of tensor factors."""

    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a shape needs at least one factor")

    @classmethod
    def of(cls, *factors: Factor) -> "SpaceShape":
        return cls(tuple(factors))

    @classmethod
    def plain(cls, *dims: int) -> "SpaceShape":
        return cls(tuple(Plain(k) for k in dims))

    @classmethod
    def antisym(cls, *ds: int) -> "SpaceShape":
        return cls(tuple(Antisym(d) for d in ds))

    @classmethod
    def from_json(cls, items: Iterable[dict]) -> "SpaceShape":
        return cls(tuple(Factor(it["kind"], int(it["dim"])) for it in items))

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self.factors]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def __add__(self, other: "SpaceShape") -> "SpaceShape":
        return SpaceShape(self.factors + other.factors)

    def select(self, keep: Iterable[int]) -> "SpaceShape":
        return SpaceShape(tuple(self.factors[i] for i in sorted(set(keep))))

    @property
    def is_antisym(self) -> bool:
        return all(f.kind == "antisym" for f in self.factors)


def _check_state(m: np.ndarray, tol: float = STATE_TOL) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidState(f"density matrix must be square, got {m.shape}")
    herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if herm > tol:
        raise InvalidState(f"not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"trace is {tr!r}, expected 1")
    lmin = np.linalg.eigvalsh(m)[0]
    if lmin < -tol:
        raise InvalidState(f"negative eigenvalue {lmin:.3e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix together with its factor structure.

    The stored array is a read-only copy, so instances can be shared freely.
    """

    matrix: np.ndarray
    shape: SpaceShape

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape != (self.shape.dim, self.shape.dim):
            raise ShapeMismatch(
                f"matrix of shape {m.shape} does not fit space of dimension {self.shape.dim}"
            )
        _check_state(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.shape.dim

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def purity(self) -> float:
        return frobenius_sq(self.matrix)

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(self.purity() - 1.0) < tol

    def eigenvalues(self) -> np.ndarray:
        return eig_hermitian(self.matrix)[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims}, purity={self.purity():.6g})"


def as_array(x) -> np.ndarray:
    """Return the raw matrix of a ``DensityMatrix`` or the array itself."""
    if isinstance(x, DensityMatrix):
        return x.matrix
    return np.asarray(x, dtype=np.complex128)


def eig_hermitian(m, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray
        Real, sorted in descending order.
    eigenvectors : ndarray
        Unitary matrix whose columns match ``eigenvalues``.

    Raises
    ------
    NonHermitian
        If ``m`` differs from its conjugate transpose by more than ``tol``.
    NoConvergence
        If LAPACK fails to converge.
    """
    a = as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitian(f"expected a square matrix, got {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NonHermitian(f"matrix is not Hermitian (max deviation {dev:.3e})")
    a = (a + a.conj().T) / 2
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def entropy_from_eigenvalues(vals) -> float:
    """Shannon entropy in bits of a spectrum, clipping rounding negatives.

    ``0 log 0`` is taken as 0. Eigenvalues below ``-CLIP_TOL`` raise
    :class:`InvalidState`.
    """
    vals = np.asarray(vals, dtype=float)
    if vals.size and vals.min() < -CLIP_TOL:
        raise InvalidState(f"negative eigenvalue {vals.min():.3e}")
    vals = vals[vals > 0]
    return float(-np.sum(vals * np.log2(vals)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy ``-Tr rho log2 rho`` in bits."""
    a = as_array(rho)
    if not isinstance(rho, DensityMatrix):
        _check_state(a)
    return entropy_from_eigenvalues(eig_hermitian(a)[0])


def frobenius_sq(m) -> float:
    """Sum of squared moduli of all entries, ``Tr(m^dagger m)``."""
    a = as_array(m)
    return float(np.sum(a.real**2 + a.imag**2))


def _as_tensor(a: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    lead = a.shape[:-2]
    return a.reshape(*lead, *dims, *dims)


def ptrace(a, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Partial trace of a raw (possibly batched) operator.

    Parameters
    ----------
    a : ndarray
        Array of shape ``(..., N, N)`` with ``N = prod(dims)``.
    dims : sequence of int
        Factor dimensions, most significant first.
    keep : iterable of int
        Indices of the factors that survive, in any order. The result keeps
        them in their original order.
    """
    a = np.asarray(a)
    dims = tuple(int(k) for k in dims)
    n = len(dims)
    keep = sorted(set(keep))
    if any(i < 0 or i >= n for i in keep):
        raise BadFactorIndex(f"factor indices {keep} out of range for {n} factors")
    lead = a.shape[:-2]
    nl = len(lead)
    t = _as_tensor(a, dims)
    # einsum subscripts: leading axes, then bra/ket index per factor
    letters = iter("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
    lead_idx = [next(letters) for _ in range(nl)]
    row = [next(letters) for _ in range(n)]
    col = [row[i] if i not in keep else next(letters) for i in range(n)]
    out = lead_idx + [row[i] for i in keep] + [col[i] for i in keep]
    spec = "".join(lead_idx + row + col) + "->" + "".join(out)
    r = np.einsum(spec, t)
    kd = int(np.prod([dims[i] for i in keep])) if keep else 1
    return r.reshape(*lead, kd, kd)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` to the factors listed in ``keep`` (a nonempty set)."""
    keep = sorted(set(keep))
    if not keep:
        raise BadFactorIndex("keep must name at least one factor")
    if any(i < 0 or i >= len(rho.shape) for i in keep):
        raise BadFactorIndex(f"factor indices {keep} out of range for {len(rho.shape)} factors")
    r = ptrace(rho.matrix, rho.dims, keep)
    return DensityMatrix((r + r.conj().T) / 2, rho.shape.select(keep))


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Kronecker product of density matrices; shapes are concatenated."""
    if not states:
        raise ValueError("tensor() needs at least one state")
    m = reduce(np.kron, (s.matrix for s in states))
    shape = reduce(lambda x, y: x + y, (s.shape for s in states))
    return DensityMatrix(m, shape)


def pure_state(vec, shape: SpaceShape) -> DensityMatrix:
    """Projector onto the normalized vector ``vec``."""
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), shape)


def maximally_mixed(shape: SpaceShape) -> DensityMatrix:
    n = shape.dim
    return DensityMatrix(np.eye(n) / n, shape)


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``."""
    diff = as_array(a) - as_array(b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


# -- random sampling ---------------------------------------------------------


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def ginibre(rows: int, cols: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(n: int, rng=None) -> np.ndarray:
    """QR of a complex Gaussian matrix, each column rephased so its first
    nonzero entry is real and positive."""
    q, _ = np.linalg.qr(ginibre(n, n, rng))
    return _fix_column_phases(q)


def random_isometry(rows: int, cols: int, rng=None) -> np.ndarray:
    """An ``rows x cols`` matrix with orthonormal columns."""
    if cols > rows:
        raise ValueError("an isometry needs rows >= cols")
    q, _ = np.linalg.qr(ginibre(rows, cols, rng))
    return _fix_column_phases(q)


def _fix_column_phases(q: np.ndarray) -> np.ndarray:
    q = q.copy()
    for j in range(q.shape[1]):
        nz = np.flatnonzero(np.abs(q[:, j]) > 1e-14)
        if nz.size:
            z = q[nz[0], j]
            q[:, j] *= np.conj(z) / abs(z)
    return q


def random_pure_vector(n: int, rng=None) -> np.ndarray:
    v = ginibre(n, 1, rng).ravel()
    return v / np.linalg.norm(v)


def random_density_matrix(n: int, rng=None, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt random state ``G G^dagger / Tr(G G^dagger)``.

    With ``rank`` given, ``G`` is ``n x rank`` (the induced measure).
    """
    g = ginibre(n, n if rank is None else rank, rng)
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def random_state(shape: SpaceShape, rng=None, rank: int | None = None) -> DensityMatrix:
    return DensityMatrix(random_density_matrix(shape.dim, rng, rank), shape)
