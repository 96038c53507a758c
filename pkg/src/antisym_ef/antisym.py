"""The d-level antisymmetric space and its compact representation.

For ``d >= 3`` the vectors

    |i>_a = 1/sqrt((d-1)!) * sum eps[i, i2, ..., id] |i2> (x) ... (x) |id>

span a d-dimensional subspace of ``(C^d)^(d-1)``. A state on that subspace
is stored as a ``d x d`` matrix in the ``{|i>_a}`` basis (a
:class:`CompactState`); :func:`embed_full` and :func:`project_compact`
convert to and from the full tensor space for small ``d``.

Indices in the public API are 0-based except for :func:`levi_civita`,
which takes the 1-based labels used in the usual notation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import permutations
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    IndexOutOfRange,
    NotUnitary,
    SupportLeakage,
)
from .numerics import DensityMatrix, SpaceShape, as_array

#: Largest d for which full-space basis vectors are built (6**5 amplitudes).
MAX_BASIS_D = 6
#: Largest d for which full-space density matrices are built (625 x 625).
MAX_FULL_D = 5


def levi_civita(indices: Sequence[int]) -> int:
    """Sign of the permutation ``indices`` of ``1..d``; 0 on any repeat."""
    idx = [int(i) for i in indices]
    d = len(idx)
    if any(i < 1 or i > d for i in idx):
        raise IndexOutOfRange(f"indices must lie in 1..{d}, got {tuple(idx)}")
    if len(set(idx)) != d:
        return 0
    # parity from the cycle decomposition
    seen = [False] * d
    sign = 1
    for start in range(d):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = idx[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class AntisymBasis:
    """The ``d`` vectors ``|i>_a`` as rows of a ``(d, d**(d-1))`` array."""

    d: int
    vectors: np.ndarray

    @property
    def full_dim(self) -> int:
        return self.d ** (self.d - 1)

    @property
    def full_shape(self) -> SpaceShape:
        return SpaceShape.plain(*([self.d] * (self.d - 1)))

    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the antisymmetric span (full space)."""
        return self.vectors.T @ self.vectors.conj()


@lru_cache(maxsize=None)
def build_basis(d: int) -> AntisymBasis:
    """Build ``|1>_a ... |d>_a`` by direct Levi-Civita summation.

    Row ``i`` (0-based) holds the amplitudes of ``|i+1>_a`` in the
    lexicographic product basis of ``(C^d)^(d-1)``.
    """
    d = int(d)
    if d < 3:
        raise ValueError("the antisymmetric construction needs d >= 3")
    if d > MAX_BASIS_D:
        raise DimensionTooLarge(f"full-space basis capped at d <= {MAX_BASIS_D}, got {d}")
    vecs = np.zeros((d, d ** (d - 1)), dtype=np.complex128)
    norm = 1.0 / math.sqrt(math.factorial(d - 1))
    place = [d ** (d - 2 - k) for k in range(d - 1)]
    for perm in permutations(range(d)):
        sign = levi_civita([p + 1 for p in perm])
        pos = sum(p * w for p, w in zip(perm[1:], place))
        vecs[perm[0], pos] = sign * norm
    vecs.setflags(write=False)
    return AntisymBasis(d, vecs)


class CompactState(DensityMatrix):
    """A density matrix on the antisymmetric space, in the ``|i>_a`` basis."""

    def __init__(self, matrix):
        m = np.asarray(as_array(matrix))
        if m.ndim != 2:
            raise DimensionMismatch("compact states are square matrices")
        super().__init__(m, SpaceShape.antisym(m.shape[0]))

    @property
    def d(self) -> int:
        return self.shape.dim

    def __repr__(self) -> str:
        return f"CompactState(d={self.d}, purity={self.purity():.6g})"


def _basis_for(d: int, basis: AntisymBasis | None) -> AntisymBasis:
    if basis is None:
        basis = build_basis(d)
    if basis.d != d:
        raise DimensionMismatch(f"state has d={d} but basis has d={basis.d}")
    if d > MAX_FULL_D:
        raise DimensionTooLarge(f"full-space density matrices capped at d <= {MAX_FULL_D}")
    return basis


def embed_operator(op, basis: AntisymBasis) -> np.ndarray:
    """``sum_ij op[i, j] |i>_a <j|_a`` as a full-space matrix."""
    op = as_array(op)
    if op.shape != (basis.d, basis.d):
        raise DimensionMismatch(f"operator shape {op.shape} does not match d={basis.d}")
    b = basis.vectors
    return b.T @ op @ b.conj()


def embed_full(s: CompactState, basis: AntisymBasis | None = None) -> DensityMatrix:
    """Lift a compact state into the full ``(C^d)^(d-1)`` space."""
    basis = _basis_for(s.shape.dim, basis)
    return DensityMatrix(embed_operator(s.matrix, basis), basis.full_shape)


def project_compact(rho_full, basis: AntisymBasis, leak_tol: float = 1e-8) -> CompactState:
    """Express a full-space state supported on the antisymmetric span
    in the compact basis.

    Raises :class:`SupportLeakage` if more than ``leak_tol`` of the trace
    lies outside the span.
    """
    a = as_array(rho_full)
    if a.shape != (basis.full_dim, basis.full_dim):
        raise DimensionMismatch(f"expected a {basis.full_dim}-dimensional matrix, got {a.shape}")
    b = basis.vectors
    s = b.conj() @ a @ b.T
    leak = np.trace(a).real - np.trace(s).real
    if abs(leak) > leak_tol:
        raise SupportLeakage(f"{leak:.3e} of the trace lies outside the antisymmetric span")
    return CompactState((s + s.conj().T) / 2)


def check_unitary(u, tol: float = 1e-9) -> np.ndarray:
    u = as_array(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise NotUnitary(f"U^dagger U deviates from identity by {dev:.3e}")
    return u


def su_action(u, s: CompactState) -> CompactState:
    """Action of ``U^{(x)(d-1)}`` on a compact state.

    On the antisymmetric basis the tensor power acts as the contragredient
    matrix ``conj(U)``, so ``s -> conj(U) s U^T``. A non-unit determinant
    only contributes a global phase, which cancels on density matrices.
    """
    u = check_unitary(u)
    if u.shape[0] != s.shape.dim:
        raise DimensionMismatch(f"U is {u.shape[0]}-dimensional but d={s.shape.dim}")
    ub = u.conj()
    return CompactState(ub @ s.matrix @ ub.conj().T)


def tensor_power(u, k: int) -> np.ndarray:
    """``U (x) U (x) ... (x) U`` with ``k`` factors."""
    u = as_array(u)
    return reduce(np.kron, [u] * k)
