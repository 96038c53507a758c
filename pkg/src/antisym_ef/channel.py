"""The partial-trace channel on antisymmetric states.

In the compact basis the channel has the closed form

    Lambda_d(X) = (Tr(X) * I_d - X^T) / (d - 1)

which sends ``|i>_a<i|`` to ``(I - |i><i|)/(d-1)`` and ``|i>_a<j|`` to
``-|j><i|/(d-1)``. The map is self-adjoint with respect to the
Hilbert-Schmidt inner product, a fact the optimizers rely on.

:func:`lambda_oracle_full` computes the same thing the slow way, by
embedding into ``(C^d)^(d-1)`` and tracing out all but the first factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .antisym import AntisymBasis, CompactState, _basis_for, embed_operator
from .errors import DimensionMismatch, NotPure, ShapeMismatch
from .numerics import (
    DensityMatrix,
    Plain,
    SpaceShape,
    as_array,
    frobenius_sq,
    ptrace,
    von_neumann_entropy,
)

IDENTITY = "identity"
LAMBDA = "lambda"


def lambda_operator(x) -> np.ndarray:
    """Closed-form channel on raw ``(..., d, d)`` operators (linear, batched)."""
    x = np.asarray(x)
    d = x.shape[-1]
    tr = np.trace(x, axis1=-2, axis2=-1)
    out = -np.swapaxes(x, -1, -2).astype(np.complex128)
    idx = np.arange(d)
    out[..., idx, idx] += tr[..., None]
    return out / (d - 1)


def apply_lambda_compact(s: CompactState) -> DensityMatrix:
    """Channel output on ``C^d`` for a compact antisymmetric state."""
    if s.shape.is_antisym and len(s.shape) == 1:
        d = s.shape.dim
    else:
        raise ShapeMismatch(f"expected a single antisymmetric factor, got {s.shape}")
    return DensityMatrix(lambda_operator(s.matrix), SpaceShape.plain(d))


def lambda_oracle_operator(x, basis: AntisymBasis | None = None) -> np.ndarray:
    """Brute-force route: embed, then trace out factors 2..d-1."""
    x = as_array(x)
    d = x.shape[-1]
    basis = _basis_for(d, basis)
    full = embed_operator(x, basis)
    return ptrace(full, [d] * (d - 1), [0])


def lambda_oracle_full(s: CompactState, basis: AntisymBasis | None = None) -> DensityMatrix:
    """Channel output computed through the full tensor space (``d <= 5``)."""
    d = s.shape.dim
    r = lambda_oracle_operator(s.matrix, basis)
    return DensityMatrix((r + r.conj().T) / 2, SpaceShape.plain(d))


def output_entropy(s: CompactState, tol: float = 1e-9) -> float:
    """Entropy of the channel output for a pure compact input."""
    if abs(s.purity() - 1.0) > tol:
        raise NotPure(f"input purity {s.purity():.12g} is not 1")
    return von_neumann_entropy(apply_lambda_compact(s))


# -- composite channels ------------------------------------------------------


@dataclass(frozen=True)
class ChannelSpec:
    """Factor-wise channel ``I (x) Lambda (x) ...`` on a given input shape."""

    input_shape: SpaceShape
    actions: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.actions) != len(self.input_shape):
            raise ShapeMismatch(
                f"{len(self.actions)} actions for {len(self.input_shape)} factors"
            )
        for f, act in zip(self.input_shape.factors, self.actions):
            if act not in (IDENTITY, LAMBDA):
                raise ValueError(f"unknown action {act!r}")
            if act == LAMBDA and f.kind != "antisym":
                raise ShapeMismatch("the channel can only act on antisymmetric factors")

    @classmethod
    def on_all_antisym(cls, shape: SpaceShape) -> "ChannelSpec":
        """Lambda on every antisymmetric factor, identity elsewhere."""
        return cls(shape, tuple(LAMBDA if f.kind == "antisym" else IDENTITY for f in shape.factors))

    @classmethod
    def identity(cls, shape: SpaceShape) -> "ChannelSpec":
        return cls(shape, (IDENTITY,) * len(shape))

    @property
    def output_shape(self) -> SpaceShape:
        return SpaceShape(
            tuple(
                Plain(f.dim) if act == LAMBDA else f
                for f, act in zip(self.input_shape.factors, self.actions)
            )
        )

    def lambda_factors(self) -> list[int]:
        return [i for i, act in enumerate(self.actions) if act == LAMBDA]


def act_on_factor(
    a: np.ndarray, dims: tuple[int, ...], factor: int, fn: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    """Apply a single-factor superoperator ``fn`` to factor ``factor`` of a
    batched ``(..., N, N)`` operator. ``fn`` maps ``(..., k, k)`` arrays to
    ``(..., k', k')`` arrays."""
    n = len(dims)
    lead = a.shape[:-2]
    nl = len(lead)
    t = a.reshape(*lead, *dims, *dims)
    t = np.moveaxis(t, (nl + factor, nl + n + factor), (-2, -1))
    t = fn(t)
    k_out = t.shape[-1]
    t = np.moveaxis(t, (-2, -1), (nl + factor, nl + n + factor))
    new_dims = dims[:factor] + (k_out,) + dims[factor + 1 :]
    big = int(np.prod(new_dims))
    return t.reshape(*lead, big, big)


def apply_channel_operator(spec: ChannelSpec, a, order: Iterable[int] | None = None) -> np.ndarray:
    """Apply ``spec`` to raw (possibly batched) operators.

    Factors are processed left to right unless ``order`` is given; the
    result does not depend on the order.
    """
    a = np.asarray(a, dtype=np.complex128)
    dims = spec.input_shape.dims
    if a.shape[-1] != spec.input_shape.dim:
        raise ShapeMismatch(f"operator dimension {a.shape[-1]} != {spec.input_shape.dim}")
    for i in order if order is not None else spec.lambda_factors():
        if spec.actions[i] == LAMBDA:
            a = act_on_factor(a, dims, i, lambda_operator)
    return a


def apply_channel(spec: ChannelSpec, rho: DensityMatrix) -> DensityMatrix:
    if rho.shape != spec.input_shape:
        raise ShapeMismatch(f"state shape {rho.shape} does not match channel input")
    out = apply_channel_operator(spec, rho.matrix)
    return DensityMatrix((out + out.conj().T) / 2, spec.output_shape)


# -- norm identities -----------------------------------------------------------


def _split_ancilla(shape: SpaceShape) -> tuple[list[int], list[int]]:
    anc = [i for i, f in enumerate(shape.factors) if f.kind == "plain"]
    asym = [i for i, f in enumerate(shape.factors) if f.kind == "antisym"]
    return anc, asym


def purity_identity_sides(rho: DensityMatrix) -> tuple[float, float]:
    """Both sides of the purity identity for ``K (x) C^d_*``.

    Returns ``(||I (x) Lambda(rho)||^2,
    ((d-2) ||Tr_{C^d_*} rho||^2 + ||rho||^2) / (d-1)^2)``. The shape must
    end in one antisymmetric factor preceded by plain ancilla factors
    (possibly none).
    """
    shape = rho.shape
    anc, asym = _split_ancilla(shape)
    if len(asym) != 1 or asym[0] != len(shape) - 1:
        raise ShapeMismatch("expected plain factors followed by one antisymmetric factor")
    d = shape[-1].dim
    lhs = frobenius_sq(apply_channel_operator(ChannelSpec.on_all_antisym(shape), rho.matrix))
    reduced_sq = frobenius_sq(ptrace(rho.matrix, shape.dims, anc)) if anc else 1.0
    rhs = ((d - 2) * reduced_sq + frobenius_sq(rho.matrix)) / (d - 1) ** 2
    return lhs, rhs


def purity_bound_margin(rho: DensityMatrix) -> float:
    """``prod 1/(d_i - 1) - ||I (x) Lambda_{d_1} (x) ... (rho)||^2``.

    Non-negative for every state; antisymmetric factors may sit anywhere.
    """
    spec = ChannelSpec.on_all_antisym(rho.shape)
    ds = [rho.shape[i].dim for i in spec.lambda_factors()]
    if not ds:
        raise ShapeMismatch("no antisymmetric factor to act on")
    bound = float(np.prod([1.0 / (d - 1) for d in ds]))
    return bound - frobenius_sq(apply_channel_operator(spec, rho.matrix))


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def compact_formula_unit(d: int, i: int, j: int) -> np.ndarray:
    """Image of ``|i>_a<j|`` written out case by case (no linear algebra)."""
    if not 0 <= i < d or not 0 <= j < d:
        raise DimensionMismatch("matrix unit index out of range")
    if i == j:
        return (np.eye(d) - matrix_unit(d, i, i)) / (d - 1)
    return -matrix_unit(d, j, i) / (d - 1)
