"""Entanglement of formation by search over pure-state decompositions.

Every decomposition of a rank-``r`` state ``rho = sum_k lam_k |v_k><v_k|``
into ``m >= r`` pure states has the form

    |psi~_j> = sum_k V[j, k] sqrt(lam_k) |v_k>,   p_j = <psi~_j|psi~_j>,

for an ``m x r`` isometry ``V``. :func:`ef_estimate` minimises the average
entropy of Alice's marginal over ``V`` by Riemannian descent on the
isometry manifold: the iterate moves as ``V <- exp(t D) V`` for
anti-Hermitian ``D`` built from ``Omega = G V^dagger - V G^dagger`` and the
Euclidean gradient ``G`` (conjugate-gradient directions). Any value it reports is attained by an explicit ensemble,
so it is an upper bound on the true infimum.

For states on products of antisymmetric spaces the infimum is also bounded
from below by ``sum log2(d_i - 1)`` (see :func:`ef_lower_bound`), which
pins the answer for product inputs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import ChannelSpec, apply_channel_operator
from .errors import (
    BoundViolation,
    InvalidState,
    NotAntisymShape,
    NotIsometry,
    RankMismatch,
    ShapeMismatch,
)
from .numerics import (
    DensityMatrix,
    SpaceShape,
    as_array,
    eig_hermitian,
    entropy_from_eigenvalues,
    frobenius_sq,
    ptrace,
    random_isometry,
    random_pure_vector,
    tensor,
    random_state,
    von_neumann_entropy,
)

LN2 = math.log(2.0)
#: Eigenvalues of ``rho`` above this count towards its rank.
RANK_TOL = 1e-12
#: Members lighter than this are dropped from an ensemble.
DROP_TOL = 1e-14
#: Marginal eigenvalues below this are treated as exact zeros in gradients.
_LOG_FLOOR = 1e-13


# -- ensembles ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weights ``probs`` and unit vectors ``states`` (one per row)."""

    probs: np.ndarray
    states: np.ndarray
    shape: SpaceShape

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        psi = np.atleast_2d(np.asarray(self.states, dtype=np.complex128))
        if psi.shape != (p.size, self.shape.dim):
            raise ShapeMismatch(
                f"{p.size} weights but states of shape {psi.shape} for dimension {self.shape.dim}"
            )
        if np.any(p < 0):
            raise InvalidState("negative ensemble weight")
        if abs(p.sum() - 1.0) > 1e-10:
            raise InvalidState(f"weights sum to {p.sum()!r}")
        norms = np.linalg.norm(psi, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-10):
            raise InvalidState("ensemble members must be unit vectors")
        p.setflags(write=False)
        psi.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", psi)

    def __len__(self) -> int:
        return self.probs.size

    def density_matrix(self) -> np.ndarray:
        return (self.states.T * self.probs) @ self.states.conj()

    def reconstruction_error(self, rho) -> float:
        return float(np.max(np.abs(self.density_matrix() - as_array(rho))))

    def to_json(self) -> dict:
        return {
            "shape": self.shape.to_json(),
            "probs": self.probs.tolist(),
            "states": [[[z.real, z.imag] for z in row] for row in self.states],
        }


# -- the bipartite cut -------------------------------------------------------


@dataclass(frozen=True)
class Cut:
    """Which part of a composite space belongs to Alice.

    Each antisymmetric factor ``C^d_* in C^d (x) (C^d)^(d-2)`` contributes
    its first tensor factor to Alice, so its reduction is the channel
    Lambda_d. Plain factors listed in ``alice`` are kept whole; the
    remaining plain factors belong to Bob and are traced out.
    """

    shape: SpaceShape
    alice: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "alice", frozenset(int(i) for i in self.alice))
        for i in self.alice:
            if i < 0 or i >= len(self.shape) or self.shape[i].kind != "plain":
                raise ShapeMismatch(f"factor {i} is not a plain factor of {self.shape}")

    @classmethod
    def default(cls, shape: SpaceShape) -> "Cut":
        """All-antisymmetric shapes need no plain factor; otherwise Alice
        holds factor 0 when it is plain."""
        if shape[0].kind == "plain":
            return cls(shape, frozenset({0}))
        return cls(shape, frozenset())

    @property
    def kept(self) -> list[int]:
        return [
            i for i, f in enumerate(self.shape.factors) if f.kind == "antisym" or i in self.alice
        ]

    @property
    def alice_dim(self) -> int:
        return int(np.prod([self.shape[i].dim for i in self.kept])) if self.kept else 1

    def _spec(self) -> ChannelSpec:
        return ChannelSpec.on_all_antisym(self.shape)

    def reduce(self, a) -> np.ndarray:
        """Alice's marginal of raw (batched) operators."""
        a = apply_channel_operator(self._spec(), a)
        kept = self.kept
        if len(kept) == len(self.shape):
            return a
        if not kept:
            return np.trace(a, axis1=-2, axis2=-1)[..., None, None]
        return ptrace(a, self.shape.dims, kept)

    def lift(self, x) -> np.ndarray:
        """Adjoint of :meth:`reduce`: ``X -> Lambda^*(X (x) I_Bob)``."""
        x = np.asarray(x, dtype=np.complex128)
        dims = self.shape.dims
        n = len(dims)
        kept = self.kept
        traced = [i for i in range(n) if i not in kept]
        if traced:
            lead = x.shape[:-2]
            nl = len(lead)
            kd = [dims[i] for i in kept]
            td = [dims[i] for i in traced]
            tsize = int(np.prod(td))
            big = np.einsum("...ab,cd->...acbd", x, np.eye(tsize))
            big = big.reshape(*lead, *kd, *td, *kd, *td)
            order = kept + traced
            perm_row = [order.index(i) for i in range(n)]
            axes = (
                list(range(nl))
                + [nl + p for p in perm_row]
                + [nl + n + p for p in perm_row]
            )
            N = self.shape.dim
            x = big.transpose(axes).reshape(*lead, N, N)
        # the channel is self-adjoint
        return apply_channel_operator(self._spec(), x)


def _as_cut(rho_shape: SpaceShape, cut) -> Cut:
    if cut is None:
        return Cut.default(rho_shape)
    if isinstance(cut, Cut):
        if cut.shape != rho_shape:
            raise ShapeMismatch("cut was built for a different shape")
        return cut
    return Cut(rho_shape, frozenset(cut))


# -- decompositions ----------------------------------------------------------


def _weighted_eigvecs(rho: DensityMatrix) -> np.ndarray:
    """Columns ``sqrt(lam_k) |v_k>`` for the nonzero eigenvalues, descending."""
    vals, vecs = eig_hermitian(rho.matrix)
    r = int(np.sum(vals > RANK_TOL))
    return vecs[:, :r] * np.sqrt(vals[:r])


def numerical_rank(rho: DensityMatrix) -> int:
    return int(np.sum(eig_hermitian(rho.matrix)[0] > RANK_TOL))


def _check_isometry(v: np.ndarray, tol: float = 1e-9) -> None:
    dev = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1])))
    if dev > tol:
        raise NotIsometry(f"V^dagger V deviates from identity by {dev:.3e}")


def decomposition_from_isometry(rho: DensityMatrix, v) -> Ensemble:
    """Pure-state ensemble of ``rho`` selected by the ``m x r`` isometry ``v``."""
    w = _weighted_eigvecs(rho)
    v = np.asarray(v, dtype=np.complex128)
    r = w.shape[1]
    if v.ndim != 2 or v.shape[1] != r:
        raise RankMismatch(f"rho has rank {r} but V has shape {v.shape}")
    if v.shape[0] < r:
        raise RankMismatch("V needs at least as many rows as the rank")
    _check_isometry(v)
    psi = v @ w.T
    p = np.sum(np.abs(psi) ** 2, axis=1)
    keep = p > DROP_TOL
    psi, p = psi[keep], p[keep]
    return Ensemble(p / p.sum(), psi / np.sqrt(p)[:, None], rho.shape)


def average_output_entropy(e: Ensemble, cut=None) -> float:
    """``sum_j p_j S(Alice's marginal of |psi_j>)`` in bits."""
    cut = _as_cut(e.shape, cut)
    outer = np.einsum("ja,jb->jab", e.states, e.states.conj())
    marg = cut.reduce(outer)
    marg = (marg + np.swapaxes(marg, -1, -2).conj()) / 2
    lam = np.linalg.eigvalsh(marg)
    return float(sum(p * entropy_from_eigenvalues(l) for p, l in zip(e.probs, lam)))


# -- optimizer ---------------------------------------------------------------


@dataclass(frozen=True)
class EofOptions:
    """Search settings for :func:`ef_estimate`.

    ``ensemble_size`` defaults to ``rank**2``. ``tol`` is the improvement
    below which the search counts as converged, both within a restart and
    across restarts.
    """

    restarts: int = 20
    tol: float = 1e-8
    max_iter: int = 2000
    ensemble_size: int | None = None
    threads: int = 1
    patience: int = 50
    lower_bound_samples: int = 16


def _objective(v: np.ndarray, w: np.ndarray, cut: Cut, grad: bool = True):
    """Average marginal entropy (bits) and its gradient ``d f / d conj(V)``."""
    psi = v @ w.T
    p = np.sum(np.abs(psi) ** 2, axis=1)
    outer = np.einsum("ja,jb->jab", psi, psi.conj())
    sig = cut.reduce(outer)
    sig = (sig + np.swapaxes(sig, -1, -2).conj()) / 2
    if grad:
        lam, u = np.linalg.eigh(sig)
    else:
        lam = np.linalg.eigvalsh(sig)
    lam = np.clip(lam, 0.0, None)
    pos = lam > _LOG_FLOOR * np.maximum(p, 1e-300)[:, None]
    loglam = np.where(pos, np.log(np.where(pos, lam, 1.0)), 0.0)
    live = p > DROP_TOL
    logp = np.where(live, np.log(np.where(live, p, 1.0)), 0.0)
    f = float(np.sum(-lam * loglam) + np.sum(p * logp)) / LN2
    if not grad:
        return f, None
    logsig = np.einsum("jab,jb,jcb->jac", u, loglam, u.conj())
    lifted = cut.lift(logsig)
    g = -np.einsum("jab,jb->ja", lifted, psi) + logp[:, None] * psi
    g[~live] = 0.0
    return f, (g @ w.conj()) / LN2


def _reorthonormalize(v: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(v, full_matrices=False)
    return u @ vh


@dataclass
class _RestartOutcome:
    value: float
    v: np.ndarray
    iterations: int


def _descend(v: np.ndarray, w: np.ndarray, cut: Cut, opts: EofOptions) -> _RestartOutcome:
    """Polak-Ribiere conjugate gradient in the Lie algebra of U(m).

    Directions are anti-Hermitian ``m x m`` matrices ``D`` and the iterate
    moves along ``V(t) = exp(t D) V``. One eigendecomposition of ``iD``
    per iteration makes every trial step of the line search cheap.
    """
    f, g = _objective(v, w, cut)
    d_prev = om_prev = None
    step = 1.0
    history = [f]
    it = 0
    for it in range(1, opts.max_iter + 1):
        om = g @ v.conj().T - v @ g.conj().T
        d = -om
        if om_prev is not None:
            beta = np.real(np.vdot(om, om - om_prev)) / np.real(np.vdot(om_prev, om_prev))
            d = d + max(beta, 0.0) * d_prev
        slope = 2.0 * float(np.real(np.vdot(g, d @ v)))
        if slope >= 0.0:
            d = -om
            slope = 2.0 * float(np.real(np.vdot(g, d @ v)))
        if slope > -1e-16:
            break
        mu, u = np.linalg.eigh(1j * d)
        uv = u.conj().T @ v
        t = 2.0 * step
        accepted = False
        for _ in range(40):
            v_new = u @ (np.exp(-1j * t * mu)[:, None] * uv)
            f_new, _ = _objective(v_new, w, cut, grad=False)
            if f_new <= f + 1e-4 * t * slope:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        step = t
        v = v_new
        if it % 25 == 0:
            v = _reorthonormalize(v)
        f, g = _objective(v, w, cut)
        om_prev, d_prev = om, d
        history.append(f)
        if len(history) > opts.patience and history[-opts.patience - 1] - f < 0.1 * opts.tol:
            break
    return _RestartOutcome(f, _reorthonormalize(v), it)


def _start_point(k: int, m: int, r: int, seed: int) -> np.ndarray:
    """Restart ``k`` starts from the spectral ensemble (k = 0) or a random
    isometry drawn from the stream ``(seed, k)``."""
    if k == 0:
        return np.eye(m, r, dtype=np.complex128)
    return random_isometry(m, r, np.random.default_rng([seed, k]))


@dataclass(frozen=True, eq=False)
class EofResult:
    value: float
    best_ensemble: Ensemble
    restarts_used: int
    converged: bool
    lower_bound: float
    seed: int
    ensemble_size: int
    restart_values: tuple[float, ...] = field(default=())

    def to_json(self, with_ensemble: bool = False) -> dict:
        out = {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "seed": self.seed,
            "ensemble_size": self.ensemble_size,
            "ensemble_size_rule": "rank**2 unless overridden",
            "members_used": len(self.best_ensemble),
            "restart_values": list(self.restart_values),
        }
        if with_ensemble:
            out["best_ensemble"] = self.best_ensemble.to_json()
        return out


def ef_estimate(
    rho: DensityMatrix, cut=None, opts: EofOptions | None = None, seed: int = 0
) -> EofResult:
    """Upper estimate of the entanglement of formation of ``rho`` in ebits.

    Parameters
    ----------
    rho : DensityMatrix
    cut : Cut or iterable of int, optional
        Alice's side; see :class:`Cut`. Defaults to :meth:`Cut.default`.
    opts : EofOptions, optional
    seed : int
        Restart ``k`` draws its start point from ``default_rng([seed, k])``,
        so results do not depend on ``opts.threads``.
    """
    opts = opts or EofOptions()
    cut = _as_cut(rho.shape, cut)
    w = _weighted_eigvecs(rho)
    r = w.shape[1]
    lower = _default_lower_bound(rho, opts.lower_bound_samples, seed)

    if r == 1:
        e = Ensemble(np.ones(1), (w[:, 0] / np.linalg.norm(w[:, 0]))[None, :], rho.shape)
        val = average_output_entropy(e, cut)
        return EofResult(val, e, 0, True, lower, seed, 1, (val,))

    m = max(opts.ensemble_size or r * r, r)
    restarts = max(1, int(opts.restarts))

    def run(k: int) -> _RestartOutcome:
        return _descend(_start_point(k, m, r, seed), w, cut, opts)

    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            outcomes = list(pool.map(run, range(restarts)))
    else:
        outcomes = [run(k) for k in range(restarts)]

    values = [o.value for o in outcomes]
    best = int(np.argmin(values))  # first index wins ties
    prefix = np.minimum.accumulate(values)
    converged = restarts == 1 or bool(prefix[-2] - prefix[-1] < opts.tol)
    e = decomposition_from_isometry(rho, outcomes[best].v)
    return EofResult(
        value=average_output_entropy(e, cut),
        best_ensemble=e,
        restarts_used=restarts,
        converged=converged,
        lower_bound=lower,
        seed=seed,
        ensemble_size=m,
        restart_values=tuple(values),
    )


# -- bounds and checks -------------------------------------------------------


def _default_lower_bound(rho: DensityMatrix, samples: int, seed: int) -> float:
    if rho.shape.is_antisym:
        return ef_lower_bound(rho, samples=samples, seed=seed)
    return 0.0


def ef_lower_bound(rho: DensityMatrix, samples: int = 16, seed: int = 0) -> float:
    """Proven lower bound ``sum_i log2(d_i - 1)`` for ``rho`` on a product of
    antisymmetric spaces.

    As a consistency check, ``-log2 ||Lambda_{d_1} (x) ... (|psi><psi|)||^2``
    is evaluated on the eigenvectors of ``rho`` and on ``samples`` random
    pure states; each must clear the bound, otherwise
    :class:`BoundViolation` is raised.
    """
    shape = rho.shape
    if not shape.is_antisym:
        raise NotAntisymShape(f"every factor must be antisymmetric, got {shape}")
    bound = float(sum(math.log2(f.dim - 1) for f in shape.factors))
    spec = ChannelSpec.on_all_antisym(shape)
    vecs = eig_hermitian(rho.matrix)[1].T
    rng = np.random.default_rng([seed, 2**31 - 1])
    extra = [random_pure_vector(shape.dim, rng) for _ in range(samples)]
    for psi in list(vecs) + extra:
        out = apply_channel_operator(spec, np.outer(psi, psi.conj()))
        val = -math.log2(frobenius_sq(out))
        if val < bound - 1e-10:
            raise BoundViolation(f"-log2 purity {val!r} below bound {bound!r}")
    return bound


def verify_entropy_bound(x) -> tuple[float, float]:
    """``(S(X), -log2 Tr X^2)``; the first is never below the second."""
    if not isinstance(x, DensityMatrix):
        a = as_array(x)
        x = DensityMatrix(a, SpaceShape.plain(a.shape[0]))
    lhs = von_neumann_entropy(x)
    rhs = -math.log2(frobenius_sq(x.matrix))
    return lhs, rhs


@dataclass(frozen=True, eq=False)
class EcReport:
    d: int
    value: float
    per_copy: dict
    evidence: tuple[EofResult, ...]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "value": self.value,
            "closed_form": "log2(d-1)",
            "per_copy": {str(n): v for n, v in self.per_copy.items()},
            "evidence": [r.to_json() for r in self.evidence],
        }


def entanglement_cost_report(
    d: int, opts: EofOptions | None = None, seed: int = 0, copies: Sequence[int] = (1, 2)
) -> EcReport:
    """Entanglement cost ``log2(d-1)`` of any antisymmetric state, with the
    per-copy estimates ``E_f(rho^{(x)n}) / n`` for a random ``rho`` as
    evidence."""
    if d < 3:
        raise ValueError("d must be at least 3")
    value = math.log2(d - 1)
    rho = random_state(SpaceShape.antisym(d), np.random.default_rng([seed, d]))
    per_copy = {}
    evidence = []
    for n in copies:
        res = ef_estimate(tensor(*([rho] * n)), opts=opts, seed=seed)
        per_copy[n] = res.value / n
        evidence.append(res)
    return EcReport(d, value, per_copy, tuple(evidence))
