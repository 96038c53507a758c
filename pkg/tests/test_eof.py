import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from antisym_ef.antisym import CompactState
from antisym_ef.eof import (
    Cut,
    Ensemble,
    EofOptions,
    _objective,
    _weighted_eigvecs,
    average_output_entropy,
    decomposition_from_isometry,
    ef_estimate,
    ef_lower_bound,
    entanglement_cost_report,
    verify_entropy_bound,
)
from antisym_ef.errors import InvalidState, NotAntisymShape, NotIsometry, RankMismatch, ShapeMismatch
from antisym_ef.numerics import (
    Antisym,
    DensityMatrix,
    Plain,
    SpaceShape,
    ginibre,
    maximally_mixed,
    pure_state,
    random_density_matrix,
    random_isometry,
    random_state,
    random_unitary,
    tensor,
)

QUICK = EofOptions(restarts=3)


def binary_entropy(x):
    return 0.0 if x <= 0 or x >= 1 else -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def wootters_eof(rho):
    """Closed-form two-qubit entanglement of formation (independent oracle)."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    tilde = yy @ rho.conj() @ yy
    ev = np.sqrt(np.abs(np.sort(np.linalg.eigvals(rho @ tilde).real)[::-1]))
    c = max(0.0, ev[0] - ev[1] - ev[2] - ev[3])
    return binary_entropy((1 + math.sqrt(1 - c * c)) / 2)


BELL = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]]) / math.sqrt(2)


class TestDecomposition:
    def test_identity_gives_eigen_ensemble(self, rng):
        rho = random_state(SpaceShape.plain(4), rng, rank=3)
        e = decomposition_from_isometry(rho, np.eye(3))
        vals = np.sort(np.linalg.eigvalsh(rho.matrix))[::-1][:3]
        assert_allclose(e.probs, vals, atol=1e-12)
        assert_allclose(np.abs(e.states.conj() @ e.states.T), np.eye(3), atol=1e-12)

    def test_pure_gives_support_vector(self, rng):
        v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        rho = pure_state(v, SpaceShape.plain(5))
        e = decomposition_from_isometry(rho, random_isometry(4, 1, rng))
        for psi in e.states:
            assert abs(abs(np.vdot(psi, v / np.linalg.norm(v))) - 1) < 1e-12

    def test_random_isometry_reconstructs(self, rng):
        rho = random_state(SpaceShape.plain(6), rng, rank=3)
        e = decomposition_from_isometry(rho, random_isometry(9, 3, rng))
        assert len(e) == 9
        assert e.reconstruction_error(rho) < 1e-10

    def test_not_isometry(self, rng):
        rho = random_state(SpaceShape.plain(3), rng)
        with pytest.raises(NotIsometry):
            decomposition_from_isometry(rho, 2 * np.eye(3))

    def test_rank_mismatch(self, rng):
        rho = random_state(SpaceShape.plain(3), rng)
        with pytest.raises(RankMismatch):
            decomposition_from_isometry(rho, np.eye(4, 2))

    def test_zero_members_dropped(self, rng):
        rho = random_state(SpaceShape.plain(3), rng)
        e = decomposition_from_isometry(rho, np.eye(5, 3))
        assert len(e) == 3

    def test_ensemble_validation(self):
        with pytest.raises(InvalidState):
            Ensemble(np.array([0.5, 0.6]), np.eye(2), SpaceShape.plain(2))
        with pytest.raises(InvalidState):
            Ensemble(np.array([0.5, 0.5]), 2 * np.eye(2), SpaceShape.plain(2))


class TestAverageEntropy:
    def test_product_pure(self):
        v = np.kron([1, 0], [0.6, 0.8])
        e = Ensemble(np.ones(1), v[None, :], SpaceShape.plain(2, 2))
        assert average_output_entropy(e) == pytest.approx(0.0, abs=1e-12)

    def test_flat_on_antisym(self, rng):
        rho = random_state(SpaceShape.antisym(3), rng)
        for _ in range(5):
            e = decomposition_from_isometry(rho, random_isometry(9, 3, rng))
            assert average_output_entropy(e) == pytest.approx(1.0, abs=1e-12)

    def test_bell_diagonal_eigen_ensemble(self):
        w = np.array([0.4, 0.3, 0.2, 0.1])
        rho = DensityMatrix((BELL.T * w) @ BELL, SpaceShape.plain(2, 2))
        e = decomposition_from_isometry(rho, np.eye(4))
        # every Bell state has a maximally mixed marginal
        assert average_output_entropy(e) == pytest.approx(1.0, abs=1e-12)

    def test_maximally_mixed_two_ensembles(self):
        shape = SpaceShape.plain(2, 2)
        bell = Ensemble(np.full(4, 0.25), BELL, shape)
        product = Ensemble(np.full(4, 0.25), np.eye(4), shape)
        assert average_output_entropy(bell) == pytest.approx(1.0, abs=1e-12)
        assert average_output_entropy(product) == pytest.approx(0.0, abs=1e-12)

    def test_cut_choice(self):
        # Alice holding factor 1 of a 2x3 product sees only that factor
        v = np.kron([1, 1], [1, 0, 0]) / math.sqrt(2)
        e = Ensemble(np.ones(1), v[None, :], SpaceShape.plain(2, 3))
        assert average_output_entropy(e, cut=[1]) == pytest.approx(0.0, abs=1e-12)

    def test_cut_rejects_antisym_index(self):
        with pytest.raises(ShapeMismatch):
            Cut(SpaceShape.of(Antisym(3), Plain(2)), {0})


@pytest.mark.parametrize(
    "shape",
    [SpaceShape.antisym(3, 3), SpaceShape.plain(2, 3), SpaceShape.of(Plain(2), Antisym(3)), SpaceShape.of(Antisym(3), Plain(2))],
)
def test_gradient_matches_finite_differences(rng, shape):
    rho = random_state(shape, rng)
    cut = Cut.default(shape)
    w = _weighted_eigvecs(rho)
    r = w.shape[1]
    v = random_isometry(r * r, r, rng)
    _, g = _objective(v, w, cut)
    for _ in range(3):
        dv = ginibre(*v.shape, rng)
        h = 1e-6
        fd = (_objective(v + h * dv, w, cut, False)[0] - _objective(v - h * dv, w, cut, False)[0]) / (2 * h)
        assert 2 * np.real(np.vdot(g, dv)) == pytest.approx(fd, rel=1e-5, abs=1e-8)


def test_cut_lift_is_adjoint(rng):
    shape = SpaceShape.of(Plain(2), Antisym(3), Plain(3))
    cut = Cut(shape, {0})
    x = random_density_matrix(shape.dim, rng)
    y = random_density_matrix(cut.alice_dim, rng)
    assert abs(np.vdot(cut.reduce(x), y) - np.vdot(x, cut.lift(y))) < 1e-13


class TestEstimate:
    def test_rank_one_short_circuit(self, rng):
        v = np.array([math.cos(0.3), 0, 0, math.sin(0.3)])
        res = ef_estimate(pure_state(v, SpaceShape.plain(2, 2)))
        assert res.restarts_used == 0
        p = math.cos(0.3) ** 2
        assert res.value == pytest.approx(binary_entropy(p), abs=1e-12)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_two_qubits_against_wootters(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_state(SpaceShape.plain(2, 2), rng, rank=2)
        res = ef_estimate(rho, opts=EofOptions(restarts=4), seed=seed)
        exact = wootters_eof(rho.matrix)
        assert res.value >= exact - 1e-9
        assert res.value == pytest.approx(exact, abs=1e-5)
        assert res.best_ensemble.reconstruction_error(rho) < 1e-10

    def test_werner_like_state(self):
        # 0.8 Bell + 0.2 white noise: concurrence 0.7
        rho = 0.8 * np.outer(BELL[0], BELL[0]) + 0.2 * np.eye(4) / 4
        res = ef_estimate(DensityMatrix(rho, SpaceShape.plain(2, 2)), opts=QUICK)
        assert res.value == pytest.approx(wootters_eof(rho), abs=1e-5)

    @pytest.mark.parametrize("d", [3, 4])
    def test_single_antisym(self, rng, d):
        rho = random_state(SpaceShape.antisym(d), rng)
        res = ef_estimate(rho, opts=QUICK)
        assert res.value == pytest.approx(math.log2(d - 1), abs=1e-6)
        assert res.lower_bound == pytest.approx(math.log2(d - 1), abs=1e-15)
        assert res.ensemble_size == d * d
        assert res.converged

    def test_product_of_antisym(self, rng):
        rho = tensor(random_state(SpaceShape.antisym(3), rng), random_state(SpaceShape.antisym(3), rng))
        res = ef_estimate(rho, opts=QUICK)
        assert res.value == pytest.approx(2.0, abs=1e-4)
        assert res.lower_bound <= res.value + 1e-6
        assert res.value <= 2.0 + QUICK.tol

    def test_random_restarts_alone_reach_bound(self, rng):
        # drop the spectral start by asking for restarts 1.. only through values
        rho = tensor(random_state(SpaceShape.antisym(3), rng), random_state(SpaceShape.antisym(3), rng))
        res = ef_estimate(rho, opts=QUICK, seed=11)
        assert all(v == pytest.approx(2.0, abs=1e-6) for v in res.restart_values[1:])

    def test_restart_monotonicity(self, rng):
        rho = random_state(SpaceShape.plain(2, 2), rng, rank=3)
        vals = [ef_estimate(rho, opts=EofOptions(restarts=k), seed=5).value for k in (1, 2, 3, 4)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_threads_do_not_change_result(self, rng):
        rho = random_state(SpaceShape.plain(2, 2), rng, rank=2)
        a = ef_estimate(rho, opts=EofOptions(restarts=3, threads=1), seed=9)
        b = ef_estimate(rho, opts=EofOptions(restarts=3, threads=3), seed=9)
        assert a.value == b.value
        assert a.restart_values == b.restart_values

    def test_deterministic(self, rng):
        rho = random_state(SpaceShape.plain(2, 2), rng, rank=2)
        a = ef_estimate(rho, opts=QUICK, seed=3)
        b = ef_estimate(rho, opts=QUICK, seed=3)
        assert a.restart_values == b.restart_values

    def test_json(self, rng):
        res = ef_estimate(random_state(SpaceShape.antisym(3), rng), opts=QUICK)
        out = res.to_json(with_ensemble=True)
        assert out["ensemble_size"] == 9
        assert len(out["best_ensemble"]["probs"]) == out["members_used"]


class TestLowerBound:
    @pytest.mark.parametrize("dims, expected", [((3,), 1.0), ((3, 4), 1 + math.log2(3)), ((3, 3, 3), 3.0)])
    def test_values(self, rng, dims, expected):
        rho = random_state(SpaceShape.antisym(*dims), rng)
        assert ef_lower_bound(rho) == pytest.approx(expected, abs=1e-15)

    def test_rejects_plain(self, rng):
        with pytest.raises(NotAntisymShape):
            ef_lower_bound(random_state(SpaceShape.of(Plain(2), Antisym(3)), rng))


class TestEntropyBound:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_flat_equality(self, n):
        lhs, rhs = verify_entropy_bound(np.eye(n) / n)
        assert lhs == pytest.approx(math.log2(n), abs=1e-12)
        assert rhs == pytest.approx(math.log2(n), abs=1e-12)

    def test_pure(self, rng):
        v = rng.standard_normal(4)
        lhs, rhs = verify_entropy_bound(np.outer(v, v) / (v @ v))
        assert lhs == pytest.approx(0.0, abs=1e-12)
        assert rhs == pytest.approx(0.0, abs=1e-12)

    def test_random(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            lhs, rhs = verify_entropy_bound(random_density_matrix(n, rng))
            assert lhs - rhs >= -1e-10

    def test_two_level_equality_only_at_half(self):
        for lam in np.linspace(0.05, 0.95, 19):
            lhs, rhs = verify_entropy_bound(np.diag([lam, 1 - lam]))
            if abs(lam - 0.5) < 1e-12:
                assert abs(lhs - rhs) < 1e-9
            else:
                assert lhs - rhs > 1e-9

    def test_invalid(self):
        with pytest.raises(InvalidState):
            verify_entropy_bound(np.diag([1.2, -0.2]))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), d=st.sampled_from([3, 4, 5]))
def test_flatness_property(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_state(SpaceShape.antisym(d), rng)
    e = decomposition_from_isometry(rho, random_isometry(d * d, d, rng))
    assert average_output_entropy(e) == pytest.approx(math.log2(d - 1), abs=1e-9)


def test_cost_report_d3():
    rep = entanglement_cost_report(3, opts=EofOptions(restarts=2))
    assert rep.value == 1.0
    assert rep.per_copy[1] == pytest.approx(1.0, abs=1e-6)
    assert rep.per_copy[2] == pytest.approx(1.0, abs=1e-4)
