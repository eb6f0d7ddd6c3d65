import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entmaj.errors import MajorizationFailed, NotDoublyStochastic, NotOrthogonal
from entmaj.seqmaj import ProbVector, is_majorized, random_majorized_pair, sort_desc
from entmaj.xfer import (
    BirkhoffDecomposition,
    DoublyStochasticMatrix,
    TTransform,
    apply_t_transform,
    birkhoff_decompose,
    chain_to_doubly_stochastic,
    find_transfer_chain,
    orthostochastic_of,
    schur_horn_orthogonal,
)


def replay(chain, b):
    cur = ProbVector(np.pad(sort_desc(b).entries, (0, chain.d - len(b.entries))))
    for step in chain.steps:
        cur = apply_t_transform(step, cur)
    return cur.entries


class TestApplyTTransform:
    def test_identity(self):
        out = apply_t_transform(TTransform(0, 1, 1.0), ProbVector([0.7, 0.3]))
        np.testing.assert_allclose(out.entries, [0.7, 0.3])

    def test_swap(self):
        out = apply_t_transform(TTransform(0, 1, 0.0), ProbVector([0.7, 0.3]))
        np.testing.assert_allclose(out.entries, [0.3, 0.7])

    def test_even_mix(self):
        out = apply_t_transform(TTransform(0, 1, 0.5), ProbVector([0.75, 0.25]))
        np.testing.assert_allclose(out.entries, [0.5, 0.5])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            apply_t_transform(TTransform(0, 5, 0.5), ProbVector([0.5, 0.5]))


class TestFindTransferChain:
    def test_two_coordinate_example(self):
        chain = find_transfer_chain(ProbVector([0.5, 0.5]), ProbVector([0.75, 0.25]))
        assert len(chain.steps) == 1
        step = chain.steps[0]
        assert (step.i, step.j) == (0, 1)
        assert step.t == pytest.approx(0.5, abs=1e-12)

    def test_equal_inputs_give_empty_chain(self):
        chain = find_transfer_chain(ProbVector([0.4, 0.6]), ProbVector([0.6, 0.4]))
        assert chain.steps == ()

    def test_transfer_into_zero(self):
        chain = find_transfer_chain(ProbVector([0.5, 0.25, 0.25]),
                                    ProbVector([0.5, 0.5, 0.0]))
        assert len(chain.steps) == 1
        step = chain.steps[0]
        assert (step.i, step.j) == (1, 2)
        assert step.t == pytest.approx(0.5, abs=1e-12)

    def test_rejects_non_majorized(self):
        with pytest.raises(MajorizationFailed) as err:
            find_transfer_chain(ProbVector([0.6, 0.4]), ProbVector([0.5, 0.5]))
        assert err.value.verdict.first_violation.k == 1

    @given(st.integers(min_value=0, max_value=2**32 - 1),
           st.integers(min_value=1, max_value=12))
    @settings(max_examples=60, deadline=None)
    def test_replay_reaches_target(self, seed, d):
        rng = np.random.default_rng(seed)
        a, b = random_majorized_pair(d, rng)
        chain = find_transfer_chain(a, b)
        assert len(chain.steps) <= d - 1 if d > 1 else chain.steps == ()
        target = sort_desc(a).entries
        assert np.abs(replay(chain, b) - target).max() <= 1e-9


class TestChainToDoublyStochastic:
    def test_single_even_step(self):
        chain = find_transfer_chain(ProbVector([0.5, 0.5]), ProbVector([0.75, 0.25]))
        q = chain_to_doubly_stochastic(chain)
        np.testing.assert_allclose(q.entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)

    def test_empty_chain_is_identity(self):
        from entmaj.xfer import TransferChain
        q = chain_to_doubly_stochastic(TransferChain(d=3, steps=()))
        np.testing.assert_array_equal(q.entries, np.eye(3))

    def test_maps_source_to_target(self):
        a = ProbVector([0.5, 0.25, 0.25])
        b = ProbVector([0.5, 0.5, 0.0])
        q = chain_to_doubly_stochastic(find_transfer_chain(a, b))
        np.testing.assert_allclose(q.entries @ sort_desc(b).entries,
                                   sort_desc(a).entries, atol=1e-12)

    def test_round_trip_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            d = int(rng.integers(2, 65))
            a, b = random_majorized_pair(d, rng)
            q = chain_to_doubly_stochastic(find_transfer_chain(a, b))
            err = np.abs(q.entries @ sort_desc(b).entries - sort_desc(a).entries).max()
            assert err <= 1e-9

    def test_image_is_majorized_by_argument(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            d = int(rng.integers(2, 17))
            a, b = random_majorized_pair(d, rng)
            q = chain_to_doubly_stochastic(find_transfer_chain(a, b))
            v = rng.dirichlet(np.ones(d))
            assert is_majorized(q.entries @ v, v, 1e-9).holds


class TestBirkhoffDecompose:
    def test_even_two_by_two(self):
        dec = birkhoff_decompose(np.array([[0.5, 0.5], [0.5, 0.5]]))
        assert sorted(w for w in dec.weights) == [0.5, 0.5]
        perms = {tuple(p) for p in dec.permutations}
        assert perms == {(0, 1), (1, 0)}

    def test_identity(self):
        dec = birkhoff_decompose(np.eye(3))
        assert len(dec.weights) == 1
        assert dec.weights[0] == pytest.approx(1.0)
        assert tuple(dec.permutations[0]) == (0, 1, 2)

    def test_permutation_matrix(self):
        p = np.eye(4)[[2, 0, 3, 1]]
        dec = birkhoff_decompose(p)
        assert len(dec.weights) == 1
        assert tuple(dec.permutations[0]) == (2, 0, 3, 1)

    def test_rejects_non_doubly_stochastic(self):
        with pytest.raises(NotDoublyStochastic):
            birkhoff_decompose(np.array([[0.9, 0.0], [0.1, 1.0]]))

    def test_reconstruction_random_chains(self):
        rng = np.random.default_rng(17)
        for _ in range(40):
            d = int(rng.integers(2, 33))
            a, b = random_majorized_pair(d, rng)
            q = chain_to_doubly_stochastic(find_transfer_chain(a, b))
            dec = birkhoff_decompose(q, tol=1e-9)
            assert len(dec.weights) <= (d - 1) ** 2 + 1
            assert np.abs(dec.matrix() - q.entries).max() <= 1e-8
            assert dec.weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_term_bound_enforced_by_type(self):
        with pytest.raises(ValueError):
            BirkhoffDecomposition(
                weights=np.full(3, 1 / 3),
                permutations=tuple(np.array([0, 1]) for _ in range(3)))


class TestSchurHorn:
    def test_pure_to_even_rotation(self):
        u = schur_horn_orthogonal(ProbVector([0.5, 0.5]), ProbVector([1.0, 0.0]))
        s = np.sqrt(0.5)
        np.testing.assert_allclose(u.entries, [[s, -s], [s, s]], atol=1e-12)
        diag = np.diag(u.entries @ np.diag([1.0, 0.0]) @ u.entries.T)
        np.testing.assert_allclose(diag, [0.5, 0.5], atol=1e-12)

    def test_equal_inputs_identity(self):
        u = schur_horn_orthogonal(ProbVector([0.6, 0.4]), ProbVector([0.6, 0.4]))
        np.testing.assert_array_equal(u.entries, np.eye(2))

    def test_rejects_non_majorized(self):
        with pytest.raises(MajorizationFailed):
            schur_horn_orthogonal(ProbVector([0.9, 0.1]), ProbVector([0.6, 0.4]))

    def test_diagonal_matches_at_d6(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            a, b = random_majorized_pair(6, rng)
            u = schur_horn_orthogonal(a, b)
            diag = np.diag(u.entries @ np.diag(sort_desc(b).entries) @ u.entries.T)
            assert np.abs(diag - sort_desc(a).entries).max() <= 1e-9

    def test_orthostochastic_consistency(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            d = int(rng.integers(2, 17))
            a, b = random_majorized_pair(d, rng)
            q = orthostochastic_of(schur_horn_orthogonal(a, b))
            err = np.abs(q.entries @ sort_desc(b).entries - sort_desc(a).entries).max()
            assert err <= 1e-8


class TestOrthostochastic:
    def test_identity(self):
        q = orthostochastic_of(np.eye(3))
        np.testing.assert_array_equal(q.entries, np.eye(3))

    def test_rotation(self):
        s = np.sqrt(0.5)
        q = orthostochastic_of(np.array([[s, -s], [s, s]]))
        np.testing.assert_allclose(q.entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)

    def test_random_orthogonal_rows_and_columns(self):
        rng = np.random.default_rng(31)
        m = rng.standard_normal((8, 8))
        u, _ = np.linalg.qr(m)
        q = orthostochastic_of(u)
        np.testing.assert_allclose(q.entries.sum(axis=0), np.ones(8), atol=1e-9)
        np.testing.assert_allclose(q.entries.sum(axis=1), np.ones(8), atol=1e-9)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(NotOrthogonal):
            orthostochastic_of(np.array([[1.0, 0.1], [0.0, 1.0]]))

    def test_image_majorized(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            u, _ = np.linalg.qr(rng.standard_normal((6, 6)))
            q = orthostochastic_of(u)
            v = rng.dirichlet(np.ones(6))
            assert is_majorized(q.entries @ v, v, 1e-9).holds


class TestDoublyStochasticType:
    def test_validates_sums(self):
        with pytest.raises(NotDoublyStochastic):
            DoublyStochasticMatrix(np.array([[0.6, 0.5], [0.4, 0.5]]))

    def test_validates_range(self):
        with pytest.raises(NotDoublyStochastic):
            DoublyStochasticMatrix(np.array([[1.5, -0.5], [-0.5, 1.5]]))
