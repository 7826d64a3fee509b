"""Jet bases, pushforward matrices, and the graded symmetric-power structure."""

from __future__ import annotations

import math

import numpy as np
import pytest

from koopman_gate.algebra import MultiPoly, PolyMap, eigenvalues, jacobian, poly_compose
from koopman_gate.jets import (
    graded_blocks,
    jet_basis,
    pushforward_matrix,
    symmetric_power_matrix,
)


def random_origin_fixing_map(rng, d, deg):
    comps = []
    for _ in range(d):
        terms = {}
        for alpha in jet_basis(d, deg).indices:
            if sum(alpha) == 0:
                continue
            if rng.random() < 0.7:
                terms[alpha] = complex(rng.normal(), rng.normal())
        if not terms:
            terms[(1,) + (0,) * (d - 1)] = 1.0
        comps.append(MultiPoly(d, terms))
    return PolyMap(d, d, tuple(comps))


class TestJetBasis:
    def test_univariate(self):
        assert jet_basis(1, 3).indices == ((0,), (1,), (2,), (3,))

    def test_two_vars_order_one(self):
        assert jet_basis(2, 1).indices == ((0, 0), (1, 0), (0, 1))

    def test_counts(self):
        assert len(jet_basis(3, 2)) == 10
        for d in (1, 2, 3, 4):
            for n in (0, 1, 2, 5):
                assert len(jet_basis(d, n)) == math.comb(n + d, d)

    def test_grading_offsets(self):
        basis = jet_basis(2, 3)
        for k in range(4):
            block = basis.indices[basis.block_slice(k)]
            assert all(sum(a) == k for a in block)
            assert len(block) == math.comb(k + 1, 1)


class TestPushforward:
    def test_linear_scaling(self):
        a = 2.5 - 1.0j
        m = pushforward_matrix(PolyMap.univariate([0, a]), (0,), 3)
        assert np.allclose(np.diag(m.matrix), [1, a, a**2, a**3])
        assert np.allclose(m.matrix, np.diag([1, a, a**2, a**3]))

    def test_square_at_one_first_order(self):
        m = pushforward_matrix(PolyMap.univariate([0, 0, 1]), (1,), 1)
        assert np.allclose(m.matrix, [[1, 0], [0, 2]])

    def test_square_at_one_second_order(self):
        # second derivative of h(z^2) at 1 is 4 h''(1) + 2 h'(1)
        m = pushforward_matrix(PolyMap.univariate([0, 0, 1]), (1,), 2)
        assert np.allclose(m.matrix[:, 2], [0, 2, 4])

    def test_rejects_non_fixed_point(self):
        with pytest.raises(ValueError, match="not a fixed point"):
            pushforward_matrix(PolyMap.univariate([0, 0, 1]), (0.5,), 2)

    def test_block_upper_triangular(self):
        rng = np.random.default_rng(21)
        f = random_origin_fixing_map(rng, 2, 3)
        m = pushforward_matrix(f, (0, 0), 4)
        basis = m.basis
        for k in range(5):
            below = m.matrix[basis.degree_starts[k + 1]:, basis.block_slice(k)]
            assert below.size == 0 or np.max(np.abs(below)) < 1e-12

    def test_functoriality(self):
        # composition of maps multiplies the matrices in the same order
        rng = np.random.default_rng(22)
        for d in (1, 2):
            f = random_origin_fixing_map(rng, d, 2)
            g = random_origin_fixing_map(rng, d, 2)
            mf = pushforward_matrix(f, (0,) * d, 3).matrix
            mg = pushforward_matrix(g, (0,) * d, 3).matrix
            mfg = pushforward_matrix(poly_compose(f, g), (0,) * d, 3).matrix
            err = np.max(np.abs(mfg - mf @ mg))
            assert err < 1e-8 * (1 + np.max(np.abs(mfg)))


class TestFaaDiBrunoRecursion:
    """Cross-check against the higher-order chain rule built as a recursion.

    Represent D(h o f) as sum_beta c_beta(z) (d^beta h)(f(z)) and push one
    partial at a time:  d_j adds d_j(c_beta) and c_beta * d_j f_m shifted to
    beta + e_m.  At a fixed point the evaluated coefficients are exactly the
    pushforward column.
    """

    @staticmethod
    def _recursion_column(f, p, alpha, basis):
        d = f.dim_in
        zero = (0,) * d
        state = {zero: MultiPoly.constant(d, 1.0)}
        for j, reps in enumerate(alpha):
            for _ in range(reps):
                new: dict = {}

                def add(beta, poly):
                    new[beta] = new.get(beta, MultiPoly.zero(d)) + poly

                for beta, coeff in state.items():
                    add(beta, coeff.partial(j))
                    for mth in range(d):
                        shifted = tuple(
                            b + 1 if i == mth else b for i, b in enumerate(beta)
                        )
                        add(shifted, coeff * f.components[mth].partial(j))
                state = {b: c for b, c in new.items() if not c.is_zero()}
        col = np.zeros(len(basis), dtype=complex)
        for beta, coeff in state.items():
            col[basis.position(beta)] = coeff.evaluate(p)
        return col

    def test_matches_direct_construction(self):
        rng = np.random.default_rng(41)
        for d, n in ((1, 4), (2, 3), (3, 2)):
            f = random_origin_fixing_map(rng, d, 2)
            p = (0,) * d
            push = pushforward_matrix(f, p, n)
            for col_idx, alpha in enumerate(push.basis.indices):
                col = self._recursion_column(f, p, alpha, push.basis)
                err = np.max(np.abs(col - push.matrix[:, col_idx]))
                assert err < 1e-9 * (1 + np.max(np.abs(col)))

    def test_matches_at_nonzero_fixed_point(self):
        f = PolyMap.univariate([0, 0, 1])  # fixes 1
        push = pushforward_matrix(f, (1,), 4)
        for col_idx, alpha in enumerate(push.basis.indices):
            col = self._recursion_column(f, (1,), alpha, push.basis)
            assert np.max(np.abs(col - push.matrix[:, col_idx])) < 1e-9


class TestSymmetricPower:
    def test_univariate_power(self):
        assert symmetric_power_matrix(np.array([[2.0]]), 5) == pytest.approx(np.array([[32.0]]))

    def test_swap(self):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(symmetric_power_matrix(swap, 1), swap)

    def test_diagonal_degree_two(self):
        m = symmetric_power_matrix(np.diag([2.0, 3.0]), 2)
        assert np.allclose(m, np.diag([4.0, 6.0, 9.0]))

    def test_dimension(self):
        for d, n in ((2, 3), (3, 2), (3, 5)):
            a = np.eye(d)
            m = symmetric_power_matrix(a, n)
            assert m.shape[0] == math.comb(n + d - 1, d - 1)


class TestGradedBlocks:
    def test_linear_diag(self):
        a = 0.5 + 0.25j
        blocks = graded_blocks(pushforward_matrix(PolyMap.univariate([0, a]), (0,), 4))
        for k, blk in enumerate(blocks.blocks):
            assert blk[0, 0] == pytest.approx(a**k)

    def test_square_blocks_are_powers_of_two(self):
        blocks = graded_blocks(pushforward_matrix(PolyMap.univariate([0, 0, 1]), (1,), 3))
        assert [b[0, 0].real for b in blocks.blocks] == [1, 2, 4, 8]

    def test_linear_map_blocks_equal_symmetric_powers_exactly(self):
        rng = np.random.default_rng(31)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        f = PolyMap.affine(a)
        blocks = graded_blocks(pushforward_matrix(f, (0, 0), 4))
        for k, blk in enumerate(blocks.blocks):
            assert np.max(np.abs(blk - symmetric_power_matrix(a, k))) < 1e-12

    def test_graded_consistency_random_maps(self):
        rng = np.random.default_rng(32)
        for d in (1, 2, 3):
            f = random_origin_fixing_map(rng, d, 3)
            push = pushforward_matrix(f, (0,) * d, 4)
            blocks = graded_blocks(push)
            jac = jacobian(f, (0,) * d)
            for k, blk in enumerate(blocks.blocks):
                expected = symmetric_power_matrix(jac, k)
                err = np.max(np.abs(blk - expected))
                assert err < 1e-9 * (1 + np.max(np.abs(expected)))

    def test_eigenvalue_power_law(self):
        rng = np.random.default_rng(33)
        f = random_origin_fixing_map(rng, 2, 2)
        jac = jacobian(f, (0, 0))
        lam = eigenvalues(jac)
        blocks = graded_blocks(pushforward_matrix(f, (0, 0), 4))
        for k in range(5):
            expected = sorted(
                (lam[0] ** i * lam[1] ** (k - i) for i in range(k + 1)),
                key=lambda z: (-abs(z), z.real, z.imag),
            )
            got = eigenvalues(np.asarray(blocks.blocks[k]))
            for a, b in zip(got, expected):
                assert abs(a - b) < 1e-7 * (1 + abs(b))

    def test_spectral_radius_growth(self):
        # with an expanding eigenvalue the block radii grow geometrically
        f = PolyMap.univariate([0, 0, 1])
        blocks = graded_blocks(pushforward_matrix(f, (1,), 6)).blocks
        lam = 2.0
        radii = [max(abs(z) for z in eigenvalues(np.asarray(b))) for b in blocks]
        for k in range(1, len(radii)):
            assert radii[k] / radii[k - 1] >= lam - 1e-6


def test_pushforward_serialization():
    push = pushforward_matrix(PolyMap.univariate([0, 0, 1]), (1,), 2)
    blob = push.to_json()
    assert blob["basis"]["indices"] == [[0], [1], [2]]
    flat = np.array([re + 1j * im for re, im in blob["entries"]]).reshape(3, 3)
    assert np.allclose(flat, push.matrix)
