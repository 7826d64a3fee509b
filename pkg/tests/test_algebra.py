"""Polynomial arithmetic, root finding, and small eigenproblems."""

from __future__ import annotations

import math

import numpy as np
import pytest

from koopman_gate.algebra import (
    MultiPoly,
    PolyMap,
    eigenvalues,
    jacobian,
    poly_compose,
    poly_eval,
    roots_univariate,
)


def _random_polymap(rng, d, deg, fix_origin=False):
    comps = []
    for _ in range(d):
        terms = {}
        from koopman_gate.jets import jet_basis

        for alpha in jet_basis(d, deg).indices:
            if fix_origin and sum(alpha) == 0:
                continue
            if rng.random() < 0.6:
                terms[alpha] = complex(rng.normal(), rng.normal())
        if not any(sum(a) >= 1 for a in terms):
            terms[(1,) + (0,) * (d - 1)] = 1.0
        comps.append(MultiPoly(d, terms))
    return PolyMap(d, d, tuple(comps))


class TestEval:
    def test_square(self):
        p = MultiPoly(1, {(2,): 1.0})
        assert poly_eval(p, (3.0,)) == 9.0

    def test_two_vars(self):
        p = MultiPoly(2, {(1, 1): 1.0, (0, 0): 1.0})
        assert poly_eval(p, (2.0, 5.0)) == 11.0

    def test_complex_coeff(self):
        p = MultiPoly(1, {(1,): 1.0 + 1.0j})
        assert poly_eval(p, (1.0 - 1.0j,)) == pytest.approx(2.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            poly_eval(MultiPoly(2, {(1, 0): 1.0}), (1.0,))


class TestCompose:
    def test_square_of_shift(self):
        f = PolyMap.univariate([0, 0, 1])
        g = PolyMap.univariate([1, 1])
        fg = poly_compose(f, g)
        assert fg.components[0].terms == {(0,): 1.0, (1,): 2.0, (2,): 1.0}

    def test_identity(self):
        g = PolyMap.univariate([2, 0, 3])
        assert poly_compose(PolyMap.identity(1), g).components[0].terms == g.components[0].terms

    def test_henon_square_pointwise(self):
        # evaluate both sides at random points; the composition is exact
        from koopman_gate.dynamics import AutWord, HenonLetter, word_to_polymap

        h = word_to_polymap(AutWord((HenonLetter(MultiPoly.from_univariate([0, 0, 1]), 1.0),)))
        hh = poly_compose(h, h)
        assert hh.degree() == 4
        rng = np.random.default_rng(3)
        for _ in range(20):
            z = tuple(rng.normal(size=2) + 1j * rng.normal(size=2))
            direct = h.evaluate(h.evaluate(z))
            composed = hh.evaluate(z)
            assert max(abs(a - b) for a, b in zip(direct, composed)) < 1e-9

    def test_associativity(self):
        rng = np.random.default_rng(11)
        for d in (1, 2, 3):
            f = _random_polymap(rng, d, 2)
            g = _random_polymap(rng, d, 2)
            h = _random_polymap(rng, d, 2)
            left = poly_compose(poly_compose(f, g), h)
            right = poly_compose(f, poly_compose(g, h))
            for a, b in zip(left.components, right.components):
                keys = set(a.terms) | set(b.terms)
                worst = max(
                    abs(a.terms.get(k, 0) - b.terms.get(k, 0)) / (1 + abs(a.terms.get(k, 0)))
                    for k in keys
                )
                assert worst < 1e-9


class TestJacobian:
    def test_square_map(self):
        f = PolyMap.univariate([0, 0, 1])
        assert jacobian(f, (1.0,))[0, 0] == 2.0

    def test_henon_letter(self):
        from koopman_gate.dynamics import AutWord, HenonLetter, word_to_polymap

        q = MultiPoly.from_univariate([1.0, 2.0, 3.0])  # 3x^2 + 2x + 1
        b = 0.7 + 0.1j
        h = word_to_polymap(AutWord((HenonLetter(q, b),)))
        x0 = 1.3 - 0.2j
        jac = jacobian(h, (x0, 0.5))
        qprime = q.partial(0).evaluate((x0,))
        assert jac[0, 0] == pytest.approx(qprime)
        assert jac[0, 1] == pytest.approx(-b)
        assert jac[1, 0] == 1.0 and jac[1, 1] == 0.0

    def test_linear_map(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        f = PolyMap.affine(a)
        assert np.allclose(jacobian(f, (9.0, -2.0)), a)

    def test_chain_rule(self):
        rng = np.random.default_rng(5)
        for d in (1, 2):
            f = _random_polymap(rng, d, 2)
            g = _random_polymap(rng, d, 2)
            p = tuple(rng.normal(size=d) * 0.5)
            left = jacobian(poly_compose(f, g), p)
            right = jacobian(f, g.evaluate(p)) @ jacobian(g, p)
            assert np.max(np.abs(left - right)) < 1e-9 * (1 + np.max(np.abs(left)))


class TestRoots:
    def test_simple(self):
        roots = roots_univariate(MultiPoly.from_univariate([0, -1, 1]))
        assert [(round(z.real), m) for z, m in roots] == [(0, 1), (1, 1)]

    def test_double_root(self):
        roots = roots_univariate(MultiPoly.from_univariate([4, -4, 1]))
        assert len(roots) == 1
        z, mult = roots[0]
        assert mult == 2 and abs(z - 2.0) < 1e-8

    def test_roots_of_unity(self):
        roots = roots_univariate(MultiPoly.from_univariate([-1, 0, 0, 1]))
        assert len(roots) == 3
        vals = [z for z, _ in roots]
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(abs(vals[i] - vals[j]) - math.sqrt(3)) < 1e-9

    def test_multiplicities_sum_to_degree_and_vieta(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            deg = rng.integers(2, 9)
            coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            p = MultiPoly.from_univariate(coeffs)
            roots = roots_univariate(p)
            assert sum(m for _, m in roots) == deg
            prod = np.prod([z**m for z, m in roots])
            lhs = coeffs[-1] * prod * (-1) ** deg
            assert abs(lhs - coeffs[0]) < 1e-8 * (1 + abs(coeffs[0]))

    def test_rejects_zero_and_constant(self):
        with pytest.raises(ValueError):
            roots_univariate(MultiPoly.zero(1))
        with pytest.raises(ValueError):
            roots_univariate(MultiPoly.from_univariate([3.0]))


class TestEigenvalues:
    def test_quadratic_formula_case(self):
        vals = eigenvalues(np.array([[3.0, -0.5], [1.0, 0.0]]))
        expected = sorted(np.roots([1, -3, 0.5]), key=abs, reverse=True)
        for a, b in zip(vals, expected):
            assert abs(a - b) < 1e-10

    def test_identity(self):
        assert eigenvalues(np.eye(2)) == [1.0, 1.0]

    def test_diagonal(self):
        vals = eigenvalues(np.diag([5.0, 2.0]))
        assert vals == [5.0, 2.0]

    def test_trace_det_reconstruction(self):
        rng = np.random.default_rng(13)
        for n in (2, 3, 4, 6, 9):
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            vals = eigenvalues(m)
            assert len(vals) == n
            assert abs(sum(vals) - np.trace(m)) < 1e-8 * (1 + abs(np.trace(m)))
            det = np.linalg.det(m)
            assert abs(np.prod(vals) - det) < 1e-8 * (1 + abs(det))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            eigenvalues(np.ones((2, 3)))


def test_serialization_round_trip():
    p = MultiPoly(2, {(2, 0): 1.5 - 0.5j, (0, 1): 2.0})
    assert MultiPoly.from_json(p.to_json()).terms == p.terms
    f = PolyMap(2, 2, (p, MultiPoly.variable(2, 0)))
    f2 = PolyMap.from_json(f.to_json())
    assert all(a.terms == b.terms for a, b in zip(f.components, f2.components))


def test_no_nan_accepted():
    with pytest.raises(ValueError):
        MultiPoly(1, {(1,): float("nan")})
