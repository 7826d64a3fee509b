"""Jet filtrations at a fixed point and the pushforward action on them.

At a fixed point p of a polynomial self-map f, the derivative functionals
``h -> (d^alpha h)(p)`` with |alpha| <= n span a finite-dimensional space that
the dual of ``h -> h o f`` preserves.  This module builds the ordered basis of
those functionals, the exact matrix of the pushforward on it, and the graded
symmetric-power action of the Jacobian that the diagonal blocks must equal.

Convention: column alpha of the pushforward matrix holds the coordinates of
the image of the order-alpha functional, so matrices compose covariantly,
``matrix(f o g) = matrix(f) @ matrix(g)`` at a common fixed point.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Index, MultiPoly, Point, PolyMap, grlex_key, multi_factorial

__all__ = [
    "JetBasis",
    "PushforwardMatrix",
    "GradedBlocks",
    "jet_basis",
    "homogeneous_indices",
    "pushforward_matrix",
    "symmetric_power_matrix",
    "graded_blocks",
]

#: Per-coordinate fixed-point residual accepted by pushforward_matrix.
FIXED_POINT_TOL = 1e-9

#: Largest below-block magnitude tolerated before graded_blocks raises.
BLOCK_LEAK_TOL = 1e-9


def _indices_of_degree(d: int, k: int) -> list[Index]:
    if d == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        for rest in _indices_of_degree(d - 1, k - first):
            out.append((first,) + rest)
    return out


@functools.lru_cache(maxsize=None)
def homogeneous_indices(d: int, k: int) -> tuple[Index, ...]:
    """All exponents of total degree exactly k in d variables, graded-lex order."""
    return tuple(_indices_of_degree(d, k))


@dataclass(frozen=True)
class JetBasis:
    """Ordered basis of derivative multi-indices |alpha| <= order in dim variables."""

    dim: int
    order: int
    indices: tuple[Index, ...]
    degree_starts: tuple[int, ...]  # degree_starts[k] is the offset of degree k

    def __len__(self) -> int:
        return len(self.indices)

    def position(self, alpha: Index) -> int:
        d = sum(alpha)
        lo = self.degree_starts[d]
        hi = self.degree_starts[d + 1]
        for i in range(lo, hi):
            if self.indices[i] == alpha:
                return i
        raise KeyError(f"{alpha} not in jet basis")

    def block_slice(self, k: int) -> slice:
        return slice(self.degree_starts[k], self.degree_starts[k + 1])

    def to_json(self) -> dict:
        return {"dim": self.dim, "order": self.order, "indices": [list(a) for a in self.indices]}


@functools.lru_cache(maxsize=None)
def jet_basis(d: int, n: int) -> JetBasis:
    """Complete graded-lex enumeration of multi-indices with |alpha| <= n."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if n < 0:
        raise ValueError("jet order must be >= 0")
    indices: list[Index] = []
    starts = [0]
    for k in range(n + 1):
        indices.extend(homogeneous_indices(d, k))
        starts.append(len(indices))
    assert len(indices) == math.comb(n + d, d)
    return JetBasis(d, n, tuple(indices), tuple(starts))


@dataclass(frozen=True)
class PushforwardMatrix:
    """Matrix of the pushforward on the jet basis at a fixed point of ``map``."""

    basis: JetBasis
    matrix: np.ndarray
    point: Point
    map: PolyMap

    def to_json(self) -> dict:
        entries = [[z.real, z.imag] for z in self.matrix.ravel(order="C")]
        return {
            "basis": self.basis.to_json(),
            "point": [[z.real, z.imag] for z in self.point],
            "entries": entries,
            "map": self.map.to_json(),
        }


@dataclass(frozen=True)
class GradedBlocks:
    """Diagonal blocks of a pushforward matrix along the degree grading."""

    blocks: tuple[np.ndarray, ...]
    leakage: float


def _shift_to_origin(f: PolyMap, p: Sequence[complex]) -> PolyMap:
    """Conjugate by translation: w -> f(p + w) - p, which fixes the origin."""
    d = f.dim_in
    translation = PolyMap(
        d,
        d,
        tuple(
            MultiPoly(d, {tuple(int(i == j) for i in range(d)): 1.0, (0,) * d: complex(p[j])})
            for j in range(d)
        ),
    )
    shifted = f.compose(translation)
    comps = tuple(
        comp - MultiPoly.constant(d, complex(p[m])) for m, comp in enumerate(shifted.components)
    )
    return PolyMap(d, d, comps)


def pushforward_matrix(f: PolyMap, p: Sequence[complex], n: int) -> PushforwardMatrix:
    """Exact matrix of the pushforward on jets of order <= n at a fixed point p.

    Column alpha is computed by symbolically differentiating ``h o f`` for the
    monomial test functions h = (z - p)^gamma: with F(w) = f(p + w) - p,

        M[gamma, alpha] = (alpha! / gamma!) * [w^alpha] F^gamma,

    where F^gamma is the product of the component powers, truncated at degree
    n.  Since F has no constant term the matrix is block upper triangular with
    respect to the degree grading.
    """
    if f.dim_in != f.dim_out:
        raise ValueError("pushforward requires a self-map")
    if n < 0:
        raise ValueError("jet order must be >= 0")
    if len(p) != f.dim_in:
        raise ValueError("point dimension mismatch")
    image = f.evaluate(p)
    residual = max(abs(image[i] - complex(p[i])) for i in range(len(p)))
    if residual > FIXED_POINT_TOL:
        raise ValueError(
            f"not a fixed point: residual {residual:.3e} exceeds {FIXED_POINT_TOL:.1e}"
        )

    basis = jet_basis(f.dim_in, n)
    d = f.dim_in
    shifted = _shift_to_origin(f, p)
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)

    # row gamma needs prod_i F_i^gamma_i; reuse the parent product gamma - e_i
    products: dict[Index, MultiPoly] = {}
    one = MultiPoly.constant(d, 1.0)
    for row, gamma in enumerate(basis.indices):
        if sum(gamma) == 0:
            prod = one
        else:
            i = next(j for j, g in enumerate(gamma) if g > 0)
            parent = tuple(g - 1 if j == i else g for j, g in enumerate(gamma))
            prod = products[parent].mul_truncated(shifted.components[i], n)
        products[gamma] = prod
        gfact = multi_factorial(gamma)
        for alpha, c in prod.terms.items():
            if sum(alpha) <= n:
                matrix[row, basis.position(alpha)] = c * multi_factorial(alpha) / gfact
    return PushforwardMatrix(basis, matrix, tuple(complex(z) for z in p), f)


def symmetric_power_matrix(a: np.ndarray, n: int) -> np.ndarray:
    """Matrix of t^gamma -> prod_i (sum_m a[m,i] t_m)^gamma_i on degree-n forms.

    Basis is the graded-lex list of degree-n monomials in d variables; the
    result has size C(n+d-1, d-1).
    """
    mat = np.asarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("symmetric power requires a square matrix")
    if n < 0:
        raise ValueError("power must be >= 0")
    d = mat.shape[0]
    mono = homogeneous_indices(d, n)
    pos = {alpha: i for i, alpha in enumerate(mono)}
    out = np.zeros((len(mono), len(mono)), dtype=complex)

    linear_forms = [
        MultiPoly(d, {tuple(int(r == m) for r in range(d)): mat[m, i] for m in range(d)})
        for i in range(d)
    ]
    for col, gamma in enumerate(mono):
        prod = MultiPoly.constant(d, 1.0)
        for i, g in enumerate(gamma):
            for _ in range(g):
                prod = prod * linear_forms[i]
        for alpha, c in prod.terms.items():
            out[pos[alpha], col] = c
    return out


def graded_blocks(m: PushforwardMatrix) -> GradedBlocks:
    """Extract the diagonal degree blocks and measure below-block leakage.

    Raises ValueError when any entry strictly below the block diagonal exceeds
    BLOCK_LEAK_TOL, which signals a bug or a point that is not actually fixed.
    """
    basis = m.basis
    blocks = []
    leak = 0.0
    for k in range(basis.order + 1):
        sl = basis.block_slice(k)
        blocks.append(np.array(m.matrix[sl, sl]))
        below = m.matrix[basis.degree_starts[k + 1]:, sl]
        if below.size:
            leak = max(leak, float(np.max(np.abs(below))))
    if leak > BLOCK_LEAK_TOL:
        raise ValueError(f"filtration violated: below-block leakage {leak:.3e}")
    return GradedBlocks(tuple(blocks), leak)
