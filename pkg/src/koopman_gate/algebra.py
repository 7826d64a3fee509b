"""Complex multivariate polynomials, polynomial maps, and small dense eigenproblems.

Polynomials are stored sparsely as ``{exponent tuple: complex coefficient}``
with zero coefficients dropped.  The monomial order used everywhere in this
package is graded lexicographic: ascending total degree, and within a degree
the first variable dominates (for d=2, degree 2: ``t1^2, t1*t2, t2^2``).

All values are immutable after construction and every function here is pure,
so concurrent use needs no locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

Index = tuple[int, ...]
Point = tuple[complex, ...]

__all__ = [
    "Index",
    "Point",
    "MultiPoly",
    "PolyMap",
    "grlex_key",
    "multi_factorial",
    "poly_eval",
    "poly_compose",
    "jacobian",
    "roots_univariate",
    "eigenvalues",
]

#: Absolute clustering radius applied to polished univariate roots.
ROOT_CLUSTER_RADIUS = 1e-8


def grlex_key(alpha: Index) -> tuple:
    """Graded-lex sort key: total degree first, then x1 before x2 before ..."""
    return (sum(alpha), tuple(-a for a in alpha))


def multi_factorial(alpha: Index) -> float:
    """alpha! = alpha_1! * ... * alpha_d!"""
    return math.prod(math.factorial(a) for a in alpha)


def _require_finite(values: Iterable[complex], what: str) -> None:
    arr = np.asarray(list(values), dtype=complex)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite value in {what}")


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial over C in ``dim`` variables.

    ``terms`` maps exponent tuples (length ``dim``, nonnegative entries) to
    nonzero complex coefficients.  The zero polynomial has no terms.
    """

    dim: int
    terms: Mapping[Index, complex]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("polynomial dimension must be >= 1")
        clean: dict[Index, complex] = {}
        for alpha, c in self.terms.items():
            key = tuple(int(a) for a in alpha)
            if len(key) != self.dim or any(a < 0 for a in key):
                raise ValueError(f"exponent {alpha!r} invalid for dim {self.dim}")
            val = complex(c)
            if val != 0:
                clean[key] = clean.get(key, 0) + val
        clean = {a: c for a, c in clean.items() if c != 0}
        _require_finite(clean.values(), "polynomial coefficients")
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "MultiPoly":
        return MultiPoly(dim, {})

    @staticmethod
    def constant(dim: int, value: complex) -> "MultiPoly":
        return MultiPoly(dim, {(0,) * dim: value})

    @staticmethod
    def variable(dim: int, i: int) -> "MultiPoly":
        if not 0 <= i < dim:
            raise ValueError(f"variable index {i} out of range for dim {dim}")
        alpha = [0] * dim
        alpha[i] = 1
        return MultiPoly(dim, {tuple(alpha): 1.0})

    @staticmethod
    def from_univariate(coeffs: Sequence[complex]) -> "MultiPoly":
        """Build a dim-1 polynomial from ascending coefficients [c0, c1, ...]."""
        return MultiPoly(1, {(k,): c for k, c in enumerate(coeffs)})

    # -- basic queries ------------------------------------------------------

    def degree(self) -> int:
        """Total degree; the zero polynomial reports degree 0."""
        return max((sum(a) for a in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def univariate_coeffs(self) -> np.ndarray:
        """Ascending dense coefficient array; only valid for dim == 1."""
        if self.dim != 1:
            raise ValueError("univariate_coeffs requires dim == 1")
        out = np.zeros(self.degree() + 1, dtype=complex)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def sorted_terms(self) -> list[tuple[Index, complex]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in polynomial addition")
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return MultiPoly(self.dim, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.dim, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, factor: complex) -> "MultiPoly":
        return MultiPoly(self.dim, {a: factor * c for a, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in polynomial product")
        out: dict[Index, complex] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0) + ca * cb
        return MultiPoly(self.dim, out)

    def mul_truncated(self, other: "MultiPoly", max_degree: int) -> "MultiPoly":
        """Product with all terms of total degree > max_degree discarded."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in polynomial product")
        out: dict[Index, complex] = {}
        for a, ca in self.terms.items():
            da = sum(a)
            if da > max_degree:
                continue
            for b, cb in other.terms.items():
                if da + sum(b) > max_degree:
                    continue
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0) + ca * cb
        return MultiPoly(self.dim, out)

    def pow(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.constant(self.dim, 1.0)
        for _ in range(n):
            result = result * self
        return result

    # -- calculus -----------------------------------------------------------

    def partial(self, i: int) -> "MultiPoly":
        """Holomorphic partial derivative with respect to variable i."""
        out: dict[Index, complex] = {}
        for a, c in self.terms.items():
            if a[i] == 0:
                continue
            key = tuple(x - 1 if j == i else x for j, x in enumerate(a))
            out[key] = out.get(key, 0) + a[i] * c
        return MultiPoly(self.dim, out)

    def derivative(self, alpha: Index) -> "MultiPoly":
        """Apply the mixed partial d^alpha."""
        if len(alpha) != self.dim:
            raise ValueError("derivative multi-index has wrong length")
        p = self
        for i, k in enumerate(alpha):
            for _ in range(k):
                p = p.partial(i)
        return p

    def evaluate(self, z: Sequence[complex]) -> complex:
        """Evaluate at a point, caching variable powers for exactness and speed."""
        if len(z) != self.dim:
            raise ValueError(f"point has length {len(z)}, polynomial dim {self.dim}")
        powers: list[dict[int, complex]] = [{0: 1.0} for _ in range(self.dim)]

        def var_pow(i: int, k: int) -> complex:
            cache = powers[i]
            if k not in cache:
                cache[k] = var_pow(i, k - 1) * complex(z[i])
            return cache[k]

        total = 0.0 + 0.0j
        for a, c in self.sorted_terms():
            mono = 1.0 + 0.0j
            for i, k in enumerate(a):
                if k:
                    mono *= var_pow(i, k)
            total += c * mono
        if not np.isfinite(total):
            raise ValueError("polynomial evaluation overflowed")
        return total

    def compose(self, args: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute args[i] for variable i; exact coefficient expansion."""
        if len(args) != self.dim:
            raise ValueError("compose needs one argument polynomial per variable")
        if args:
            d = args[0].dim
            if any(g.dim != d for g in args):
                raise ValueError("argument polynomials must share a dimension")
        else:  # pragma: no cover - dim >= 1 always
            raise ValueError("empty substitution")
        d = args[0].dim
        pow_cache: list[dict[int, MultiPoly]] = [
            {0: MultiPoly.constant(d, 1.0)} for _ in range(self.dim)
        ]

        def arg_pow(i: int, k: int) -> MultiPoly:
            cache = pow_cache[i]
            if k not in cache:
                cache[k] = arg_pow(i, k - 1) * args[i]
            return cache[k]

        total = MultiPoly.zero(d)
        for a, c in self.sorted_terms():
            mono = MultiPoly.constant(d, c)
            for i, k in enumerate(a):
                if k:
                    mono = mono * arg_pow(i, k)
            total = total + mono
        return total

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [
                {"alpha": list(a), "re": c.real, "im": c.imag}
                for a, c in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json(obj: Mapping) -> "MultiPoly":
        terms = {
            tuple(t["alpha"]): complex(t["re"], t.get("im", 0.0))
            for t in obj["terms"]
        }
        return MultiPoly(int(obj["dim"]), terms)


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map C^dim_in -> C^dim_out given by component polynomials."""

    dim_in: int
    dim_out: int
    components: tuple[MultiPoly, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if len(comps) != self.dim_out:
            raise ValueError("component count must equal dim_out")
        if any(p.dim != self.dim_in for p in comps):
            raise ValueError("every component must have dim == dim_in")
        object.__setattr__(self, "components", comps)

    @staticmethod
    def identity(dim: int) -> "PolyMap":
        return PolyMap(dim, dim, tuple(MultiPoly.variable(dim, i) for i in range(dim)))

    @staticmethod
    def univariate(coeffs: Sequence[complex]) -> "PolyMap":
        return PolyMap(1, 1, (MultiPoly.from_univariate(coeffs),))

    @staticmethod
    def affine(matrix: np.ndarray, shift: Sequence[complex] | None = None) -> "PolyMap":
        a = np.asarray(matrix, dtype=complex)
        if a.ndim != 2:
            raise ValueError("affine matrix must be 2-dimensional")
        rows, cols = a.shape
        b = np.zeros(rows, dtype=complex) if shift is None else np.asarray(shift, dtype=complex)
        comps = []
        for m in range(rows):
            terms: dict[Index, complex] = {}
            if b[m] != 0:
                terms[(0,) * cols] = complex(b[m])
            for j in range(cols):
                if a[m, j] != 0:
                    alpha = [0] * cols
                    alpha[j] = 1
                    terms[tuple(alpha)] = complex(a[m, j])
            comps.append(MultiPoly(cols, terms))
        return PolyMap(cols, rows, tuple(comps))

    def degree(self) -> int:
        return max((p.degree() for p in self.components), default=0)

    def evaluate(self, z: Sequence[complex]) -> Point:
        return tuple(p.evaluate(z) for p in self.components)

    def is_affine(self) -> bool:
        return self.degree() <= 1

    def linear_part(self) -> np.ndarray:
        """Coefficient matrix of the degree-1 terms, shape (dim_out, dim_in)."""
        a = np.zeros((self.dim_out, self.dim_in), dtype=complex)
        for m, p in enumerate(self.components):
            for alpha, c in p.terms.items():
                if sum(alpha) == 1:
                    a[m, alpha.index(1)] = c
        return a

    def constant_part(self) -> np.ndarray:
        return np.array(
            [p.terms.get((0,) * self.dim_in, 0.0) for p in self.components],
            dtype=complex,
        )

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self o inner, with exact coefficient expansion."""
        if inner.dim_out != self.dim_in:
            raise ValueError(
                f"cannot compose: inner produces {inner.dim_out} values, "
                f"outer consumes {self.dim_in}"
            )
        comps = tuple(p.compose(inner.components) for p in self.components)
        return PolyMap(inner.dim_in, self.dim_out, comps)

    def iterate(self, r: int) -> "PolyMap":
        if r < 1:
            raise ValueError("iterate needs r >= 1")
        if self.dim_in != self.dim_out:
            raise ValueError("iterate needs a self-map")
        result = self
        for _ in range(r - 1):
            result = self.compose(result)
        return result

    def max_coeff(self) -> float:
        return max(
            (abs(c) for p in self.components for c in p.terms.values()), default=0.0
        )

    def to_json(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "components": [p.to_json() for p in self.components],
        }

    @staticmethod
    def from_json(obj: Mapping) -> "PolyMap":
        comps = tuple(MultiPoly.from_json(c) for c in obj["components"])
        return PolyMap(int(obj["dim_in"]), int(obj["dim_out"]), comps)


def poly_eval(p: MultiPoly, z: Sequence[complex]) -> complex:
    return p.evaluate(z)


def poly_compose(f: PolyMap, g: PolyMap) -> PolyMap:
    """f o g."""
    return f.compose(g)


def jacobian(f: PolyMap, p: Sequence[complex]) -> np.ndarray:
    """Matrix of holomorphic partials df at p; entry (m, j) = d f_m / d z_j."""
    if len(p) != f.dim_in:
        raise ValueError("point dimension does not match map input dimension")
    out = np.zeros((f.dim_out, f.dim_in), dtype=complex)
    for m, comp in enumerate(f.components):
        for j in range(f.dim_in):
            out[m, j] = comp.partial(j).evaluate(p)
    return out


def _poly_norm(coeffs: np.ndarray) -> float:
    return float(np.max(np.abs(coeffs)))


def _residual_bound(z: complex, deg: int, norm: float) -> float:
    # 1e-12 * (1+|z|)^deg * max|coeff|; computed in logs to dodge overflow
    try:
        return 1e-12 * (1.0 + abs(z)) ** deg * norm
    except OverflowError:
        return math.inf


def roots_univariate(p: MultiPoly) -> list[tuple[complex, int]]:
    """All complex roots of a dim-1 polynomial with multiplicities.

    Companion-matrix eigenvalues seeded into Newton polish; polished roots
    closer than ROOT_CLUSTER_RADIUS are merged into a single root whose
    multiplicity is the cluster size.  Raises ArithmeticError if a cluster
    center fails the residual test |p(z)| < 1e-12 (1+|z|)^deg max|c|.
    """
    if p.dim != 1:
        raise ValueError("roots_univariate requires a univariate polynomial")
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined root set")
    coeffs = p.univariate_coeffs()
    deg = len(coeffs) - 1
    if deg == 0:
        raise ValueError("degree-0 polynomial has no roots")
    norm = _poly_norm(coeffs)

    from numpy.polynomial import polynomial as npoly

    raw = np.roots(coeffs[::-1])  # companion-matrix eigenvalues

    derivs = [coeffs]
    while len(derivs[-1]) > 1:
        derivs.append(npoly.polyder(derivs[-1]))

    def newton(c: np.ndarray, z: complex, iters: int = 80) -> complex:
        dc = npoly.polyder(c)
        for _ in range(iters):
            dp = npoly.polyval(z, dc)
            if dp == 0:
                break
            step = npoly.polyval(z, c) / dp
            z = z - step
            if abs(step) < 1e-15 * (1.0 + abs(z)):
                break
        return z

    polished = [newton(coeffs, complex(z)) for z in raw]

    # Confirmed multiple roots snap onto the matching derivative root: copies
    # of an m-fold root then coincide exactly and survive the fixed-radius
    # clustering, which plain Newton cannot guarantee at the noise floor.
    def snap(z: complex) -> complex:
        best = z
        for m in range(2, min(deg, 4) + 1):
            dc = derivs[m - 1]
            if len(dc) < 2:
                break
            w = newton(dc, best, iters=40)
            # gate: inside the multiple-root noise ball (~sqrt(eps)), but well
            # below half the spacing of pairs that must stay separate
            if abs(w - best) > 3e-8 * max(1.0, abs(best)):
                break
            ok = True
            for j in range(m - 1):
                scale_j = float(np.max(np.abs(derivs[j]))) * (1.0 + abs(w)) ** (deg - j)
                if abs(npoly.polyval(w, derivs[j])) > 1e-10 * scale_j:
                    ok = False
                    break
            if not ok:
                break
            best = w
        return best

    polished = [snap(z) for z in polished]

    # single-linkage clustering at the fixed absolute radius
    remaining = sorted(polished, key=lambda w: (w.real, w.imag))
    clusters: list[list[complex]] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for w in list(remaining):
                if any(abs(w - m) <= ROOT_CLUSTER_RADIUS for m in members):
                    members.append(w)
                    remaining.remove(w)
                    changed = True
        clusters.append(members)

    out = []
    for members in clusters:
        center = complex(np.mean(members))
        mult = len(members)
        if 1 < mult < len(derivs):
            # a multiplicity-m root is simple for the (m-1)-th derivative,
            # where Newton regains quadratic convergence
            z = newton(derivs[mult - 1], center, iters=50)
            if abs(z - center) <= 2 * ROOT_CLUSTER_RADIUS:
                center = z
        resid = abs(npoly.polyval(center, coeffs))
        if resid >= _residual_bound(center, deg, norm):
            raise ArithmeticError(
                f"root polish failed: residual {resid:.3e} at {center!r}"
            )
        out.append((center, mult))
    out.sort(key=lambda rc: (rc[0].real, rc[0].imag))
    _require_finite((r for r, _ in out), "roots")
    return out


def _charpoly_coeffs(m: np.ndarray) -> np.ndarray:
    """Faddeev-LeVerrier characteristic polynomial, ascending coefficients."""
    n = m.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    mk = np.array(m, dtype=complex)
    for k in range(1, n + 1):
        ck = -np.trace(mk) / k
        coeffs[n - k] = ck
        if k < n:
            mk = m @ (mk + ck * np.eye(n))
    return coeffs


def eigenvalues(m: np.ndarray) -> list[complex]:
    """Full eigenvalue list with algebraic multiplicity.

    Sizes up to 4 go through an exact characteristic polynomial and the
    companion-matrix root solver; larger matrices use LAPACK QR iteration.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigenvalues requires a square matrix")
    n = a.shape[0]
    if n > 64:
        raise ValueError("matrix larger than the supported size 64")
    if n == 0:
        return []
    if n <= 4:
        roots = roots_univariate(MultiPoly.from_univariate(_charpoly_coeffs(a)))
        vals: list[complex] = []
        for z, mult in roots:
            vals.extend([z] * mult)
    else:
        vals = [complex(z) for z in np.linalg.eigvals(a)]
    vals.sort(key=lambda z: (-abs(z), round(z.real, 12), round(z.imag, 12)))
    _require_finite(vals, "eigenvalues")
    return vals
