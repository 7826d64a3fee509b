"""Periodic orbits of polynomial maps and plane polynomial-automorphism words.

Dimension 1: all periodic points of a given period via univariate root
solving, with multipliers and stability classes attached.

Dimension 2: automorphisms arrive as generator words (affine, elementary,
Henon letters, applied right to left).  ``reduce_word`` conjugates a word
into either a single affine map, a chain of Henon letters, or an elementary
map that no available swap can fix, and certifies the rewriting through a
coefficient-level relation check.  ``saddle_search_2d`` then hunts periodic
points of Henon chains, exactly by elimination where the period permits and
by seeded Newton clouds otherwise.

Searches are deterministic given the recorded seed and all functions are
pure, so concurrent invocation is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    Index,
    MultiPoly,
    Point,
    PolyMap,
    eigenvalues,
    jacobian,
    roots_univariate,
)

__all__ = [
    "STABILITY_BAND",
    "Stability",
    "PeriodicOrbit",
    "AffineLetter",
    "ElementaryLetter",
    "HenonLetter",
    "AutWord",
    "ReducedForm",
    "SearchDiagnostics",
    "SaddleSearchResult",
    "classify_multipliers",
    "periodic_points_1d",
    "word_to_polymap",
    "letter_to_polymap",
    "invert_letter",
    "reduce_word",
    "saddle_search_2d",
]

#: Half-width of the indifferent band around |multiplier| = 1.
STABILITY_BAND = 1e-9

#: Tolerance for deciding the minimal period of a recurrent point.
MINIMAL_PERIOD_TOL = 1e-8

#: Clustering radius for deduplicating orbit points in dimension 2.
ORBIT_CLUSTER_RADIUS = 1e-6

#: Required map residual along a reported orbit.
ORBIT_RESIDUAL_TOL = 1e-9

#: Mixed absolute/relative tolerance of the word-reduction relation check.
RELATION_TOL = 1e-9

_TRIANGULAR_TOL = 1e-12


class Stability:
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"
    SADDLE = "saddle"


def classify_multipliers(multipliers: Sequence[complex]) -> str:
    moduli = [abs(m) for m in multipliers]
    if all(m < 1e-9 for m in moduli):
        return Stability.SUPERATTRACTING
    if all(m < 1.0 - STABILITY_BAND for m in moduli):
        return Stability.ATTRACTING
    above = sum(m > 1.0 + STABILITY_BAND for m in moduli)
    if above == len(moduli):
        return Stability.REPELLING
    if above >= 1:
        return Stability.SADDLE
    return Stability.INDIFFERENT


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit with the multiplier spectrum at its base point."""

    points: tuple[Point, ...]
    period: int
    multipliers: tuple[complex, ...]
    stability: str
    residual: float
    seed: int | None = None

    @property
    def max_multiplier_modulus(self) -> float:
        return max(abs(m) for m in self.multipliers)

    @property
    def has_expanding_direction(self) -> bool:
        return self.max_multiplier_modulus > 1.0 + STABILITY_BAND

    def to_json(self) -> dict:
        return {
            "points": [[[z.real, z.imag] for z in pt] for pt in self.points],
            "period": self.period,
            "multipliers": [[m.real, m.imag] for m in self.multipliers],
            "stability": self.stability,
            "residual": self.residual,
            "seed": self.seed,
        }

    @staticmethod
    def from_json(obj: dict) -> "PeriodicOrbit":
        return PeriodicOrbit(
            points=tuple(
                tuple(complex(re, im) for re, im in pt) for pt in obj["points"]
            ),
            period=int(obj["period"]),
            multipliers=tuple(complex(re, im) for re, im in obj["multipliers"]),
            stability=obj["stability"],
            residual=float(obj["residual"]),
            seed=obj.get("seed"),
        )


# ---------------------------------------------------------------------------
# dimension 1
# ---------------------------------------------------------------------------


def _univariate_iterate_coeffs(coeffs: np.ndarray, r: int) -> np.ndarray:
    """Ascending coefficients of the r-th iterate of a univariate polynomial."""
    from numpy.polynomial import polynomial as npoly

    cur = np.array(coeffs, dtype=complex)
    for _ in range(r - 1):
        # Horner evaluation of the outer polynomial at the inner one
        acc = np.array([coeffs[-1]], dtype=complex)
        for k in range(len(coeffs) - 2, -1, -1):
            acc = npoly.polymul(acc, cur)
            acc[0] += coeffs[k]
        cur = acc
    return cur


def periodic_points_1d(f: PolyMap, r: int) -> list[PeriodicOrbit]:
    """All orbits of minimal period r of a univariate polynomial of degree >= 2.

    Solves f^r(z) = z through the companion-matrix root finder, keeps the
    roots whose minimal period is exactly r, groups them into orbits, and
    attaches the chain-rule multiplier (f^r)'(p).
    """
    if f.dim_in != 1 or f.dim_out != 1:
        raise ValueError("periodic_points_1d requires a univariate self-map")
    deg = f.degree()
    if deg < 2:
        raise ValueError("affine input: no degree-growth guarantee, handle separately")
    if not 1 <= r <= 12:
        raise ValueError("period must lie in 1..12")
    if deg**r > 10**6:
        raise ValueError(f"degree {deg}^{r} exceeds the solver guard 10^6")

    coeffs = f.components[0].univariate_coeffs()
    iter_coeffs = _univariate_iterate_coeffs(coeffs, r)
    shifted = np.array(iter_coeffs, dtype=complex)
    if len(shifted) < 2:
        shifted = np.pad(shifted, (0, 2 - len(shifted)))
    shifted[1] -= 1.0
    roots = roots_univariate(MultiPoly.from_univariate(shifted))

    def f_eval(z: complex) -> complex:
        return f.components[0].evaluate((z,))

    def minimal_period(z: complex) -> int:
        w = z
        for k in range(1, r + 1):
            w = f_eval(w)
            if r % k == 0 and abs(w - z) <= MINIMAL_PERIOD_TOL:
                return k
        return r

    candidates = [z for z, _ in roots if minimal_period(z) == r]
    candidates.sort(key=lambda z: (z.real, z.imag))

    fprime = f.components[0].partial(0)
    orbits: list[PeriodicOrbit] = []
    used: list[complex] = []
    for z in candidates:
        if any(abs(z - u) <= MINIMAL_PERIOD_TOL for u in used):
            continue
        points = [z]
        for _ in range(r - 1):
            points.append(f_eval(points[-1]))
        used.extend(points)
        residual = max(
            abs(f_eval(points[i]) - points[(i + 1) % r]) for i in range(r)
        )
        mult = complex(np.prod([fprime.evaluate((w,)) for w in points]))
        orbits.append(
            PeriodicOrbit(
                points=tuple((w,) for w in points),
                period=r,
                multipliers=(mult,),
                stability=classify_multipliers([mult]),
                residual=residual,
            )
        )
    return orbits


# ---------------------------------------------------------------------------
# generator words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineLetter:
    """z -> A z + b on C^2 with A invertible."""

    matrix: tuple[tuple[complex, ...], ...]
    shift: tuple[complex, ...] = (0.0, 0.0)

    def __post_init__(self) -> None:
        a = np.asarray(self.matrix, dtype=complex)
        if a.shape != (2, 2):
            raise ValueError("affine letter requires a 2x2 matrix")
        if abs(np.linalg.det(a)) < 1e-12:
            raise ValueError("affine letter matrix must be invertible")
        if len(self.shift) != 2:
            raise ValueError("affine letter shift must have length 2")
        object.__setattr__(
            self, "matrix", tuple(tuple(complex(x) for x in row) for row in self.matrix)
        )
        object.__setattr__(self, "shift", tuple(complex(x) for x in self.shift))

    @property
    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=complex)

    @property
    def shift_array(self) -> np.ndarray:
        return np.asarray(self.shift, dtype=complex)


@dataclass(frozen=True)
class ElementaryLetter:
    """(x, y) -> (a x + P(y), b y + c) with a, b nonzero."""

    p: MultiPoly
    a: complex
    b: complex
    c: complex = 0.0

    def __post_init__(self) -> None:
        if self.p.dim != 1:
            raise ValueError("elementary letter needs a univariate polynomial")
        if self.a == 0 or self.b == 0:
            raise ValueError("elementary letter requires a*b != 0")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "c", complex(self.c))


@dataclass(frozen=True)
class HenonLetter:
    """(x, y) -> (Q(x) - b y, x) with deg Q >= 2 and b nonzero."""

    q: MultiPoly
    b: complex

    def __post_init__(self) -> None:
        if self.q.dim != 1:
            raise ValueError("Henon letter needs a univariate polynomial")
        if self.q.degree() < 2:
            raise ValueError("Henon letter requires deg Q >= 2")
        if self.b == 0:
            raise ValueError("Henon letter requires b != 0")
        object.__setattr__(self, "b", complex(self.b))


Letter = AffineLetter | ElementaryLetter | HenonLetter


@dataclass(frozen=True)
class AutWord:
    """Word of generators; letters[0] is outermost (rightmost applied first)."""

    letters: tuple[Letter, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))


def letter_to_polymap(letter: Letter) -> PolyMap:
    if isinstance(letter, AffineLetter):
        return PolyMap.affine(letter.matrix_array, letter.shift_array)
    if isinstance(letter, ElementaryLetter):
        first = MultiPoly(2, {(1, 0): letter.a}) + MultiPoly(
            2, {(0, k): c for (k,), c in letter.p.terms.items()}
        )
        second = MultiPoly(2, {(0, 1): letter.b, (0, 0): letter.c})
        return PolyMap(2, 2, (first, second))
    if isinstance(letter, HenonLetter):
        first = MultiPoly(2, {(k, 0): c for (k,), c in letter.q.terms.items()}) + MultiPoly(
            2, {(0, 1): -letter.b}
        )
        second = MultiPoly(2, {(1, 0): 1.0})
        return PolyMap(2, 2, (first, second))
    raise TypeError(f"unknown letter type {type(letter)!r}")


def word_to_polymap(word: AutWord) -> PolyMap:
    """Exact composition of the letters."""
    if not word.letters:
        return PolyMap.identity(2)
    acc = letter_to_polymap(word.letters[0])
    for letter in word.letters[1:]:
        acc = acc.compose(letter_to_polymap(letter))
    return acc


def invert_letter(letter: Letter) -> Letter:
    if isinstance(letter, AffineLetter):
        a = letter.matrix_array
        ainv = np.linalg.inv(a)
        return AffineLetter(
            tuple(tuple(row) for row in ainv), tuple(-(ainv @ letter.shift_array))
        )
    if isinstance(letter, ElementaryLetter):
        # solve a X + P(Y) = x, b Y + c = y
        inner = MultiPoly.from_univariate([-letter.c / letter.b, 1.0 / letter.b])
        p_new = letter.p.compose([inner]).scale(-1.0 / letter.a)
        return ElementaryLetter(p_new, 1.0 / letter.a, 1.0 / letter.b, -letter.c / letter.b)
    if isinstance(letter, HenonLetter):
        raise TypeError("Henon letters are inverted at the word level, not letter level")
    raise TypeError(f"unknown letter type {type(letter)!r}")


# internal reduction alphabet: general affines and elementary transforms

@dataclass(frozen=True)
class _Aff:
    m: tuple[tuple[complex, ...], ...]
    t: tuple[complex, ...]

    @property
    def ma(self) -> np.ndarray:
        return np.asarray(self.m, dtype=complex)

    @property
    def ta(self) -> np.ndarray:
        return np.asarray(self.t, dtype=complex)

    @property
    def triangular(self) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.ma))))
        return abs(self.m[1][0]) <= _TRIANGULAR_TOL * scale


@dataclass(frozen=True)
class _Ele:
    p: MultiPoly  # univariate
    a: complex
    b: complex
    c: complex

    @property
    def affine_capable(self) -> bool:
        return self.p.degree() <= 1


def _aff(m: np.ndarray, t: np.ndarray) -> _Aff:
    return _Aff(tuple(tuple(complex(x) for x in row) for row in m), tuple(complex(x) for x in t))


def _swap_aff() -> _Aff:
    return _aff(np.array([[0.0, 1.0], [1.0, 0.0]]), np.zeros(2))


def _ele_to_aff(e: _Ele) -> _Aff:
    p1 = e.p.terms.get((1,), 0.0)
    p0 = e.p.terms.get((0,), 0.0)
    return _aff(np.array([[e.a, p1], [0.0, e.b]]), np.array([p0, e.c]))


def _aff_to_ele(a: _Aff) -> _Ele:
    assert a.triangular
    m = a.ma
    t = a.ta
    return _Ele(MultiPoly.from_univariate([t[0], m[0, 1]]), complex(m[0, 0]), complex(m[1, 1]), complex(t[1]))


def _merge_aff(a1: _Aff, a2: _Aff) -> _Aff:
    # a1 o a2
    return _aff(a1.ma @ a2.ma, a1.ma @ a2.ta + a1.ta)


def _merge_ele(e1: _Ele, e2: _Ele) -> _Ele:
    # e1 o e2: (x, y) -> e2 -> (a2 x + P2(y), b2 y + c2) -> e1
    inner = MultiPoly.from_univariate([e2.c, e2.b])
    p_new = e2.p.scale(e1.a) + e1.p.compose([inner])
    return _Ele(p_new, e1.a * e2.a, e1.b * e2.b, e1.b * e2.c + e1.c)


def _try_merge(l1, l2):
    """Compose two adjacent internal letters when they share a side."""
    if isinstance(l1, _Aff) and isinstance(l2, _Aff):
        return _merge_aff(l1, l2)
    if isinstance(l1, _Ele) and isinstance(l2, _Ele):
        return _merge_ele(l1, l2)
    if isinstance(l1, _Aff) and isinstance(l2, _Ele):
        if l1.triangular:
            return _merge_ele(_aff_to_ele(l1), l2)
        if l2.affine_capable:
            return _merge_aff(l1, _ele_to_aff(l2))
    if isinstance(l1, _Ele) and isinstance(l2, _Aff):
        if l2.triangular:
            return _merge_ele(l1, _aff_to_ele(l2))
        if l1.affine_capable:
            return _merge_aff(_ele_to_aff(l1), l2)
    return None


def _merge_pass(seq: list) -> list:
    changed = True
    while changed:
        changed = False
        out: list = []
        for letter in seq:
            if out:
                merged = _try_merge(out[-1], letter)
                if merged is not None:
                    out[-1] = merged
                    changed = True
                    continue
            out.append(letter)
        seq = out
    return seq


def _is_identity_letter(letter) -> bool:
    if isinstance(letter, _Aff):
        return (
            float(np.max(np.abs(letter.ma - np.eye(2)))) <= 1e-14
            and float(np.max(np.abs(letter.ta))) <= 1e-14
        )
    return (
        abs(letter.a - 1.0) <= 1e-14
        and abs(letter.b - 1.0) <= 1e-14
        and abs(letter.c) <= 1e-14
        and letter.p.is_zero()
    )


def _internal_to_public(letter) -> Letter:
    if isinstance(letter, _Aff):
        return AffineLetter(letter.m, letter.t)
    return ElementaryLetter(letter.p, letter.a, letter.b, letter.c)


def _bruhat_split(a: _Aff) -> tuple[_Aff, _Aff, _Aff]:
    """Factor a non-triangular affine as u o swap o t with u, t triangular."""
    m = a.ma
    m21 = m[1, 0]
    assert abs(m21) > 0
    t2 = np.array([[1.0, m[1, 1] / m21], [0.0, 1.0]], dtype=complex)
    u = np.array([[m[0, 1] - m[0, 0] * m[1, 1] / m21, m[0, 0]], [0.0, m21]], dtype=complex)
    return _aff(u, a.ta), _swap_aff(), _aff(t2, np.zeros(2))


def _ele_swap_to_henon(e: _Ele) -> tuple[HenonLetter, _Aff]:
    """e o swap = henon o t with t = (x, y) -> (b x + c, y).

    The Henon polynomial is P((u - c)/b) and its y-coefficient is -a.
    """
    if e.p.degree() < 2:
        raise ValueError("cannot form a Henon letter from a degree <= 1 polynomial")
    inner = MultiPoly.from_univariate([-e.c / e.b, 1.0 / e.b])
    q = e.p.compose([inner])
    henon = HenonLetter(q, -e.a)
    t = _aff(np.array([[e.b, 0.0], [0.0, 1.0]], dtype=complex), np.array([e.c, 0.0]))
    return henon, t


def _absorb_left_triangular(t: _Aff, h: HenonLetter) -> HenonLetter:
    """t o h for t = (x, y) -> (b x + c, y) stays a Henon letter."""
    m = t.ma
    assert abs(m[0, 1]) <= 1e-13 and abs(m[1, 0]) <= 1e-13 and abs(m[1, 1] - 1) <= 1e-13
    assert abs(t.ta[1]) <= 1e-13
    b, c = complex(m[0, 0]), complex(t.ta[0])
    q_new = h.q.scale(b) + MultiPoly.from_univariate([c])
    return HenonLetter(q_new, b * h.b)


@dataclass(frozen=True)
class ReducedForm:
    """Outcome of word reduction: input = conjugator^{-1} o core o conjugator."""

    conjugator: AutWord
    core_kind: str  # "henon" | "affine" | "elementary_like"
    henon_core: tuple[HenonLetter, ...] | None
    affine_core: AffineLetter | None
    elementary_core: ElementaryLetter | None
    relation_error: float

    def core_map(self) -> PolyMap:
        if self.core_kind == "henon":
            return word_to_polymap(AutWord(self.henon_core))
        if self.core_kind == "affine":
            return letter_to_polymap(self.affine_core)
        return letter_to_polymap(self.elementary_core)


def _conjugator_inverse_letters(letters: Sequence[Letter]) -> list[Letter]:
    return [invert_letter(l) for l in reversed(letters)]


def _relation_error(input_map: PolyMap, reconstructed: PolyMap) -> float:
    worst = 0.0
    for comp_a, comp_b in zip(input_map.components, reconstructed.components):
        keys = set(comp_a.terms) | set(comp_b.terms)
        for k in keys:
            ca = comp_a.terms.get(k, 0.0)
            cb = comp_b.terms.get(k, 0.0)
            worst = max(worst, abs(ca - cb) / (1.0 + max(abs(ca), abs(cb))))
    return worst


def reduce_word(word: AutWord) -> ReducedForm:
    """Normalize a generator word up to conjugation.

    Letter-level rewriting rules, certified afterwards purely by the
    coefficient relation input = conjugator^{-1} o core o conjugator:

    1. Henon letters expand as (elementary with b=1, c=0) o swap.
    2. Adjacent letters sharing a side merge (triangular affines are
       elementary, degree <= 1 elementaries are affine).
    3. While the outermost and innermost letters share a side, conjugate the
       innermost one around (cyclic reduction).
    4. An even alternating word rotates so elementaries lead; every
       non-triangular affine splits as triangular o swap o triangular, the
       triangular pieces merge into the neighboring elementaries, and each
       (elementary o swap) pair converts to a Henon letter, carrying a
       triangular remainder into the next pair and finally around the cycle.

    Words whose letters never produce a swap normalize to a single elementary
    map of degree >= 2; those are returned with the elementary_like tag since
    they are not conjugate to Henon chains by these rules.
    """
    seq: list = []
    for letter in word.letters:
        if isinstance(letter, HenonLetter):
            seq.append(_Ele(letter.q, -letter.b, 1.0, 0.0))
            seq.append(_swap_aff())
        elif isinstance(letter, AffineLetter):
            seq.append(_aff(letter.matrix_array, letter.shift_array))
        elif isinstance(letter, ElementaryLetter):
            seq.append(_Ele(letter.p, letter.a, letter.b, letter.c))
        else:
            raise TypeError(f"unknown letter type {type(letter)!r}")

    conj: list = []  # internal letters, composition order; C = conj[0] o conj[1] o ...

    def conjugate_by_last(current: list) -> list:
        g = current[-1]
        conj.insert(0, g)
        return _merge_pass([g] + current[:-1])

    seq = _merge_pass(seq)
    while len(seq) >= 2 and _try_merge(seq[-1], seq[0]) is not None:
        seq = conjugate_by_last(seq)

    input_map = word_to_polymap(word)

    def finish(kind: str, henon=None, affine=None, elementary=None) -> ReducedForm:
        conj_public = [
            _internal_to_public(l) for l in conj if not _is_identity_letter(l)
        ]
        conjugator = AutWord(tuple(conj_public))
        if kind == "henon":
            core_map = word_to_polymap(AutWord(tuple(henon)))
        elif kind == "affine":
            core_map = letter_to_polymap(affine)
        else:
            core_map = letter_to_polymap(elementary)
        if conj_public:
            c_map = word_to_polymap(conjugator)
            c_inv = word_to_polymap(AutWord(tuple(_conjugator_inverse_letters(conj_public))))
            reconstructed = c_inv.compose(core_map).compose(c_map)
        else:
            reconstructed = core_map
        err = _relation_error(input_map, reconstructed)
        if err > RELATION_TOL:
            raise ArithmeticError(
                f"word reduction failed its relation check: error {err:.3e}"
            )
        return ReducedForm(
            conjugator=conjugator,
            core_kind=kind,
            henon_core=tuple(henon) if henon is not None else None,
            affine_core=affine,
            elementary_core=elementary,
            relation_error=err,
        )

    if not seq:
        return finish("affine", affine=AffineLetter(((1.0, 0.0), (0.0, 1.0)), (0.0, 0.0)))
    if len(seq) == 1:
        only = seq[0]
        if isinstance(only, _Aff):
            return finish("affine", affine=AffineLetter(only.m, only.t))
        if only.affine_capable:
            a = _ele_to_aff(only)
            return finish("affine", affine=AffineLetter(a.m, a.t))
        return finish(
            "elementary_like",
            elementary=ElementaryLetter(only.p, only.a, only.b, only.c),
        )

    # even alternating word; rotate so an elementary leads
    if isinstance(seq[0], _Aff):
        g = seq[-1]
        conj.insert(0, g)
        seq = [g] + seq[:-1]
    assert len(seq) % 2 == 0
    assert all(isinstance(seq[i], _Ele) == (i % 2 == 0) for i in range(len(seq)))

    # split each affine and fold the triangular pieces into the elementaries
    expanded: list = []
    for i in range(0, len(seq), 2):
        u, s, t = _bruhat_split(seq[i + 1])
        expanded.extend([seq[i], u, s, t])
    trailing = expanded.pop()  # triangular linear factor of the last affine
    conj.insert(0, trailing)
    expanded = [trailing] + expanded

    groups: list[_Ele] = []
    i = 0
    while i < len(expanded):
        collected: list = []
        while not (
            isinstance(expanded[i], _Aff) and not expanded[i].triangular
        ):
            collected.append(expanded[i])
            i += 1
        i += 1  # skip the swap
        merged = collected[0] if isinstance(collected[0], _Ele) else _aff_to_ele(collected[0])
        for extra in collected[1:]:
            extra_e = extra if isinstance(extra, _Ele) else _aff_to_ele(extra)
            merged = _merge_ele(merged, extra_e)
        groups.append(merged)

    henons: list[HenonLetter] = []
    carry: _Aff | None = None
    for j, group in enumerate(groups):
        e = group if carry is None else _merge_ele(_aff_to_ele(carry), group)
        henon, carry = _ele_swap_to_henon(e)
        henons.append(henon)
    # wrap the final triangular remainder around the cycle into the first letter
    conj.insert(0, carry)
    henons[0] = _absorb_left_triangular(carry, henons[0])
    return finish("henon", henon=henons)


# ---------------------------------------------------------------------------
# saddle search in dimension 2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchDiagnostics:
    periods_searched: tuple[int, ...]
    starts_attempted: int
    converged_count: int
    box_radius: float
    seed: int


@dataclass(frozen=True)
class SaddleSearchResult:
    orbits: tuple[PeriodicOrbit, ...]
    diagnostics: SearchDiagnostics


def _core_maps(core: Sequence[HenonLetter]) -> list[PolyMap]:
    return [letter_to_polymap(l) for l in core]


def _apply_chain(maps: Sequence[PolyMap], v: np.ndarray) -> np.ndarray:
    out = v
    for m in reversed(maps):
        out = np.asarray(m.evaluate(tuple(out)), dtype=complex)
    return out


def _chain_jacobian(maps: Sequence[PolyMap], v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    jac = np.eye(2, dtype=complex)
    cur = v
    for m in reversed(maps):
        jac = jacobian(m, tuple(cur)) @ jac
        cur = np.asarray(m.evaluate(tuple(cur)), dtype=complex)
    return jac, cur


def _filtration_radius(core: Sequence[HenonLetter]) -> float:
    """Escape radius: outside it forward or backward orbits grow forever."""
    worst = 1.0
    for letter in core:
        coeffs = letter.q.univariate_coeffs()
        lead = abs(coeffs[-1])
        rest = float(np.sum(np.abs(coeffs[:-1])))
        worst = max(worst, (rest + abs(letter.b) + 3.0) / lead)
    return worst


def _exact_period_points(core: Sequence[HenonLetter], r: int) -> list[np.ndarray] | None:
    """Closed-form fixed/period-2 points for a single Henon letter."""
    if len(core) != 1 or r > 2:
        return None
    q = core[0].q
    b = core[0].b
    if r == 1:
        # x = Q(x) - b x on the diagonal (x, x)
        poly = q - MultiPoly.from_univariate([0.0, 1.0 + b])
        return [np.array([x, x], dtype=complex) for x, _ in roots_univariate(poly)]
    if abs(1.0 + b) > 1e-12:
        # (1+b) x1 = Q(x0), (1+b) x0 = Q(x1); eliminate x1
        inner = q.scale(1.0 / (1.0 + b))
        comp = q.compose([inner]) - MultiPoly.from_univariate([0.0, (1.0 + b) ** 2]).scale(
            1.0 / (1.0 + b)
        )
        pts = []
        for x0, _ in roots_univariate(comp):
            x1 = q.evaluate((x0,)) / (1.0 + b)
            pts.append(np.array([x0, x1], dtype=complex))
        return pts
    # b = -1 degenerates to Q(x0) = Q(x1) = 0
    zeros = [z for z, _ in roots_univariate(q)]
    return [np.array([x0, x1], dtype=complex) for x0 in zeros for x1 in zeros]


def saddle_search_2d(
    core: Sequence[HenonLetter],
    r_max: int,
    *,
    box_radius: float | None = None,
    starts: int = 4096,
    seed: int = 0,
    newton_residual: float = 1e-10,
) -> SaddleSearchResult:
    """Periodic orbits of a Henon chain for periods 1..r_max.

    Periods 1 and 2 of a single letter are solved exactly by eliminating the
    second coordinate down to univariate root finding; everything else runs
    Newton iterations from a Sobol cloud inside the escape-radius box.  An
    empty result is a diagnostic, not an error: existence at some period is
    expected but the cutoff makes the search one-sided.
    """
    core = list(core)
    if not core:
        raise ValueError("saddle search needs a nonempty Henon chain")
    if not 1 <= r_max <= 8:
        raise ValueError("r_max must lie in 1..8")
    maps = _core_maps(core)
    radius = box_radius if box_radius is not None else max(2.0, _filtration_radius(core))

    attempted = 0
    converged_total = 0
    orbits: list[PeriodicOrbit] = []
    seen_bases: list[np.ndarray] = []

    def iterate_r(v: np.ndarray, reps: int) -> np.ndarray:
        out = v
        for _ in range(reps):
            out = _apply_chain(maps, out)
        return out

    def jac_r(v: np.ndarray, reps: int) -> np.ndarray:
        jac = np.eye(2, dtype=complex)
        cur = v
        for _ in range(reps):
            step_jac, cur = _chain_jacobian(maps, cur)
            jac = step_jac @ jac
        return jac

    for r in range(1, r_max + 1):
        exact = _exact_period_points(core, r)
        if exact is not None:
            candidates = exact
            attempted += len(exact)
        else:
            from scipy.stats import qmc

            m = max(2, math.ceil(math.log2(max(2, starts))))
            sampler = qmc.Sobol(d=4, scramble=True, seed=seed + r)
            cloud = 2.0 * radius * (sampler.random_base2(m) - 0.5)
            attempted += len(cloud)
            candidates = []
            for row in cloud:
                v = np.array([row[0] + 1j * row[1], row[2] + 1j * row[3]], dtype=complex)
                ok = False
                for _ in range(60):
                    fv = iterate_r(v, r) - v
                    if np.max(np.abs(fv)) < 1e-13 * (1.0 + np.max(np.abs(v))):
                        ok = True
                        break
                    jv = jac_r(v, r) - np.eye(2)
                    try:
                        step = np.linalg.solve(jv, fv)
                    except np.linalg.LinAlgError:
                        break
                    v = v - step
                    if np.max(np.abs(v)) > 20.0 * radius:
                        break
                    if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(v))):
                        ok = True
                        break
                if ok:
                    candidates.append(v)

        # polish, deduplicate, reject non-minimal periods, assemble orbits
        for v in candidates:
            for _ in range(5):
                fv = iterate_r(v, r) - v
                jv = jac_r(v, r) - np.eye(2)
                try:
                    step = np.linalg.solve(jv, fv)
                except np.linalg.LinAlgError:
                    break
                if np.max(np.abs(step)) > 1.0:
                    break
                v = v - step
                if np.max(np.abs(step)) < 1e-15 * (1.0 + np.max(np.abs(v))):
                    break
            resid = float(np.max(np.abs(iterate_r(v, r) - v)))
            if resid > newton_residual:
                continue
            converged_total += 1
            minimal = True
            for rp in range(1, r):
                if r % rp == 0:
                    if float(np.max(np.abs(iterate_r(v, rp) - v))) <= MINIMAL_PERIOD_TOL:
                        minimal = False
                        break
            if not minimal:
                continue
            orbit_pts = [v]
            for _ in range(r - 1):
                orbit_pts.append(_apply_chain(maps, orbit_pts[-1]))
            if any(
                any(float(np.max(np.abs(p - s))) <= ORBIT_CLUSTER_RADIUS for s in seen_bases)
                for p in orbit_pts
            ):
                continue
            seen_bases.extend(orbit_pts)
            jac = jac_r(orbit_pts[0], r)
            mults = tuple(eigenvalues(jac))
            residual = float(
                max(
                    np.max(np.abs(_apply_chain(maps, orbit_pts[i]) - orbit_pts[(i + 1) % r]))
                    for i in range(r)
                )
            )
            orbits.append(
                PeriodicOrbit(
                    points=tuple(tuple(complex(z) for z in p) for p in orbit_pts),
                    period=r,
                    multipliers=mults,
                    stability=classify_multipliers(mults),
                    residual=residual,
                    seed=seed,
                )
            )

    orbits.sort(key=lambda o: (o.period, -o.max_multiplier_modulus))
    return SaddleSearchResult(
        orbits=tuple(orbits),
        diagnostics=SearchDiagnostics(
            periods_searched=tuple(range(1, r_max + 1)),
            starts_attempted=attempted,
            converged_count=converged_total,
            box_radius=radius,
            seed=seed,
        ),
    )
