"""Boundedness-obstruction certificates for composition operators.

Pipelines assemble orbit, jet, and function-space evidence into a machine
checkable verdict about the composition operator ``h -> h o f`` on a given
space:

* ``unbounded``: a periodic orbit with an expanding multiplier was found and
  the dual jets at a witness point are independent enough to transport the
  multiplier growth into the space. This is the only verdict that asserts
  something positive, and it is always backed by a replayable witness.
* ``no_obstruction``: the mechanism found nothing (all multipliers inside the
  closed unit band, or an affine map with a contraction part). The tool never
  claims boundedness; this is the strongest positive statement available.
* ``inconclusive``: the search was exhausted or a gate failed; diagnostics
  say which.

The finite-section norm realizes the growth mechanism quantitatively: the
span of the dual jets of order <= n is invariant under the adjoint of the
composition operator, so the norm of the restricted matrix is a certified
lower bound for the full operator norm, and it must grow like |multiplier|^n
at a repelling fixed point when the jets stay independent.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .algebra import MultiPoly, Point, PolyMap, eigenvalues, jacobian
from .dynamics import (
    AutWord,
    HenonLetter,
    PeriodicOrbit,
    SaddleSearchResult,
    classify_multipliers,
    letter_to_polymap,
    periodic_points_1d,
    reduce_word,
    saddle_search_2d,
    word_to_polymap,
)
from .jets import pushforward_matrix
from .serialize import (
    complex_to_json,
    matrix_from_json,
    matrix_to_json,
    space_to_json,
    target_to_json,
    vector_to_json,
)
from .spaces import (
    DimensionProbe,
    FockSpace,
    GramMatrix,
    NonHilbertError,
    SpaceDescriptor,
    dimension_probe,
    jet_gram,
    jet_injectivity,
    structural_injectivity,
)

__all__ = [
    "SCHEMA_VERSION",
    "ToleranceProfile",
    "DEFAULT_TOLERANCES",
    "STRICT_TOLERANCES",
    "Condition2Evidence",
    "Provenance",
    "Certificate",
    "SpanVerdict",
    "span_check_2x2",
    "fock_affine_bounded",
    "default_fock_probe",
    "monomial_ratio_witness",
    "finite_section_norm",
    "finite_section_trace",
    "verify_orbit",
    "repelling_orbit_certificate",
    "affine_only_1d",
    "polyaut_2d_certificate",
]

SCHEMA_VERSION = "v1"

#: Scope statement attached to two-dimensional certificates.
SCOPE_NOTE = (
    "jet independence was checked at the witness points and probed orders only; "
    "the blanket hypothesis over all but finitely many points is not asserted"
)


@dataclass(frozen=True)
class ToleranceProfile:
    """The tolerance knobs a job may override; everything else is fixed."""

    name: str = "default"
    orbit_residual: float = 1e-9
    multiplier_match: float = 2e-6
    stability_band: float = 1e-9
    rank_rel_threshold: float = 1e-10
    newton_residual: float = 1e-10

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "orbit_residual": self.orbit_residual,
            "multiplier_match": self.multiplier_match,
            "stability_band": self.stability_band,
            "rank_rel_threshold": self.rank_rel_threshold,
            "newton_residual": self.newton_residual,
        }


DEFAULT_TOLERANCES = ToleranceProfile()
STRICT_TOLERANCES = ToleranceProfile(
    name="strict",
    orbit_residual=1e-11,
    rank_rel_threshold=1e-12,
    newton_residual=1e-12,
)


@dataclass(frozen=True)
class Condition2Evidence:
    """Evidence that kernel vectors of the graded jet map stay invisible.

    status is one of "injective-structural", "injective-numerical", and
    "unknown"; only the first two open the unbounded gate.
    """

    status: str
    detail: str
    point: Point | None = None
    orders: tuple[int, ...] | None = None

    @property
    def injective(self) -> bool:
        return self.status in ("injective-structural", "injective-numerical")

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "detail": self.detail,
            "point": vector_to_json(self.point) if self.point is not None else None,
            "orders": list(self.orders) if self.orders is not None else None,
        }


@dataclass(frozen=True)
class Provenance:
    config: dict
    seed: int
    tolerances: ToleranceProfile

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.config, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "tolerances": self.tolerances.to_json(),
        }


@dataclass(frozen=True)
class SpanVerdict:
    """Whether a set of invertible 2x2 matrices generates all of M_2(C).

    The positive certificate is a 4-element spanning subset of the product
    closure; the negative one is a common left eigendirection slope or the
    observation that every lower-left entry vanishes.  Either side can be
    rechecked independently of this code path.
    """

    spans: bool
    spanning_subset: tuple[np.ndarray, ...] | None
    common_root: complex | None
    all_b21_zero: bool

    def to_json(self) -> dict:
        return {
            "spans": self.spans,
            "spanning_subset": [matrix_to_json(m) for m in self.spanning_subset]
            if self.spanning_subset is not None
            else None,
            "common_root": complex_to_json(self.common_root)
            if self.common_root is not None
            else None,
            "all_b21_zero": self.all_b21_zero,
        }


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "unbounded" | "no_obstruction" | "inconclusive"
    pipeline: str
    witness: PeriodicOrbit | None
    condition2: Condition2Evidence | None
    provenance: Provenance
    norm_trace: tuple[tuple[int, float], ...] | None = None
    span: SpanVerdict | None = None
    diagnostics: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verdict not in ("unbounded", "no_obstruction", "inconclusive"):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "unbounded":
            if self.witness is None or not self.witness.has_expanding_direction:
                raise ValueError(
                    "an unbounded verdict requires a witness orbit with a "
                    "multiplier above the unit band"
                )
            if self.condition2 is None or not self.condition2.injective:
                raise ValueError(
                    "an unbounded verdict requires jet-independence evidence"
                )

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": "certificate",
            "verdict": self.verdict,
            "pipeline": self.pipeline,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "condition2": self.condition2.to_json() if self.condition2 else None,
            "norm_trace": [[n, v] for n, v in self.norm_trace]
            if self.norm_trace is not None
            else None,
            "span": self.span.to_json() if self.span is not None else None,
            "diagnostics": dict(self.diagnostics),
            "provenance": self.provenance.to_json(),
        }


# ---------------------------------------------------------------------------
# matrix span criterion
# ---------------------------------------------------------------------------

_UNIVERSAL = "universal"


def _left_eigendirection_roots(s: np.ndarray):
    """Slopes alpha with (1, alpha) a left eigenvector: the root set of
    s21 a^2 + (s11 - s22) a - s12, with its literal degenerations."""
    scale = max(1.0, float(np.max(np.abs(s))))
    a2 = s[1, 0]
    a1 = s[0, 0] - s[1, 1]
    a0 = -s[0, 1]
    tol = 1e-12 * scale
    if abs(a2) <= tol:
        if abs(a1) <= tol:
            return _UNIVERSAL if abs(a0) <= tol else []
        return [-a0 / a1]
    disc = np.sqrt(complex(a1 * a1 - 4.0 * a2 * a0))
    return [(-a1 + disc) / (2 * a2), (-a1 - disc) / (2 * a2)]


def _closure_spanning_subset(mats: list[np.ndarray]) -> tuple[np.ndarray, ...] | None:
    """Greedy search of the product closure for 4 independent elements."""
    chosen: list[np.ndarray] = []
    basis: list[np.ndarray] = []  # orthonormalized vectorizations

    def try_add(m: np.ndarray) -> bool:
        v = m.reshape(-1).astype(complex)
        w = v.copy()
        for b in basis:
            w = w - (b.conj() @ w) * b
        norm = np.linalg.norm(w)
        if norm > 1e-8 * max(1.0, np.linalg.norm(v)):
            basis.append(w / norm)
            chosen.append(m)
            return True
        return False

    frontier = [np.array(m) for m in mats]
    all_elems = list(frontier)
    for m in frontier:
        if try_add(m) and len(chosen) == 4:
            return tuple(chosen)
    for _ in range(6):
        new = []
        for a in all_elems:
            for g in mats:
                prod = a @ g
                scale = np.max(np.abs(prod))
                if scale > 1e100:  # keep magnitudes sane; span is scale-free
                    prod = prod / scale
                new.append(prod)
        for m in new:
            if try_add(m) and len(chosen) == 4:
                return tuple(chosen)
        all_elems.extend(new)
        if len(all_elems) > 4000:
            break
    return None


def span_check_2x2(mats: Sequence[np.ndarray]) -> SpanVerdict:
    """Decide whether the semigroup generated by ``mats`` spans M_2(C).

    The span is everything iff the generators share no left eigendirection of
    slope form (1, alpha) and some generator has a nonzero lower-left entry.
    Root sets are intersected with clustering tolerance 1e-8; an identically
    satisfied quadratic acts as the absorbing element of the intersection.
    """
    matrices = [np.asarray(m, dtype=complex) for m in mats]
    if not matrices:
        raise ValueError("span check needs at least one matrix")
    for m in matrices:
        if m.shape != (2, 2):
            raise ValueError("span check requires 2x2 matrices")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise ValueError("span check requires invertible matrices")

    intersection = _UNIVERSAL
    for m in matrices:
        roots = _left_eigendirection_roots(m)
        if roots == _UNIVERSAL:
            continue
        if intersection == _UNIVERSAL:
            intersection = list(roots)
        else:
            intersection = [
                r for r in intersection if any(abs(r - s) <= 1e-8 for s in roots)
            ]
    common = None
    if intersection == _UNIVERSAL:
        common = 0.0 + 0.0j  # every slope works; report a representative
        empty = False
    else:
        empty = len(intersection) == 0
        if not empty:
            common = complex(sorted(intersection, key=lambda z: (abs(z), z.real, z.imag))[0])

    has_b21 = any(abs(m[1, 0]) > 1e-12 for m in matrices)
    spans = empty and has_b21
    subset = _closure_spanning_subset(matrices) if spans else None
    if spans and subset is None:  # pragma: no cover - criterion guarantees success
        raise ArithmeticError("span criterion fired but no spanning subset was found")
    return SpanVerdict(
        spans=spans,
        spanning_subset=subset,
        common_root=None if spans else common,
        all_b21_zero=not has_b21,
    )


# ---------------------------------------------------------------------------
# affine boundedness rule and monomial witnesses (Gaussian-weighted spaces)
# ---------------------------------------------------------------------------


def fock_affine_bounded(weight: float, a: np.ndarray, b: Sequence[complex]) -> bool:
    """Whether z -> A z + b composes boundedly on the Gaussian-weighted space.

    Requires operator norm at most 1, and b orthogonal to the image of the
    unit-singular-value subspace (the directions the map fails to contract).
    """
    if weight <= 0:
        raise ValueError("weight must be positive")
    mat = np.asarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("affine rule needs a square matrix")
    if abs(np.linalg.det(mat)) <= 1e-14:
        raise ValueError("affine rule needs an invertible matrix")
    vec = np.asarray(list(b), dtype=complex)
    u, sigma, _ = np.linalg.svd(mat)
    if sigma[0] > 1.0 + 1e-9:
        return False
    for j, s in enumerate(sigma):
        if abs(s - 1.0) <= 1e-9:
            if abs(u[:, j].conj() @ vec) > 1e-9 * (1.0 + np.linalg.norm(vec)):
                return False
    return True


def default_fock_probe() -> list[np.ndarray]:
    """A fixed spanning quadruple of strict contractions with a nonzero
    lower-left member, all bounded with b = 0 under the affine rule."""
    return [
        np.array([[0.5, 0.0], [0.0, 0.5]], dtype=complex),
        np.array([[0.5, 0.25], [0.0, 0.5]], dtype=complex),
        np.array([[0.5, 0.0], [0.25, 0.5]], dtype=complex),
        np.array([[0.5, 0.0], [0.0, 0.25]], dtype=complex),
    ]


def _monomial_shape(f: PolyMap) -> tuple[int, complex]:
    if f.dim_in != 1 or f.dim_out != 1:
        raise ValueError("monomial witnesses require a univariate map")
    terms = f.components[0].terms
    if len(terms) != 1:
        raise ValueError("monomial witnesses require f = c z^k")
    (k,), c = next(iter(terms.items()))
    if k < 1:
        raise ValueError("monomial witnesses require k >= 1")
    return k, c


def monomial_ratio_witness(
    space: FockSpace, f: PolyMap, n_max: int
) -> list[tuple[int, float]]:
    """Exact norm ratios ||(c z^k)^n|| / ||z^n|| on the Gaussian-weighted space.

    Monomial norms are closed form for every exponent q, so the ratios are
    available even where the space is not a Hilbert space.  Divergence of the
    ratios as n grows witnesses unboundedness of the composition operator.
    """
    if not isinstance(space, FockSpace):
        raise TypeError("monomial witnesses are defined for Gaussian-weighted spaces")
    if space.dim != 1:
        raise ValueError("monomial witnesses require dimension 1")
    k, c = _monomial_shape(f)
    alpha, q = space.weight, space.q
    out: list[tuple[int, float]] = []
    for n in range(n_max + 1):
        amp = abs(c) ** n
        if n == 0:
            out.append((0, 1.0))
            continue
        if math.isinf(q):
            ratio = (k * n / (alpha * math.e)) ** (k * n / 2.0) / (
                (n / (alpha * math.e)) ** (n / 2.0)
            )
        elif q == 2.0 and float(alpha).is_integer() and alpha == 1.0:
            ratio = math.sqrt(math.factorial(k * n) // math.factorial(n))
        else:
            log_ratio = (
                math.lgamma(q * k * n / 2.0 + 1.0) - math.lgamma(q * n / 2.0 + 1.0)
            ) / q
            log_ratio -= ((k - 1) * n / 2.0) * math.log(alpha * q / 2.0)
            ratio = math.exp(log_ratio)
        out.append((n, amp * ratio))
    return out


# ---------------------------------------------------------------------------
# finite sections
# ---------------------------------------------------------------------------


def _finite_section(
    space: SpaceDescriptor,
    f: PolyMap,
    p: Sequence[complex],
    n: int,
    rank_rel_threshold: float = DEFAULT_TOLERANCES.rank_rel_threshold,
) -> tuple[float, int, int]:
    push = pushforward_matrix(f, p, n)
    gram = jet_gram(space, p, n)
    lam, q = np.linalg.eigh(gram.entries)
    top = float(lam[-1])
    if top <= 0:
        raise ArithmeticError("Gram matrix is numerically zero")
    keep = lam > rank_rel_threshold * top
    rank = int(np.sum(keep))
    qk = q[:, keep]
    roots = np.sqrt(lam[keep])
    compressed = (roots[:, None] * (qk.conj().T @ push.matrix @ qk)) / roots[None, :]
    value = float(np.linalg.svd(compressed, compute_uv=False)[0])
    return value, rank, len(lam)


def finite_section_norm(
    space: SpaceDescriptor, f: PolyMap, p: Sequence[complex], n: int
) -> float:
    """Operator norm of the adjoint restricted to the order-n dual jets at p.

    With M the pushforward matrix and G the dual-jet Gram matrix, this is the
    top generalized singular value of the pencil M^H G M v = mu G v on the
    numerical range of G.  The restricted subspace is invariant, so the value
    is a certified lower bound for the norm of the full operator.
    """
    value, _, _ = _finite_section(space, f, p, n)
    return value


def finite_section_trace(
    space: SpaceDescriptor,
    f: PolyMap,
    p: Sequence[complex],
    orders: Sequence[int],
    rank_rel_threshold: float = DEFAULT_TOLERANCES.rank_rel_threshold,
) -> list[dict]:
    """Norm lower bounds over several orders, with rank-deficiency flags."""
    rows = []
    for n in orders:
        value, rank, dim = _finite_section(space, f, p, n, rank_rel_threshold)
        rows.append(
            {"order": int(n), "lower_bound": value, "rank": rank, "dimension": dim,
             "rank_deficient": rank < dim}
        )
    return rows


# ---------------------------------------------------------------------------
# orbit verification and jet-independence evidence
# ---------------------------------------------------------------------------


def verify_orbit(
    f: PolyMap, orbit: PeriodicOrbit, tolerances: ToleranceProfile = DEFAULT_TOLERANCES
) -> None:
    """Check the orbit against the map: residuals and multiplier spectrum."""
    if f.dim_in != f.dim_out:
        raise ValueError("orbit verification needs a self-map")
    if any(len(pt) != f.dim_in for pt in orbit.points):
        raise ValueError("orbit points do not match the map dimension")
    if len(orbit.points) != orbit.period:
        raise ValueError("orbit must list exactly one point per period step")
    r = orbit.period
    worst = 0.0
    for i in range(r):
        image = f.evaluate(orbit.points[i])
        target = orbit.points[(i + 1) % r]
        worst = max(worst, max(abs(a - b) for a, b in zip(image, target)))
    if worst > tolerances.orbit_residual:
        raise ValueError(
            f"orbit residual {worst:.3e} exceeds {tolerances.orbit_residual:.1e}"
        )
    jac = np.eye(f.dim_in, dtype=complex)
    for i in range(r):
        jac = jacobian(f, orbit.points[i]) @ jac
    recomputed = eigenvalues(jac)
    claimed = sorted(orbit.multipliers, key=lambda z: (-abs(z), z.real, z.imag))
    for a, b in zip(recomputed, claimed):
        if abs(a - b) > tolerances.multiplier_match * (1.0 + abs(a)):
            raise ValueError(
                f"claimed multiplier {b!r} does not match recomputed {a!r}"
            )


def _condition2_evidence(
    space: SpaceDescriptor,
    points: Sequence[Point],
    n_probe: int,
) -> Condition2Evidence:
    """Best available evidence that the jet-independence gate is open."""
    for p in points:
        try:
            detail = structural_injectivity(space, tuple(p))
        except ValueError:
            continue
        if detail is not None:
            return Condition2Evidence(
                status="injective-structural", detail=detail, point=tuple(p)
            )
    if space.dim == 1:
        try:
            probe = dimension_probe(space, points[0], depth=max(6, n_probe))
        except NonHilbertError:
            probe = None
        if probe is not None and probe.kind == "infinite":
            return Condition2Evidence(
                status="injective-structural",
                detail=(
                    "one-dimensional domain and the graded quotients keep growing "
                    f"through depth {len(probe.ranks) - 1}"
                ),
                point=tuple(points[0]),
                orders=probe.nonzero_orders,
            )
    failures = []
    for p in points:
        try:
            verdicts = [jet_injectivity(space, p, n) for n in range(n_probe + 1)]
        except (NonHilbertError, ValueError) as exc:
            failures.append(f"{p}: {exc}")
            continue
        if all(v.injective for v in verdicts):
            return Condition2Evidence(
                status="injective-numerical",
                detail=f"full Gram rank at every probed order at {p}",
                point=tuple(p),
                orders=tuple(range(n_probe + 1)),
            )
        bad = next(n for n, v in enumerate(verdicts) if not v.injective)
        failures.append(
            f"{p}: rank deficiency from order {bad} "
            f"({verdicts[bad].rank}/{verdicts[bad].dimension})"
        )
    return Condition2Evidence(
        status="unknown",
        detail="; ".join(failures) if failures else "no usable evidence route",
    )


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def _provenance(pipeline: str, space, target, params: dict, seed: int,
                tolerances: ToleranceProfile) -> Provenance:
    config = {
        "space": space_to_json(space),
        "target": target_to_json(target),
        "pipeline": pipeline,
        "params": params,
    }
    return Provenance(config=config, seed=seed, tolerances=tolerances)


def repelling_orbit_certificate(
    space: SpaceDescriptor,
    f: PolyMap,
    orbit: PeriodicOrbit,
    *,
    n_probe: int = 6,
    seed: int = 0,
    tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
) -> Certificate:
    """Certify directly from a periodic orbit of a polynomial self-map.

    An expanding multiplier plus jet-independence evidence yields unbounded;
    multipliers inside the closed unit band yield no_obstruction (the
    obstruction only runs one way); an expanding multiplier whose independence
    gate will not open is inconclusive, never unbounded.
    """
    if space.dim != f.dim_in or f.dim_in != f.dim_out:
        raise ValueError("space and map dimensions do not agree")
    verify_orbit(f, orbit, tolerances)
    provenance = _provenance(
        "repelling_orbit",
        space,
        f,
        {"orbit": orbit.to_json(), "n_probe": n_probe},
        seed,
        tolerances,
    )
    if orbit.max_multiplier_modulus <= 1.0 + tolerances.stability_band:
        return Certificate(
            verdict="no_obstruction",
            pipeline="repelling_orbit",
            witness=orbit,
            condition2=None,
            provenance=provenance,
            diagnostics={
                "reason": "all multiplier moduli lie in the closed unit band",
                "max_multiplier_modulus": orbit.max_multiplier_modulus,
            },
        )
    evidence = _condition2_evidence(space, orbit.points, n_probe)
    if evidence.injective:
        return Certificate(
            verdict="unbounded",
            pipeline="repelling_orbit",
            witness=orbit,
            condition2=evidence,
            provenance=provenance,
            diagnostics={"max_multiplier_modulus": orbit.max_multiplier_modulus},
        )
    return Certificate(
        verdict="inconclusive",
        pipeline="repelling_orbit",
        witness=orbit,
        condition2=evidence,
        provenance=provenance,
        diagnostics={
            "reason": "expanding multiplier found but the jet-independence "
            "gate did not open",
        },
    )


def affine_only_1d(
    space: SpaceDescriptor,
    f: PolyMap,
    *,
    r_max: int = 6,
    n_probe: int = 6,
    probe_depth: int = 10,
    seed: int = 0,
    tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
) -> Certificate:
    """One-dimensional pipeline: only affine contractions escape unscathed.

    Affine maps are judged by |a| directly; anything of degree two or more is
    searched for a repelling orbit through increasing periods up to r_max.
    """
    if space.dim != 1 or f.dim_in != 1 or f.dim_out != 1:
        raise ValueError("this pipeline requires dimension 1 throughout")
    params = {"r_max": r_max, "n_probe": n_probe, "probe_depth": probe_depth}
    provenance = _provenance("affine_1d", space, f, params, seed, tolerances)

    try:
        probe = dimension_probe(space, (0.0,), probe_depth)
    except NonHilbertError:
        probe = None
    if probe is not None and probe.kind == "finite":
        return Certificate(
            verdict="inconclusive",
            pipeline="affine_1d",
            witness=None,
            condition2=None,
            provenance=provenance,
            diagnostics={
                "reason": "the dimension probe stabilized; the affine-only "
                "mechanism needs an infinite-dimensional space",
                "rank_bound": probe.bound,
                "ranks": list(probe.ranks),
            },
        )

    if f.is_affine():
        a = complex(f.linear_part()[0, 0])
        b = complex(f.constant_part()[0])
        if abs(a) <= 1.0 + tolerances.stability_band:
            return Certificate(
                verdict="no_obstruction",
                pipeline="affine_1d",
                witness=None,
                condition2=None,
                provenance=provenance,
                diagnostics={"slope_modulus": abs(a)},
            )
        fixed = b / (1.0 - a)
        orbit = PeriodicOrbit(
            points=((fixed,),),
            period=1,
            multipliers=(a,),
            stability=classify_multipliers([a]),
            residual=abs(f.evaluate((fixed,))[0] - fixed),
        )
        evidence = _condition2_evidence(space, orbit.points, n_probe)
        if evidence.injective:
            return Certificate(
                verdict="unbounded",
                pipeline="affine_1d",
                witness=orbit,
                condition2=evidence,
                provenance=provenance,
            )
        return Certificate(
            verdict="inconclusive",
            pipeline="affine_1d",
            witness=orbit,
            condition2=evidence,
            provenance=provenance,
            diagnostics={"reason": "expanding affine map but no independence evidence"},
        )

    search_log = []
    for r in range(1, r_max + 1):
        orbits = periodic_points_1d(f, r)
        expanding = [o for o in orbits if o.max_multiplier_modulus > 1.0 + tolerances.stability_band]
        search_log.append({"period": r, "orbits": len(orbits), "expanding": len(expanding)})
        if expanding:
            witness = max(expanding, key=lambda o: o.max_multiplier_modulus)
            evidence = _condition2_evidence(space, witness.points, n_probe)
            if evidence.injective:
                return Certificate(
                    verdict="unbounded",
                    pipeline="affine_1d",
                    witness=witness,
                    condition2=evidence,
                    provenance=provenance,
                    diagnostics={"search_log": search_log},
                )
            return Certificate(
                verdict="inconclusive",
                pipeline="affine_1d",
                witness=witness,
                condition2=evidence,
                provenance=provenance,
                diagnostics={
                    "reason": "repelling orbit found but the independence gate "
                    "did not open",
                    "search_log": search_log,
                },
            )
    return Certificate(
        verdict="inconclusive",
        pipeline="affine_1d",
        witness=None,
        condition2=None,
        provenance=provenance,
        diagnostics={
            "reason": f"no repelling orbit found through period {r_max}",
            "search_log": search_log,
        },
    )


def _word_apply(word: AutWord, v: np.ndarray) -> np.ndarray:
    maps = [letter_to_polymap(l) for l in word.letters]
    out = np.asarray(v, dtype=complex)
    for m in reversed(maps):
        out = np.asarray(m.evaluate(tuple(out)), dtype=complex)
    return out


def _transform_orbit(
    word_inv_letters: Sequence, orbit: PeriodicOrbit, f: PolyMap,
    tolerances: ToleranceProfile,
) -> PeriodicOrbit:
    """Carry a core-side orbit back through the conjugator and re-polish it
    against the input map."""
    inv_word = AutWord(tuple(word_inv_letters))
    points = [
        _word_apply(inv_word, np.asarray(pt, dtype=complex)) for pt in orbit.points
    ]
    r = orbit.period

    def f_pow(v: np.ndarray) -> np.ndarray:
        out = v
        for _ in range(r):
            out = np.asarray(f.evaluate(tuple(out)), dtype=complex)
        return out

    def jac_pow(v: np.ndarray) -> np.ndarray:
        jac = np.eye(2, dtype=complex)
        cur = v
        for _ in range(r):
            jac = jacobian(f, tuple(cur)) @ jac
            cur = np.asarray(f.evaluate(tuple(cur)), dtype=complex)
        return jac

    base = points[0]
    for _ in range(40):
        g = f_pow(base) - base
        if np.max(np.abs(g)) < 1e-14 * (1.0 + np.max(np.abs(base))):
            break
        try:
            step = np.linalg.solve(jac_pow(base) - np.eye(2), g)
        except np.linalg.LinAlgError:
            break
        base = base - step
        if np.max(np.abs(step)) < 1e-15 * (1.0 + np.max(np.abs(base))):
            break
    pts = [base]
    for _ in range(r - 1):
        pts.append(np.asarray(f.evaluate(tuple(pts[-1])), dtype=complex))
    residual = float(
        max(
            np.max(np.abs(np.asarray(f.evaluate(tuple(pts[i])), dtype=complex) - pts[(i + 1) % r]))
            for i in range(r)
        )
    )
    mults = tuple(eigenvalues(jac_pow(base)))
    return PeriodicOrbit(
        points=tuple(tuple(complex(z) for z in p) for p in pts),
        period=r,
        multipliers=mults,
        stability=classify_multipliers(mults),
        residual=residual,
        seed=orbit.seed,
    )


def polyaut_2d_certificate(
    space: SpaceDescriptor,
    word: AutWord,
    g2_probe: Sequence[np.ndarray] | None = None,
    *,
    r_max: int = 4,
    n_probe: int = 6,
    seed: int = 0,
    starts: int = 4096,
    tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
) -> Certificate:
    """Plane polynomial-automorphism pipeline over generator words.

    The word is conjugated to a normal form first.  Affine cores carry no
    obstruction; Henon chains are searched for saddles, and a hit plus jet
    independence at the witness yields unbounded.  Elementary-like cores (no
    swap available anywhere in the word) and exhausted searches come back
    inconclusive.  The span verdict on the probe matrices is recorded as
    collateral evidence; it never upgrades a verdict here.
    """
    if space.dim != 2:
        raise ValueError("this pipeline requires a two-dimensional space")
    params = {"r_max": r_max, "n_probe": n_probe, "starts": starts}
    provenance = _provenance("polyaut_2d", space, word, params, seed, tolerances)

    probe = g2_probe
    probe_source = "user"
    if probe is None and isinstance(space, FockSpace):
        probe = default_fock_probe()
        probe_source = "builtin-fock"
        for m in probe:
            if not fock_affine_bounded(space.weight, m, (0.0, 0.0)):
                raise AssertionError("builtin probe matrix failed the affine rule")
    span = span_check_2x2(probe) if probe is not None else None

    reduced = reduce_word(word)
    base_diag = {
        "core_kind": reduced.core_kind,
        "relation_error": reduced.relation_error,
        "conjugator_length": len(reduced.conjugator.letters),
        "span_probe": probe_source if probe is not None else None,
        "scope": SCOPE_NOTE,
    }

    if reduced.core_kind == "affine":
        core = reduced.core_map()
        diag = dict(base_diag)
        if isinstance(space, FockSpace):
            diag["affine_rule_bounded"] = fock_affine_bounded(
                space.weight, core.linear_part(), core.constant_part()
            )
        return Certificate(
            verdict="no_obstruction",
            pipeline="polyaut_2d",
            witness=None,
            condition2=None,
            provenance=provenance,
            span=span,
            diagnostics=diag,
        )

    if reduced.core_kind == "elementary_like":
        return Certificate(
            verdict="inconclusive",
            pipeline="polyaut_2d",
            witness=None,
            condition2=None,
            provenance=provenance,
            span=span,
            diagnostics={
                **base_diag,
                "reason": "the word normalizes to an elementary map; no swap is "
                "available to reach a Henon chain",
            },
        )

    search = saddle_search_2d(
        reduced.henon_core,
        r_max,
        seed=seed,
        starts=starts,
        newton_residual=tolerances.newton_residual,
    )
    diag = {
        **base_diag,
        "periods_searched": list(search.diagnostics.periods_searched),
        "starts_attempted": search.diagnostics.starts_attempted,
        "converged_count": search.diagnostics.converged_count,
        "box_radius": search.diagnostics.box_radius,
        "orbits_found": len(search.orbits),
    }
    expanding = [o for o in search.orbits if o.has_expanding_direction]
    if not expanding:
        return Certificate(
            verdict="inconclusive",
            pipeline="polyaut_2d",
            witness=None,
            condition2=None,
            provenance=provenance,
            span=span,
            diagnostics={
                **diag,
                "reason": f"no saddle or repelling orbit found through period {r_max}",
            },
        )

    f = word_to_polymap(word)
    core_witness = expanding[0]
    if reduced.conjugator.letters:
        from .dynamics import invert_letter

        inv_letters = [invert_letter(l) for l in reversed(reduced.conjugator.letters)]
        witness = _transform_orbit(inv_letters, core_witness, f, tolerances)
    else:
        witness = core_witness
    verify_orbit(f, witness, tolerances)

    evidence = _condition2_evidence(space, witness.points, n_probe)
    if evidence.injective:
        return Certificate(
            verdict="unbounded",
            pipeline="polyaut_2d",
            witness=witness,
            condition2=evidence,
            provenance=provenance,
            span=span,
            diagnostics=diag,
        )
    return Certificate(
        verdict="inconclusive",
        pipeline="polyaut_2d",
        witness=witness,
        condition2=evidence,
        provenance=provenance,
        span=span,
        diagnostics={
            **diag,
            "reason": "saddle found but the independence gate did not open",
        },
    )
