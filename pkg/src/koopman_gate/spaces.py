"""Function-space descriptors, dual jets, Gram matrices, and injectivity verdicts.

Three descriptor families are supported:

* ``PowerSeriesSpace``: reproducing kernel k(z, w) = Phi(conj(z_1) w_1, ...,
  conj(z_d) w_d) for a series Phi with nonnegative coefficients.  Nonnegative
  coefficients are necessary and sufficient for positive definiteness, so the
  constructor rejects anything else.
* ``FockSpace``: the Gaussian-weighted entire-function space with weight
  ``alpha`` and integrability exponent ``q``.  Only q = 2 is a Hilbert space;
  other exponents are accepted as descriptors but Gram-based operations refuse
  them and direct callers to monomial-ratio witnesses.
* ``ShiftInvariantSpace``: kernel k(x, y) = mu_hat(x - y) for a finite mixture
  of Gaussians and point masses on R^d, optionally extended to a complex strip.

Conjugation convention, pinned here once and enforced by tests: the dual jet
of index alpha at p is the space element g whose inner product against any h
recovers the derivative, <h, g> = (d^alpha h)(p).  The pairing identification
between the dual space and the space itself is antilinear, which is why
coefficient conjugates appear when functionals are expanded in this basis.
Closed forms under this convention:

* power series: g(w) = w^alpha (d^alpha Phi)(conj(p_1) w_1, ..., conj(p_d) w_d)
* Fock weight a: g(w) = (a w)^alpha exp(a <w, p>), with <w, p> = sum conj(p_j) w_j
* shift-invariant: spectral representative (i xi)^alpha exp(i conj(p) . xi)
  in L^2(mu)

Fock normalization: the Gaussian reference measure carries the probability
constant, so monomial norms are ||w^k||^2 = k!/alpha^k.  Operator norms are
invariant under this global scale choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .algebra import Index, MultiPoly, Point, multi_factorial
from .jets import JetBasis, jet_basis

__all__ = [
    "PowerSeriesSpace",
    "FockSpace",
    "GaussianComponent",
    "AtomComponent",
    "ShiftInvariantSpace",
    "SpaceDescriptor",
    "NonHilbertError",
    "DualJet",
    "GramMatrix",
    "InjectivityVerdict",
    "DimensionProbe",
    "Richness",
    "composite_power_series",
    "PHI_RULES",
    "structural_injectivity",
    "dual_jet",
    "jet_gram",
    "jet_injectivity",
    "support_richness",
    "dimension_probe",
    "kernel_value",
]

#: Relative singular-value threshold for numerical rank decisions.
RANK_REL_THRESHOLD = 1e-10

#: PSD slack: min eigenvalue may dip to -1e-8 times the top one.
PSD_REL_SLACK = 1e-8


class NonHilbertError(TypeError):
    """Raised when a Gram-based operation receives a non-Hilbert descriptor."""


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerSeriesSpace:
    """Kernel from a power series Phi with nonnegative coefficients.

    kind
        "explicit": ``coefficients`` lists every known term; ``tail`` declares
        whether the list is complete ("none") or truncated ("unspecified").
        "composite": Phi(z) = phi(z_1 + ... + z_d) for a univariate series phi
        given through ``phi_rule`` (k -> phi_k) with ``phi_support_infinite``
        declaring whether infinitely many phi_k are nonzero.
        "exponential": Phi = exp(scale * (z_1 + ... + z_d)), scale > 0.
    """

    dim: int
    kind: str  # "explicit" | "composite" | "exponential"
    coefficients: Mapping[Index, float] | None = None
    tail: str = "none"  # "none" | "unspecified"
    phi_rule: Callable[[int], float] | None = None
    phi_support_infinite: bool | None = None
    scale: float = 1.0
    tail_cutoff: int = 64
    phi_name: str | None = None  # set by composite_power_series for serialization
    phi_params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind not in ("explicit", "composite", "exponential"):
            raise ValueError(f"unknown power-series kind {self.kind!r}")
        if self.kind == "explicit":
            if self.coefficients is None:
                raise ValueError("explicit descriptor needs a coefficient list")
            clean = {}
            for alpha, c in self.coefficients.items():
                key = tuple(int(a) for a in alpha)
                if len(key) != self.dim or any(a < 0 for a in key):
                    raise ValueError(f"bad coefficient index {alpha!r}")
                c = float(c)
                if c < 0:
                    raise ValueError(
                        "negative series coefficient: kernel would not be positive definite"
                    )
                if c > 0:
                    clean[key] = c
            object.__setattr__(self, "coefficients", clean)
            if self.tail not in ("none", "unspecified"):
                raise ValueError("tail must be 'none' or 'unspecified'")
        if self.kind == "composite" and self.phi_rule is None:
            raise ValueError("composite descriptor needs phi_rule")
        if self.kind == "exponential" and self.scale <= 0:
            raise ValueError("exponential family needs scale > 0")

    def coefficient(self, gamma: Index) -> float:
        """Series coefficient c_gamma, including the multinomial factor for
        composite families: phi(z1+...+zd) contributes phi_k * k!/gamma!."""
        if self.kind == "explicit":
            return self.coefficients.get(tuple(gamma), 0.0)
        k = sum(gamma)
        if self.kind == "exponential":
            phi_k = self.scale**k / math.factorial(k)
        else:
            phi_k = float(self.phi_rule(k))
            if phi_k < 0:
                raise ValueError("negative phi coefficient")
        return phi_k * math.factorial(k) / multi_factorial(gamma)

    def support(self, max_total_degree: int) -> list[Index]:
        """Indices with nonzero coefficient and |gamma| <= max_total_degree."""
        if self.kind == "explicit":
            return [g for g in self.coefficients if sum(g) <= max_total_degree]
        out = []
        for k in range(max_total_degree + 1):
            if self.kind == "exponential" or float(self.phi_rule(k)) != 0.0:
                from .jets import homogeneous_indices

                out.extend(homogeneous_indices(self.dim, k))
        return out


#: Named univariate coefficient rules usable in serialized descriptors.
#: Each maps its parameters to (rule, support_is_infinite).
PHI_RULES: dict[str, Callable[..., tuple[Callable[[int], float], bool]]] = {
    "exp": lambda scale=1.0: (lambda k: scale**k / math.factorial(k), True),
    "geometric": lambda ratio=0.5: (lambda k: ratio**k, True),
    "cosh": lambda scale=1.0: (
        lambda k: scale**k / math.factorial(k) if k % 2 == 0 else 0.0,
        True,
    ),
}


def composite_power_series(
    dim: int, rule: str, *params: float, tail_cutoff: int = 64
) -> PowerSeriesSpace:
    """Phi(z) = phi(z_1 + ... + z_d) for a named univariate rule phi."""
    if rule not in PHI_RULES:
        raise ValueError(f"unknown phi rule {rule!r}; known: {sorted(PHI_RULES)}")
    phi, infinite = PHI_RULES[rule](*params)
    return PowerSeriesSpace(
        dim=dim,
        kind="composite",
        phi_rule=phi,
        phi_support_infinite=infinite,
        tail_cutoff=tail_cutoff,
        phi_name=rule,
        phi_params=tuple(float(x) for x in params),
    )


@dataclass(frozen=True)
class FockSpace:
    """Gaussian-weighted entire functions on C^dim; Hilbert only at q = 2."""

    dim: int
    weight: float
    q: float = 2.0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        if not (self.q > 0):
            raise ValueError("exponent q must be positive (math.inf allowed)")

    @property
    def is_hilbert(self) -> bool:
        return self.q == 2.0


@dataclass(frozen=True)
class GaussianComponent:
    weight: float
    mean: tuple[float, ...]
    covariance: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError("component weight must be positive")
        cov = np.asarray(self.covariance, dtype=float)
        d = len(self.mean)
        if cov.shape != (d, d):
            raise ValueError("covariance shape mismatch")
        if np.max(np.abs(cov - cov.T)) > 1e-12 * (1 + np.max(np.abs(cov))):
            raise ValueError("covariance must be symmetric")
        if np.min(np.linalg.eigvalsh(cov)) < -1e-12 * (1 + np.max(np.abs(cov))):
            raise ValueError("covariance must be positive semidefinite")

    @property
    def nondegenerate(self) -> bool:
        cov = np.asarray(self.covariance, dtype=float)
        return bool(np.min(np.linalg.eigvalsh(cov)) > 1e-12 * (1 + np.max(np.abs(cov))))


@dataclass(frozen=True)
class AtomComponent:
    weight: float
    location: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError("atom weight must be positive")


@dataclass(frozen=True)
class ShiftInvariantSpace:
    """Kernel mu_hat(x - y) for a Gaussian/atomic mixture measure mu on R^dim.

    ``strips`` > 0 per coordinate extends the kernel to points with imaginary
    parts inside the strip; None restricts evaluation points to R^dim.  Every
    moment and exponential moment of the admitted measure class is closed form.
    """

    dim: int
    gaussians: tuple[GaussianComponent, ...] = ()
    atoms: tuple[AtomComponent, ...] = ()
    strips: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if not self.gaussians and not self.atoms:
            raise ValueError("measure needs at least one component")
        for g in self.gaussians:
            if len(g.mean) != self.dim:
                raise ValueError("gaussian mean dimension mismatch")
        for a in self.atoms:
            if len(a.location) != self.dim:
                raise ValueError("atom location dimension mismatch")
        if self.strips is not None:
            if len(self.strips) != self.dim or any(s <= 0 for s in self.strips):
                raise ValueError("strip widths must be positive, one per coordinate")

    @property
    def has_absolutely_continuous_part(self) -> bool:
        return any(g.nondegenerate for g in self.gaussians)

    def check_point(self, p: Sequence[complex]) -> None:
        if len(p) != self.dim:
            raise ValueError("point dimension mismatch")
        imag = [complex(z).imag for z in p]
        if self.strips is None:
            if any(abs(y) > 0 for y in imag):
                raise ValueError("complex point given but no strip widths declared")
        else:
            for y, a in zip(imag, self.strips):
                if abs(y) >= a:
                    raise ValueError(f"imaginary part {y} outside the strip of width {a}")

    def exp_moment(self, gamma: Index, s: Sequence[float]) -> float:
        """integral of xi^gamma exp(s . xi) d mu(xi), closed form."""
        s = np.asarray(s, dtype=float)
        total = 0.0
        for g in self.gaussians:
            mean = np.asarray(g.mean, dtype=float)
            cov = np.asarray(g.covariance, dtype=float)
            pref = math.exp(float(s @ mean + 0.5 * s @ cov @ s))
            total += g.weight * pref * _gaussian_raw_moment(mean + cov @ s, cov, tuple(gamma))
        for a in self.atoms:
            loc = np.asarray(a.location, dtype=float)
            total += a.weight * math.exp(float(s @ loc)) * math.prod(
                loc[j] ** gamma[j] for j in range(self.dim)
            )
        return total


def _gaussian_raw_moment(mean: np.ndarray, cov: np.ndarray, gamma: Index) -> float:
    """E[xi^gamma] for N(mean, cov) via the recurrence
    E[xi^{g+e_j}] = mean_j E[xi^g] + sum_k cov[j,k] g_k E[xi^{g-e_k}]."""
    cache: dict[Index, float] = {}

    def rec(g: Index) -> float:
        if all(x == 0 for x in g):
            return 1.0
        if g in cache:
            return cache[g]
        j = next(i for i, x in enumerate(g) if x > 0)
        g1 = tuple(x - 1 if i == j else x for i, x in enumerate(g))
        val = mean[j] * rec(g1)
        for k, gk in enumerate(g1):
            if gk > 0:
                g2 = tuple(x - 1 if i == k else x for i, x in enumerate(g1))
                val += cov[j, k] * gk * rec(g2)
        cache[g] = val
        return val

    return rec(tuple(gamma))


SpaceDescriptor = Union[PowerSeriesSpace, FockSpace, ShiftInvariantSpace]


def _fock_as_series(space: FockSpace) -> PowerSeriesSpace:
    return PowerSeriesSpace(dim=space.dim, kind="exponential", scale=space.weight)


def space_dim(space: SpaceDescriptor) -> int:
    return space.dim


def _require_hilbert(space: SpaceDescriptor) -> None:
    if isinstance(space, FockSpace) and not space.is_hilbert:
        raise NonHilbertError(
            f"exponent q={space.q} is not a Hilbert space; use monomial-ratio witnesses"
        )


# ---------------------------------------------------------------------------
# dual jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualJet:
    """Riesz representative of the order-alpha derivative functional at a point.

    For power-series and Fock descriptors the representation is a function of
    w evaluable through :meth:`evaluate`.  For shift-invariant descriptors it
    is the spectral element ``spectral_poly(xi) * exp(i conj(p) . xi)`` of
    L^2(mu), exposed through ``spectral_poly``.
    """

    space: SpaceDescriptor
    point: Point
    index: Index
    spectral_poly: MultiPoly | None = None

    def evaluate(self, w: Sequence[complex]) -> complex:
        if isinstance(self.space, ShiftInvariantSpace):
            raise TypeError("shift-invariant dual jets live in L^2(mu); use spectral_poly")
        space = self.space
        if isinstance(space, FockSpace):
            a = space.weight
            mono = math.prod(
                (a * complex(w[j])) ** self.index[j] for j in range(space.dim)
            )
            inner = sum(complex(self.point[j]).conjugate() * complex(w[j]) for j in range(space.dim))
            return mono * np.exp(a * inner)
        # power series: sum over support, c_g * g!/(g-alpha)! * conj(p)^(g-alpha) * w^g
        total = 0.0 + 0.0j
        alpha = self.index
        for gamma in space.support(space.tail_cutoff):
            if any(g < a for g, a in zip(gamma, alpha)):
                continue
            c = space.coefficient(gamma)
            term = c
            for j in range(space.dim):
                g, aj = gamma[j], alpha[j]
                term *= math.factorial(g) / math.factorial(g - aj)
                term *= complex(self.point[j]).conjugate() ** (g - aj)
                term *= complex(w[j]) ** g
            total += term
        return total


def dual_jet(space: SpaceDescriptor, p: Sequence[complex], alpha: Index) -> DualJet:
    """Closed-form representative of the derivative functional d^alpha at p."""
    if len(alpha) != space.dim or any(a < 0 for a in alpha):
        raise ValueError("bad derivative multi-index")
    if len(p) != space.dim:
        raise ValueError("point dimension mismatch")
    point = tuple(complex(z) for z in p)
    if isinstance(space, ShiftInvariantSpace):
        space.check_point(point)
        coeff = 1j ** sum(alpha)
        poly = MultiPoly(space.dim, {tuple(alpha): coeff})
        return DualJet(space, point, tuple(alpha), spectral_poly=poly)
    return DualJet(space, point, tuple(alpha))


def kernel_value(space: SpaceDescriptor, p: Sequence[complex], w: Sequence[complex]) -> complex:
    """k(p, w) for the descriptor's kernel."""
    if isinstance(space, ShiftInvariantSpace):
        space.check_point(p)
        space.check_point(w)
        # mu_hat(p - conj(w)) on the strip; for real arguments mu_hat(p - w)
        diff = np.asarray([complex(a) - complex(b).conjugate() for a, b in zip(p, w)])
        total = 0.0 + 0.0j
        for g in space.gaussians:
            mean = np.asarray(g.mean, dtype=float)
            cov = np.asarray(g.covariance, dtype=float)
            total += g.weight * np.exp(1j * diff @ mean - 0.5 * diff @ cov @ diff)
        for a in space.atoms:
            loc = np.asarray(a.location, dtype=float)
            total += a.weight * np.exp(1j * diff @ loc)
        return complex(total)
    return dual_jet(space, p, (0,) * space.dim).evaluate(w)


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian PSD matrix of dual-jet inner products on a jet basis."""

    basis: JetBasis
    entries: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.entries, dtype=complex)
        if g.shape != (len(self.basis), len(self.basis)):
            raise ValueError("Gram shape does not match basis")
        herm = float(np.max(np.abs(g - g.conj().T))) if g.size else 0.0
        if herm > 1e-10 * (1.0 + float(np.max(np.abs(g)))):
            raise ValueError(f"Gram is not Hermitian: asymmetry {herm:.3e}")
        evals = np.linalg.eigvalsh(g)
        top = float(evals[-1]) if evals.size else 0.0
        if evals.size and float(evals[0]) < -PSD_REL_SLACK * max(top, 1e-300):
            raise ValueError(f"Gram is not PSD: min eigenvalue {evals[0]:.3e}")
        object.__setattr__(self, "entries", g)

    def rank(self, rel_threshold: float = RANK_REL_THRESHOLD) -> int:
        evals = np.linalg.eigvalsh(self.entries)
        top = float(evals[-1]) if evals.size else 0.0
        if top <= 0:
            return 0
        return int(np.sum(evals > rel_threshold * top))


def _fock_gram_factor(b: int, g: int, p: complex, a: float) -> complex:
    """One coordinate of the separable Fock Gram:
    a^b * d^g/dw^g [ w^b exp(a conj(p) w) ] at w = p."""
    pc = p.conjugate()
    total = 0.0 + 0.0j
    for i in range(min(b, g) + 1):
        term = math.comb(g, i) * math.factorial(b) / math.factorial(b - i)
        term *= p ** (b - i) * (a * pc) ** (g - i)
        total += term
    return a**b * total * np.exp(a * (pc * p))


def jet_gram(space: SpaceDescriptor, p: Sequence[complex], n: int) -> GramMatrix:
    """Gram matrix G[alpha, beta] = <dual_jet(alpha), dual_jet(beta)>.

    Computed as the beta-derivative functional applied to the alpha dual-jet
    function at p.  Power-series entries sum the series to the descriptor's
    tail cutoff; Fock and shift-invariant entries are closed form.
    """
    _require_hilbert(space)
    if n < 0:
        raise ValueError("jet order must be >= 0")
    if len(p) != space.dim:
        raise ValueError("point dimension mismatch")
    basis = jet_basis(space.dim, n)
    size = len(basis)
    g = np.zeros((size, size), dtype=complex)
    point = tuple(complex(z) for z in p)

    if isinstance(space, FockSpace):
        a = space.weight
        for i, al in enumerate(basis.indices):
            for j in range(i, size):
                be = basis.indices[j]
                val = 1.0 + 0.0j
                for coord in range(space.dim):
                    val *= _fock_gram_factor(al[coord], be[coord], point[coord], a)
                g[i, j] = val
                g[j, i] = val.conjugate()
    elif isinstance(space, PowerSeriesSpace):
        support = space.support(space.tail_cutoff)
        pconj_pk = [point[j].conjugate() for j in range(space.dim)]
        for gamma in support:
            c = space.coefficient(gamma)
            hits = [i for i, al in enumerate(basis.indices) if all(x >= y for x, y in zip(gamma, al))]
            # weight_i = gamma!/(gamma-alpha_i)! * conj(p)^(gamma-alpha_i)
            weights = []
            for i in hits:
                al = basis.indices[i]
                wv = 1.0 + 0.0j
                for j in range(space.dim):
                    wv *= math.factorial(gamma[j]) / math.factorial(gamma[j] - al[j])
                    wv *= pconj_pk[j] ** (gamma[j] - al[j])
                weights.append(wv)
            for ii, i in enumerate(hits):
                for jj, j in enumerate(hits):
                    if j < i:
                        continue
                    g[i, j] += c * weights[ii] * weights[jj].conjugate()
        g = np.triu(g) + np.triu(g, 1).conj().T
    else:
        space.check_point(point)
        s = 2.0 * np.array([z.imag for z in point])
        for i, al in enumerate(basis.indices):
            for j in range(i, size):
                be = basis.indices[j]
                phase = 1j ** (sum(al) - sum(be))
                total_idx = tuple(x + y for x, y in zip(al, be))
                val = phase * space.exp_moment(total_idx, s)
                g[i, j] = val
                g[j, i] = complex(val).conjugate()
    return GramMatrix(basis, g)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


class Richness:
    """Three-valued verdict for the coefficient-support richness check."""

    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


def support_richness(space: PowerSeriesSpace) -> str:
    """Whether the coefficient support is rich enough to force dual-jet
    independence at every nonzero point: infinitely many nonzero coefficients,
    hitting every partial exponent pattern infinitely often.

    Structural families (exponential, composite with infinitely many nonzero
    phi coefficients) hold by construction.  Complete finite lists fail;
    truncated lists with unspecified tails are undecidable from the data.
    """
    if not isinstance(space, PowerSeriesSpace):
        raise TypeError("support_richness applies to power-series descriptors")
    if space.kind == "exponential":
        return Richness.HOLDS
    if space.kind == "composite":
        if space.phi_support_infinite is True:
            return Richness.HOLDS
        if space.phi_support_infinite is False:
            return Richness.FAILS
        return Richness.UNKNOWN
    if space.tail == "none":
        return Richness.FAILS
    return Richness.UNKNOWN


@dataclass(frozen=True)
class InjectivityVerdict:
    """Outcome of the jet-injectivity decision at a point and order."""

    status: str  # "injective" | "not_injective" | "unknown"
    method: str  # "structural" | "rank" | "insufficient-data"
    rank: int | None = None
    dimension: int | None = None
    kernel_vector: tuple[complex, ...] | None = None
    detail: str = ""

    @property
    def injective(self) -> bool:
        return self.status == "injective"


def structural_injectivity(space: SpaceDescriptor, p: Point) -> str | None:
    """Returns a detail string when a structural shortcut applies, else None."""
    if isinstance(space, FockSpace):
        return "Fock kernel sections vanish nowhere, any point and order"
    if isinstance(space, ShiftInvariantSpace):
        if space.has_absolutely_continuous_part:
            return "measure has an absolutely continuous part, polynomials embed in L^2(mu)"
        return None
    if isinstance(space, PowerSeriesSpace):
        # the shortcut needs a nonzero base point; p = 0 always goes numerical
        if all(z == 0 for z in p):
            return None
        if support_richness(space) == Richness.HOLDS:
            return "coefficient support is rich and the point is nonzero"
    return None


def jet_injectivity(space: SpaceDescriptor, p: Sequence[complex], n: int) -> InjectivityVerdict:
    """Decide whether the dual jets of order <= n are linearly independent.

    Structural shortcuts answer without any matrix work where a family-level
    argument applies.  Otherwise the decision is the numerical rank of the
    Gram matrix at relative threshold RANK_REL_THRESHOLD.  Descriptors with an
    undeclared tail can still certify injectivity when the explicit part
    already has full rank (adding PSD mass never shrinks a kernel), but a
    deficient rank is then undecidable and reported as unknown.
    """
    point = tuple(complex(z) for z in p)
    detail = structural_injectivity(space, point)
    if detail is not None:
        return InjectivityVerdict(status="injective", method="structural", detail=detail)

    gram = jet_gram(space, point, n)
    dim = len(gram.basis)
    rank = gram.rank()
    if rank == dim:
        return InjectivityVerdict(
            status="injective", method="rank", rank=rank, dimension=dim
        )
    evals, vecs = np.linalg.eigh(gram.entries)
    kernel = tuple(complex(z) for z in vecs[:, 0])
    tail_unknown = (
        isinstance(space, PowerSeriesSpace)
        and space.kind == "explicit"
        and space.tail == "unspecified"
    )
    if tail_unknown:
        return InjectivityVerdict(
            status="unknown",
            method="insufficient-data",
            rank=rank,
            dimension=dim,
            detail="explicit part is rank deficient and the tail is unspecified",
        )
    return InjectivityVerdict(
        status="not_injective",
        method="rank",
        rank=rank,
        dimension=dim,
        kernel_vector=kernel,
    )


@dataclass(frozen=True)
class DimensionProbe:
    """Graded-quotient growth up to a probe depth."""

    kind: str  # "infinite" | "finite"
    bound: int | None
    ranks: tuple[int, ...]
    nonzero_orders: tuple[int, ...]


def dimension_probe(space: SpaceDescriptor, p: Sequence[complex], depth: int) -> DimensionProbe:
    """Report which graded quotients are nonzero for n <= depth.

    Successive Gram ranks r_n give the quotient sizes r_n - r_{n-1}.  When the
    rank is still growing near the probe depth the space is flagged infinite
    dimensional (a heuristic, not a proof); when it has been flat for at least
    two orders the stabilized rank bounds the dimension.
    """
    if depth < 2:
        raise ValueError("probe depth must be >= 2")
    gram = jet_gram(space, p, depth)
    basis = gram.basis
    ranks = []
    for n in range(depth + 1):
        end = basis.degree_starts[n + 1]
        sub = GramMatrix(jet_basis(space.dim, n), gram.entries[:end, :end])
        ranks.append(sub.rank())
    nonzero = tuple(
        n for n in range(depth + 1) if ranks[n] > (ranks[n - 1] if n else 0)
    )
    last = max(nonzero) if nonzero else -1
    if depth - last >= 2:
        return DimensionProbe("finite", ranks[-1], tuple(ranks), nonzero)
    return DimensionProbe("infinite", None, tuple(ranks), nonzero)
