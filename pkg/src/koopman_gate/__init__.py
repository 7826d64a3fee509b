"""Computational certificates of unboundedness for composition operators.

Given a polynomial dynamical system and a kernel-defined function space, this
package locates repelling or saddle periodic orbits, builds the exact
pushforward matrices on jet filtrations at fixed points, checks independence
of the dual-jet functionals inside the space, and assembles the evidence into
replayable JSON certificates.
"""

from .algebra import (
    MultiPoly,
    PolyMap,
    eigenvalues,
    jacobian,
    poly_compose,
    poly_eval,
    roots_univariate,
)
from .certify import (
    DEFAULT_TOLERANCES,
    STRICT_TOLERANCES,
    Certificate,
    Condition2Evidence,
    SpanVerdict,
    ToleranceProfile,
    affine_only_1d,
    default_fock_probe,
    finite_section_norm,
    finite_section_trace,
    fock_affine_bounded,
    monomial_ratio_witness,
    polyaut_2d_certificate,
    repelling_orbit_certificate,
    span_check_2x2,
    verify_orbit,
)
from .dynamics import (
    AffineLetter,
    AutWord,
    ElementaryLetter,
    HenonLetter,
    PeriodicOrbit,
    ReducedForm,
    periodic_points_1d,
    reduce_word,
    saddle_search_2d,
    word_to_polymap,
)
from .jets import (
    GradedBlocks,
    JetBasis,
    PushforwardMatrix,
    graded_blocks,
    jet_basis,
    pushforward_matrix,
    symmetric_power_matrix,
)
from .spaces import (
    AtomComponent,
    DimensionProbe,
    DualJet,
    FockSpace,
    GaussianComponent,
    GramMatrix,
    InjectivityVerdict,
    NonHilbertError,
    PowerSeriesSpace,
    Richness,
    ShiftInvariantSpace,
    composite_power_series,
    dimension_probe,
    dual_jet,
    jet_gram,
    jet_injectivity,
    kernel_value,
    support_richness,
)

__version__ = "0.1.0"
