"""JSON codecs for the external interfaces: polynomials, maps, words, spaces.

Complex scalars are emitted as ``[re, im]`` pairs; plain numbers are accepted
on input.  Every ``*_from_json`` inverts the matching ``*_to_json``.
"""

from __future__ import annotations

import math
from typing import Any, Mapping, Sequence

import numpy as np

from .algebra import MultiPoly, PolyMap
from .dynamics import (
    AffineLetter,
    AutWord,
    ElementaryLetter,
    HenonLetter,
    PeriodicOrbit,
)
from .spaces import (
    AtomComponent,
    FockSpace,
    GaussianComponent,
    PowerSeriesSpace,
    ShiftInvariantSpace,
    SpaceDescriptor,
    composite_power_series,
)

__all__ = [
    "complex_to_json",
    "complex_from_json",
    "space_to_json",
    "space_from_json",
    "word_to_json",
    "word_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "target_to_json",
    "target_from_json",
]


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v: Any) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, Sequence) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"cannot read complex value from {v!r}")


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    a = np.asarray(m, dtype=complex)
    return [[complex_to_json(x) for x in row] for row in a]


def matrix_from_json(rows: Sequence) -> np.ndarray:
    return np.array([[complex_from_json(x) for x in row] for row in rows], dtype=complex)


def vector_to_json(v: Sequence[complex]) -> list[list[float]]:
    return [complex_to_json(x) for x in v]


def vector_from_json(items: Sequence) -> tuple[complex, ...]:
    return tuple(complex_from_json(x) for x in items)


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------


def space_to_json(space: SpaceDescriptor) -> dict:
    if isinstance(space, FockSpace):
        return {
            "family": "fock",
            "dim": space.dim,
            "weight": space.weight,
            "q": "inf" if math.isinf(space.q) else space.q,
        }
    if isinstance(space, PowerSeriesSpace):
        out: dict = {
            "family": "power_series",
            "kind": space.kind,
            "dim": space.dim,
            "tail_cutoff": space.tail_cutoff,
        }
        if space.kind == "explicit":
            out["coefficients"] = [
                {"alpha": list(a), "c": c} for a, c in sorted(space.coefficients.items())
            ]
            out["tail"] = space.tail
        elif space.kind == "exponential":
            out["scale"] = space.scale
        else:
            if space.phi_name is None:
                raise ValueError(
                    "composite descriptors with custom callables are not serializable; "
                    "build them with composite_power_series"
                )
            out["phi"] = {"rule": space.phi_name, "params": list(space.phi_params)}
        return out
    if isinstance(space, ShiftInvariantSpace):
        return {
            "family": "shift_invariant",
            "dim": space.dim,
            "measure": {
                "weights": [g.weight for g in space.gaussians],
                "means": [list(g.mean) for g in space.gaussians],
                "covariances": [[list(r) for r in g.covariance] for g in space.gaussians],
                "atoms": [
                    {"weight": a.weight, "location": list(a.location)} for a in space.atoms
                ],
            },
            "strips": list(space.strips) if space.strips is not None else None,
        }
    raise TypeError(f"unknown space descriptor {type(space)!r}")


def space_from_json(obj: Mapping) -> SpaceDescriptor:
    family = obj["family"]
    if family == "fock":
        q = obj.get("q", 2.0)
        return FockSpace(
            dim=int(obj["dim"]),
            weight=float(obj["weight"]),
            q=math.inf if q == "inf" else float(q),
        )
    if family == "power_series":
        kind = obj.get("kind", "explicit")
        cutoff = int(obj.get("tail_cutoff", 64))
        if kind == "explicit":
            coeffs = {tuple(t["alpha"]): float(t["c"]) for t in obj["coefficients"]}
            return PowerSeriesSpace(
                dim=int(obj["dim"]),
                kind="explicit",
                coefficients=coeffs,
                tail=obj.get("tail", "none"),
                tail_cutoff=cutoff,
            )
        if kind == "exponential":
            return PowerSeriesSpace(
                dim=int(obj["dim"]),
                kind="exponential",
                scale=float(obj.get("scale", 1.0)),
                tail_cutoff=cutoff,
            )
        if kind == "composite":
            phi = obj["phi"]
            return composite_power_series(
                int(obj["dim"]), phi["rule"], *phi.get("params", []), tail_cutoff=cutoff
            )
        raise ValueError(f"unknown power-series kind {kind!r}")
    if family == "shift_invariant":
        measure = obj["measure"]
        gaussians = tuple(
            GaussianComponent(
                weight=float(w),
                mean=tuple(float(x) for x in mean),
                covariance=tuple(tuple(float(x) for x in row) for row in cov),
            )
            for w, mean, cov in zip(
                measure.get("weights", []),
                measure.get("means", []),
                measure.get("covariances", []),
            )
        )
        atoms = tuple(
            AtomComponent(
                weight=float(a["weight"]),
                location=tuple(float(x) for x in a["location"]),
            )
            for a in measure.get("atoms", [])
        )
        strips = obj.get("strips")
        return ShiftInvariantSpace(
            dim=int(obj["dim"]),
            gaussians=gaussians,
            atoms=atoms,
            strips=tuple(float(s) for s in strips) if strips is not None else None,
        )
    raise ValueError(f"unknown space family {family!r}")


# ---------------------------------------------------------------------------
# words and targets
# ---------------------------------------------------------------------------


def _letter_to_json(letter) -> dict:
    if isinstance(letter, HenonLetter):
        return {"kind": "henon", "Q": letter.q.to_json(), "b": complex_to_json(letter.b)}
    if isinstance(letter, AffineLetter):
        return {
            "kind": "affine",
            "A": matrix_to_json(letter.matrix_array),
            "b": vector_to_json(letter.shift),
        }
    if isinstance(letter, ElementaryLetter):
        return {
            "kind": "elementary",
            "P": letter.p.to_json(),
            "a": complex_to_json(letter.a),
            "b": complex_to_json(letter.b),
            "c": complex_to_json(letter.c),
        }
    raise TypeError(f"unknown letter {type(letter)!r}")


def _letter_from_json(obj: Mapping):
    kind = obj["kind"]
    if kind == "henon":
        return HenonLetter(MultiPoly.from_json(obj["Q"]), complex_from_json(obj["b"]))
    if kind == "affine":
        mat = matrix_from_json(obj["A"])
        shift = vector_from_json(obj.get("b", [0.0, 0.0]))
        return AffineLetter(tuple(tuple(row) for row in mat), shift)
    if kind == "elementary":
        return ElementaryLetter(
            MultiPoly.from_json(obj["P"]),
            complex_from_json(obj["a"]),
            complex_from_json(obj["b"]),
            complex_from_json(obj.get("c", 0.0)),
        )
    raise ValueError(f"unknown letter kind {kind!r}")


def word_to_json(word: AutWord) -> dict:
    return {"letters": [_letter_to_json(l) for l in word.letters]}


def word_from_json(obj: Mapping) -> AutWord:
    return AutWord(tuple(_letter_from_json(l) for l in obj["letters"]))


def target_to_json(target) -> dict:
    if isinstance(target, PolyMap):
        return {"kind": "polymap", **target.to_json()}
    if isinstance(target, AutWord):
        return {"kind": "word", **word_to_json(target)}
    if isinstance(target, (list, tuple)) and all(
        isinstance(m, np.ndarray) for m in target
    ):
        return {"kind": "matrices", "matrices": [matrix_to_json(m) for m in target]}
    raise TypeError(f"cannot serialize target {type(target)!r}")


def target_from_json(obj: Mapping):
    kind = obj["kind"]
    if kind == "polymap":
        return PolyMap.from_json(obj)
    if kind == "word":
        return word_from_json(obj)
    if kind == "matrices":
        return [matrix_from_json(m) for m in obj["matrices"]]
    raise ValueError(f"unknown target kind {kind!r}")
