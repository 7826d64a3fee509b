"""Published JSON Schemas for job files and reports (schema version v1)."""

from __future__ import annotations

_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 2,
            "maxItems": 2,
        },
    ]
}

_POLY = {
    "type": "object",
    "required": ["dim", "terms"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["alpha", "re"],
                "properties": {
                    "alpha": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "re": {"type": "number"},
                    "im": {"type": "number"},
                },
            },
        },
    },
}

_MATRIX = {"type": "array", "items": {"type": "array", "items": _COMPLEX}}

_SPACE = {
    "type": "object",
    "required": ["family", "dim"],
    "properties": {
        "family": {"enum": ["fock", "power_series", "shift_invariant"]},
        "dim": {"type": "integer", "minimum": 1},
        "weight": {"type": "number", "exclusiveMinimum": 0},
        "q": {"oneOf": [{"type": "number", "exclusiveMinimum": 0}, {"const": "inf"}]},
        "kind": {"enum": ["explicit", "composite", "exponential"]},
        "coefficients": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["alpha", "c"],
                "properties": {
                    "alpha": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "c": {"type": "number", "minimum": 0},
                },
            },
        },
        "tail": {"enum": ["none", "unspecified"]},
        "tail_cutoff": {"type": "integer", "minimum": 1},
        "scale": {"type": "number", "exclusiveMinimum": 0},
        "phi": {
            "type": "object",
            "required": ["rule"],
            "properties": {
                "rule": {"type": "string"},
                "params": {"type": "array", "items": {"type": "number"}},
            },
        },
        "measure": {
            "type": "object",
            "properties": {
                "weights": {"type": "array", "items": {"type": "number"}},
                "means": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                "covariances": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                },
                "atoms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["weight", "location"],
                        "properties": {
                            "weight": {"type": "number"},
                            "location": {"type": "array", "items": {"type": "number"}},
                        },
                    },
                },
            },
        },
        "strips": {
            "oneOf": [
                {"type": "null"},
                {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
            ]
        },
    },
}

_LETTER = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["henon", "affine", "elementary"]},
        "Q": _POLY,
        "P": _POLY,
        "A": _MATRIX,
        "a": _COMPLEX,
        "b": {"oneOf": [_COMPLEX, {"type": "array", "items": _COMPLEX}]},
        "c": _COMPLEX,
    },
}

_TARGET = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["polymap", "word", "matrices"]},
        "dim_in": {"type": "integer", "minimum": 1},
        "dim_out": {"type": "integer", "minimum": 1},
        "components": {"type": "array", "items": _POLY},
        "letters": {"type": "array", "items": _LETTER},
        "matrices": {"type": "array", "items": _MATRIX, "minItems": 1},
    },
}

_ORBIT = {
    "type": "object",
    "required": ["points", "period", "multipliers", "stability", "residual"],
    "properties": {
        "points": {"type": "array"},
        "period": {"type": "integer", "minimum": 1},
        "multipliers": {"type": "array"},
        "stability": {"type": "string"},
        "residual": {"type": "number"},
        "seed": {"oneOf": [{"type": "integer"}, {"type": "null"}]},
    },
}

PIPELINES = (
    "repelling_orbit",
    "affine_1d",
    "polyaut_2d",
    "span_check",
    "finite_section",
    "monomial_witness",
)

#: Accepted spellings for pipeline names in job files.
PIPELINE_ALIASES = {
    "affine1d": "affine_1d",
    "polyaut2d": "polyaut_2d",
}

JOB_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "koopman-gate job (v1)",
    "type": "object",
    "required": ["pipeline", "target"],
    "properties": {
        "space": _SPACE,
        "target": _TARGET,
        "pipeline": {"enum": list(PIPELINES) + sorted(PIPELINE_ALIASES)},
        "params": {
            "type": "object",
            "properties": {
                "r_max": {"type": "integer", "minimum": 1, "maximum": 12},
                "n_max": {"type": "integer", "minimum": 0},
                "n_probe": {"type": "integer", "minimum": 0},
                "probe_depth": {"type": "integer", "minimum": 2},
                "starts": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "tolerance_profile": {"enum": ["default", "strict"]},
                "tolerances": {
                    "type": "object",
                    "additionalProperties": {"type": "number"},
                },
                "orbit": _ORBIT,
                "point": {"type": "array", "items": _COMPLEX},
                "orders": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "g2_probe": {"type": "array", "items": _MATRIX},
            },
            "additionalProperties": False,
        },
    },
    "allOf": [
        {
            "if": {"properties": {"pipeline": {"enum": ["span_check"]}}},
            "then": {},
            "else": {"required": ["space"]},
        }
    ],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "koopman-gate report (v1)",
    "type": "object",
    "required": ["schema", "kind"],
    "properties": {
        "schema": {"const": "v1"},
        "kind": {"enum": ["certificate", "table", "span_verdict", "error"]},
        "verdict": {"enum": ["unbounded", "no_obstruction", "inconclusive"]},
        "pipeline": {"enum": list(PIPELINES)},
        "witness": {"oneOf": [{"type": "null"}, _ORBIT]},
        "condition2": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["status", "detail"],
                    "properties": {
                        "status": {
                            "enum": [
                                "injective-structural",
                                "injective-numerical",
                                "unknown",
                            ]
                        },
                        "detail": {"type": "string"},
                        "point": {},
                        "orders": {},
                    },
                },
            ]
        },
        "norm_trace": {"oneOf": [{"type": "null"}, {"type": "array"}]},
        "span": {"oneOf": [{"type": "null"}, {"type": "object"}]},
        "rows": {"type": "array"},
        "diagnostics": {"type": "object"},
        "provenance": {
            "type": "object",
            "required": ["config", "config_hash", "seed", "tolerances"],
        },
        "error": {
            "type": "object",
            "required": ["kind", "message"],
            "properties": {
                "kind": {"enum": ["config", "numerical"]},
                "message": {"type": "string"},
                "path": {"oneOf": [{"type": "string"}, {"type": "null"}]},
            },
        },
        "job_index": {"type": "integer"},
    },
}
