"""Job-file execution: validate a config, dispatch a pipeline, emit a report.

Reports are plain dicts matching ``schemas.REPORT_SCHEMA`` and contain no
timestamps, so identical configs and seeds serialize byte-identically.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Mapping

import jsonschema
import numpy as np

from . import certify
from .algebra import PolyMap
from .dynamics import AutWord, PeriodicOrbit
from .schemas import JOB_SCHEMA, PIPELINE_ALIASES, REPORT_SCHEMA
from .serialize import (
    matrix_from_json,
    space_from_json,
    target_from_json,
    target_to_json,
    vector_from_json,
)

__all__ = ["ConfigError", "run_job", "run_job_safe", "replay"]

log = logging.getLogger("koopman_gate.jobs")

_EPS = float(np.finfo(float).eps)


class ConfigError(ValueError):
    """A job config failed validation; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path


def _validate_schema(config: Mapping) -> None:
    validator = jsonschema.Draft202012Validator(JOB_SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "$" + "".join(
            f"[{p!r}]" if isinstance(p, str) else f"[{p}]" for p in err.absolute_path
        )
        raise ConfigError(f"{path}: {err.message}", path=path)


def _tolerances(params: Mapping) -> certify.ToleranceProfile:
    profile = (
        certify.STRICT_TOLERANCES
        if params.get("tolerance_profile") == "strict"
        else certify.DEFAULT_TOLERANCES
    )
    overrides = params.get("tolerances", {})
    known = {
        "orbit_residual",
        "multiplier_match",
        "stability_band",
        "rank_rel_threshold",
        "newton_residual",
    }
    clean = {}
    for key, value in overrides.items():
        if key not in known:
            raise ConfigError(f"unknown tolerance override {key!r}", path="$['params']['tolerances']")
        if not value >= _EPS:
            raise ConfigError(
                f"tolerance override {key}={value} is below machine epsilon",
                path="$['params']['tolerances']",
            )
        clean[key] = float(value)
    return replace(profile, **clean) if clean else profile


def _normalized_config(config: Mapping, pipeline: str) -> dict:
    out = {k: config[k] for k in config}
    out["pipeline"] = pipeline
    return out


def run_job(config: Mapping) -> dict:
    """Execute one job config and return its report dict.

    The report's provenance carries the normalized job config verbatim, so
    ``replay`` reproduces the run exactly.  Raises ConfigError for schema or
    consistency problems and ArithmeticError for numerical failures; callers
    map those to exit codes.
    """
    _validate_schema(config)
    pipeline = PIPELINE_ALIASES.get(config["pipeline"], config["pipeline"])
    normalized = _normalized_config(config, pipeline)
    params = dict(config.get("params", {}))
    seed = int(params.get("seed", 0))
    tolerances = _tolerances(params)

    try:
        target = target_from_json(config["target"])
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad target: {exc}", path="$['target']") from exc

    space = None
    if "space" in config:
        try:
            space = space_from_json(config["space"])
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad space: {exc}", path="$['space']") from exc

    log.info("running pipeline %s (seed %d)", pipeline, seed)

    if pipeline == "span_check":
        if not isinstance(target, list):
            raise ConfigError("span_check needs a matrices target", path="$['target']")
        try:
            verdict = certify.span_check_2x2(target)
        except ValueError as exc:
            raise ConfigError(str(exc), path="$['target']['matrices']") from exc
        provenance = certify.Provenance(
            config=normalized, seed=seed, tolerances=tolerances
        )
        return {
            "schema": certify.SCHEMA_VERSION,
            "kind": "span_verdict",
            "pipeline": pipeline,
            **verdict.to_json(),
            "diagnostics": {},
            "provenance": provenance.to_json(),
        }

    if pipeline == "repelling_orbit":
        if not isinstance(target, PolyMap):
            raise ConfigError("repelling_orbit needs a polymap target", path="$['target']")
        if "orbit" not in params:
            raise ConfigError(
                "repelling_orbit needs params.orbit; use affine_1d to search",
                path="$['params']",
            )
        orbit = PeriodicOrbit.from_json(params["orbit"])
        try:
            cert = certify.repelling_orbit_certificate(
                space,
                target,
                orbit,
                n_probe=int(params.get("n_probe", 6)),
                seed=seed,
                tolerances=tolerances,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return _restamp(cert.to_json(), normalized)

    if pipeline == "affine_1d":
        if not isinstance(target, PolyMap):
            raise ConfigError("affine_1d needs a polymap target", path="$['target']")
        try:
            cert = certify.affine_only_1d(
                space,
                target,
                r_max=int(params.get("r_max", 6)),
                n_probe=int(params.get("n_probe", 6)),
                probe_depth=int(params.get("probe_depth", 10)),
                seed=seed,
                tolerances=tolerances,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return _restamp(cert.to_json(), normalized)

    if pipeline == "polyaut_2d":
        if not isinstance(target, AutWord):
            raise ConfigError("polyaut_2d needs a word target", path="$['target']")
        probe = None
        if "g2_probe" in params:
            probe = [matrix_from_json(m) for m in params["g2_probe"]]
        try:
            cert = certify.polyaut_2d_certificate(
                space,
                target,
                probe,
                r_max=int(params.get("r_max", 4)),
                n_probe=int(params.get("n_probe", 6)),
                seed=seed,
                starts=int(params.get("starts", 4096)),
                tolerances=tolerances,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return _restamp(cert.to_json(), normalized)

    if pipeline == "finite_section":
        if not isinstance(target, PolyMap):
            raise ConfigError("finite_section needs a polymap target", path="$['target']")
        if "point" not in params:
            raise ConfigError("finite_section needs params.point", path="$['params']")
        point = vector_from_json(params["point"])
        orders = params.get("orders")
        if orders is None:
            orders = list(range(1, int(params.get("n_max", 8)) + 1))
        try:
            rows = certify.finite_section_trace(
                space, target, point, orders, tolerances.rank_rel_threshold
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        provenance = certify.Provenance(
            config=normalized, seed=seed, tolerances=tolerances
        )
        return {
            "schema": certify.SCHEMA_VERSION,
            "kind": "table",
            "pipeline": pipeline,
            "rows": rows,
            "diagnostics": {},
            "provenance": provenance.to_json(),
        }

    if pipeline == "monomial_witness":
        if not isinstance(target, PolyMap):
            raise ConfigError("monomial_witness needs a polymap target", path="$['target']")
        try:
            ratios = certify.monomial_ratio_witness(
                space, target, int(params.get("n_max", 8))
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        rows = [{"order": n, "ratio": r} for n, r in ratios]
        provenance = certify.Provenance(
            config=normalized, seed=seed, tolerances=tolerances
        )
        return {
            "schema": certify.SCHEMA_VERSION,
            "kind": "table",
            "pipeline": pipeline,
            "rows": rows,
            "diagnostics": {},
            "provenance": provenance.to_json(),
        }

    raise ConfigError(f"unknown pipeline {pipeline!r}", path="$['pipeline']")



def _restamp(report: dict, normalized: dict) -> dict:
    """Replace API-level provenance config with the originating job config."""
    import hashlib
    import json as _json

    report["provenance"]["config"] = normalized
    blob = _json.dumps(normalized, sort_keys=True).encode()
    report["provenance"]["config_hash"] = hashlib.sha256(blob).hexdigest()
    return report


def run_job_safe(config, index: int | None = None) -> dict:
    """run_job with failures captured as in-band error reports."""
    try:
        if not isinstance(config, Mapping):
            raise ConfigError("job must be a JSON object")
        report = run_job(config)
    except ConfigError as exc:
        report = {
            "schema": certify.SCHEMA_VERSION,
            "kind": "error",
            "error": {"kind": "config", "message": str(exc), "path": exc.path},
        }
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        report = {
            "schema": certify.SCHEMA_VERSION,
            "kind": "error",
            "error": {"kind": "numerical", "message": str(exc), "path": None},
        }
    if index is not None:
        report["job_index"] = index
    return report


def replay(report: Mapping) -> dict:
    """Re-run the config recorded in a report's provenance."""
    provenance = report.get("provenance")
    if not provenance or "config" not in provenance:
        raise ConfigError("report carries no replayable provenance")
    return run_job(provenance["config"])


def validate_report(report: Mapping) -> None:
    jsonschema.Draft202012Validator(REPORT_SCHEMA).validate(report)
