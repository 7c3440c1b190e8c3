"""Structured audit records and their JSON serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

FIELD_ORDER = ("claim", "variant", "grid", "seed", "residual_max", "residual_mean", "pass", "wall_time_s", "details")

VARIANT_KEYS = ("E_variant", "boundary_convention", "parenthesization", "weight_exponent", "identity")

AUDIT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["claim", "variant", "grid", "seed", "residual_max", "residual_mean", "wall_time_s"],
    "additionalProperties": False,
    "properties": {
        "claim": {"type": "string", "minLength": 1},
        "variant": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "E_variant": {"type": ["string", "null"]},
                "boundary_convention": {"type": ["string", "null"]},
                "parenthesization": {"type": ["string", "null"]},
                "weight_exponent": {"type": ["integer", "null"]},
                "identity": {"type": ["string", "null"]},
            },
        },
        "grid": {
            "type": ["object", "null"],
            "required": ["sizes", "h", "topology"],
            "properties": {
                "sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "h": {"type": "number", "exclusiveMinimum": 0},
                "topology": {"type": "string"},
            },
        },
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "residual_max": {"type": ["number", "null"], "minimum": 0},
        "residual_mean": {"type": ["number", "null"], "minimum": 0},
        "pass": {"type": "boolean"},
        "wall_time_s": {"type": ["number", "null"], "minimum": 0},
        "details": {"type": "object"},
    },
}


def grid_echo(sizes, h, topology):
    return {"sizes": [int(n) for n in sizes], "h": float(h), "topology": str(topology)}


def spec_echo(spec):
    return grid_echo(spec.sizes, spec.h, spec.topology.value)


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _clean(value.item())
    return value


@dataclass
class AuditReport:
    """Outcome of one audited claim.

    ``passed`` is ``None`` for audit-only claims (no threshold) and a bool
    for hard assertions; only the latter serialize a ``pass`` field.
    """

    claim: str
    residual_max: float
    residual_mean: float
    variant: dict = field(default_factory=dict)
    grid: dict | None = None
    seed: int | None = None
    passed: bool | None = None
    wall_time_s: float | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.variant) - set(VARIANT_KEYS)
        if unknown:
            raise ValueError(f"unknown variant tags {sorted(unknown)}")

    @property
    def is_hard(self):
        return self.passed is not None

    def to_dict(self):
        out = {
            "claim": self.claim,
            "variant": {k: self.variant[k] for k in VARIANT_KEYS if k in self.variant},
            "grid": self.grid,
            "seed": self.seed,
            "residual_max": float(self.residual_max) if self.residual_max is not None else None,
            "residual_mean": float(self.residual_mean) if self.residual_mean is not None else None,
        }
        if self.passed is not None:
            out["pass"] = bool(self.passed)
        out["wall_time_s"] = self.wall_time_s
        if self.details:
            out["details"] = dict(sorted(self.details.items()))
        return _clean(out)

    def to_json(self):
        return json.dumps(self.to_dict(), allow_nan=False)

    @classmethod
    def from_dict(cls, d):
        return cls(
            claim=d["claim"],
            residual_max=d["residual_max"],
            residual_mean=d["residual_mean"],
            variant=dict(d.get("variant", {})),
            grid=d.get("grid"),
            seed=d.get("seed"),
            passed=d.get("pass"),
            wall_time_s=d.get("wall_time_s"),
            details=dict(d.get("details", {})),
        )


def from_residual(res, *, grid=None, seed=None, hard=False, rtol=1e-12, use_mass=False, variant=None, details=None):
    """Wrap an :class:`~octolat.calculus.IdentityResidual` into a report."""
    tags = {"identity": res.variant}
    tags.update(variant or {})
    info = {"lhs": list(res.lhs), "rhs": list(res.rhs), "residual_norm": res.residual_norm,
            "scale": res.scale, "mass": res.mass}
    info.update(details or {})
    return AuditReport(
        claim=res.claim,
        residual_max=res.residual_max,
        residual_mean=res.residual_mean,
        variant=tags,
        grid=grid,
        seed=seed,
        passed=res.passes(rtol, use_mass) if hard else None,
        details=info,
    )


def dump_stream(reports, fp):
    """Write reports as JSON lines."""
    for r in reports:
        fp.write(r.to_json())
        fp.write("\n")


def load_stream(fp):
    return [AuditReport.from_dict(json.loads(line)) for line in fp if line.strip()]
