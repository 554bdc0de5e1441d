"""Report and configuration records shared by the command line front end."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from relcommit import __version__

INSECURE = "insecure"


class ValidationError(ValueError):
    """A parameter is outside the range its formula or protocol allows."""


def canonical_json(obj: Any) -> str:
    """Sorted keys, two-space indent, trailing newline; identical input gives identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


def _is_power_of_two(q: int) -> bool:
    return q >= 2 and q & (q - 1) == 0


# (check, message) per parameter name
_RANGES = {
    "n": (lambda v: isinstance(v, int) and v >= 1, "n must be a positive integer"),
    "m": (lambda v: isinstance(v, int) and v >= 1, "m must be a positive integer"),
    "q": (lambda v: isinstance(v, int) and _is_power_of_two(v), "q must be a power of two, q = 2^n >= 2"),
    "delta": (lambda v: 0 <= v < 1, "delta must lie in [0, 1)"),
    "gamma": (lambda v: 0 <= v < 1, "gamma must lie in [0, 1)"),
    "mu": (lambda v: v >= 0 and math.isfinite(v), "mu (mean photon number) must be non-negative"),
    "eta": (lambda v: 0 <= v <= 1, "eta (detection efficiency) must lie in [0, 1]"),
    "err": (lambda v: 0 <= v < 0.5, "err must lie in [0, 1/2)"),
    "distance_km": (lambda v: v > 0 and math.isfinite(v), "distance must be a positive number of kilometres"),
    "seed": (lambda v: isinstance(v, int) and v >= 0, "seed must be a non-negative integer"),
    "d": (lambda v: v in (0, 1), "d must be a bit"),
    "c": (lambda v: v in (0, 1), "c must be a bit"),
    "budget": (lambda v: isinstance(v, int) and v >= 1, "budget must be a positive integer"),
    "samples": (lambda v: isinstance(v, int) and v >= 1, "samples must be a positive integer"),
    "overlap": (lambda v: 2 ** -0.5 - 1e-12 <= v <= 1, "overlap must lie in [1/sqrt(2), 1]"),
}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: Mapping[str, Any] = field(default_factory=dict)
    out: str | None = None

    def validate(self) -> "RunConfig":
        for name, value in self.params.items():
            if value is None or name not in _RANGES:
                continue
            check, msg = _RANGES[name]
            try:
                ok = bool(check(value))
            except TypeError:
                ok = False
            _require(ok, f"{msg}; got {name} = {value!r}")
        return self

    def to_json(self) -> dict:
        return {"subcommand": self.subcommand, "params": {k: v for k, v in sorted(self.params.items())},
                "out": self.out}

    @classmethod
    def from_json(cls, d: Mapping) -> "RunConfig":
        return cls(d["subcommand"], dict(d.get("params", {})), d.get("out"))

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(canonical_json(self.to_json()))


@dataclass
class SecurityReport:
    """Outcome of a bound or feasibility calculation.

    ``epsilon`` is either a probability in [0, 1] or the marker "insecure".
    """

    protocol: str
    parameters: Mapping[str, Any]
    epsilon: float | str
    formula: str
    flags: Mapping[str, bool] = field(default_factory=dict)
    values: Mapping[str, Any] = field(default_factory=dict)   # further numbers, e.g. exact and Chernoff forms
    units: Mapping[str, str] = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__

    def __post_init__(self):
        if isinstance(self.epsilon, str):
            if self.epsilon != INSECURE:
                raise ValueError(f"epsilon must be a probability or {INSECURE!r}")
        elif not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon {self.epsilon} is not a probability")

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "parameters": dict(self.parameters),
            "epsilon": self.epsilon,
            "formula": self.formula,
            "flags": dict(self.flags),
            "values": dict(self.values),
            "units": {"epsilon": "probability (dimensionless)", **self.units},
            "seed": self.seed,
            "version": self.version,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "SecurityReport":
        units = {k: v for k, v in d.get("units", {}).items() if k != "epsilon"}
        return cls(d["protocol"], d["parameters"], d["epsilon"], d["formula"], d.get("flags", {}),
                   d.get("values", {}), units, d.get("seed"), d.get("version", __version__))

    def __eq__(self, other):
        if not isinstance(other, SecurityReport):
            return NotImplemented
        return canonical_json(self.to_json()) == canonical_json(other.to_json())


def envelope(config: RunConfig, result: Mapping, elapsed: float | None = None) -> dict:
    out = {"config": config.to_json(), "result": result}
    if elapsed is not None:
        out["elapsed_s"] = elapsed
    return out


def parse_envelope(text: str) -> tuple[RunConfig, dict]:
    d = json.loads(text)
    return RunConfig.from_json(d["config"]), d["result"]
