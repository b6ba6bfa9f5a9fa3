"""Run-wide caps and tolerances.

Defaults can be overridden through the ``FINSHAPE_CAPS`` environment variable,
a comma separated list such as ``max_poset_elements=50000,max_maps=1000``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import InputError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class RunConfig:
    max_poset_elements: int = 200_000
    max_maps: int = 20_000
    witness_budget: int = 5_000
    tolerance: float = 1e-12
    p: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.max_poset_elements <= 0 or self.max_maps <= 0 or self.witness_budget <= 0:
            raise InputError("capacity caps must be positive")
        if not is_prime(self.p):
            raise InputError(f"field characteristic {self.p} is not prime")
        if self.tolerance < 0:
            raise InputError("tolerance must be non-negative")

    def updated(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _parse_caps(text: str) -> dict:
    known = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise InputError(f"bad FINSHAPE_CAPS entry {item!r}")
        key, val = (s.strip() for s in item.split("=", 1))
        if key not in known:
            raise InputError(f"unknown cap {key!r}")
        out[key] = float(val) if key == "tolerance" else int(val)
    return out


def load_config(environ=None) -> RunConfig:
    env = os.environ if environ is None else environ
    text = env.get("FINSHAPE_CAPS", "")
    return RunConfig(**_parse_caps(text)) if text else RunConfig()


DEFAULT = RunConfig()
