"""Key=value configuration with environment and flag overrides.

Precedence, lowest to highest: built-in defaults, config file, environment
variables (SUBCONV_<KEY>), explicit flag overrides.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


@dataclass
class HarnessConfig:
    table_cap: int = 2_000_000
    voronoi_tolerance: float = 1e-6
    twisted_tolerance: float = 1e-5
    charsum_tolerance: float = 1e-9
    gauss_tolerance: float = 1e-10
    truncation: int = 4000
    quadrature_nodes: int = 8
    parallelism: int = 1
    only: str = ""
    out: str = ""


_ENV_PREFIX = "SUBCONV_"


def _coerce(raw: str, kind):
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    return raw


def load_config(path=None, env=None, overrides=None) -> HarnessConfig:
    """Defaults, then `path` (key=value lines, # comments), then environment,
    then the overrides mapping."""
    cfg = HarnessConfig()
    known = {f.name: f.type for f in fields(HarnessConfig)}
    types = {"table_cap": int, "truncation": int, "quadrature_nodes": int,
             "parallelism": int, "only": str, "out": str,
             "voronoi_tolerance": float, "twisted_tolerance": float,
             "charsum_tolerance": float, "gauss_tolerance": float}

    def apply(key: str, raw):
        key = key.strip().lower()
        if key not in known:
            raise KeyError(f"unknown config key {key!r}")
        setattr(cfg, key, _coerce(str(raw).strip(), types[key]))

    if path:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line {line!r}")
                key, raw = line.split("=", 1)
                apply(key, raw)

    env = os.environ if env is None else env
    for key in known:
        env_key = _ENV_PREFIX + key.upper()
        if env_key in env:
            apply(key, env[env_key])

    for key, raw in (overrides or {}).items():
        if raw is not None:
            apply(key, raw)
    return cfg
