"""Subconvexity scan: sup over a dyadic N-grid of |S(N)|/sqrt(N) for every
primitive character mod p, compared against p^{27/28}.

S(N) is the direct chi-twisted sum from the circle module.  For speed the
window weights are aggregated by residue class mod p once per (p, N); each
character's sum is then a length-p dot product, so the full prime range
costs seconds rather than hours.
"""

from __future__ import annotations

import math

import numpy as np

from ..characters import primitive_characters
from ..errors import TableTooShortError
from ..forms import CuspForm
from ..special import window
from .report import format_real

SCAN_HEADER = "p,chi_index,sup_value,argmax_N,ratio_to_p_27_28"


def _n_grid(p: int, n_grid_per_p: int) -> list[int]:
    # geometric, ratio 2, from 8 up to p^2
    grid = []
    n = 8
    while n <= p * p:
        grid.append(n)
        n *= 2
    if not grid:
        grid = [min(8, p * p)]
    if n_grid_per_p > 0:
        grid = grid[-n_grid_per_p:]
    return grid


def subconvexity_scan(
    f: CuspForm, g: CuspForm, p_list, n_grid_per_p: int = 0
) -> list[dict]:
    """One result row per (p, chi index): sup_N |S(N)|/sqrt(N), the
    maximizing N, and the ratio of the sup to p^{27/28}."""
    win = window("bump_12")
    rows = []
    for p in sorted(set(int(p) for p in p_list)):
        grid = _n_grid(p, n_grid_per_p)
        need = 2 * max(grid)
        if need > f.n_max or need > g.n_max:
            raise TableTooShortError(
                f"scan at p={p} needs coefficients up to {need}; "
                f"tables hold {f.n_max} and {g.n_max}"
            )
        chars = primitive_characters(p)
        values = np.stack([c.values for c in chars])  # (#chars, p)
        sup = np.zeros(len(chars))
        arg_n = np.zeros(len(chars), dtype=np.int64)
        for n_val in grid:
            ns = np.arange(n_val, 2 * n_val + 1)
            w = f.normalized[ns] * g.normalized[ns] * win(ns / n_val)
            class_sums = np.bincount(ns % p, weights=w, minlength=p)
            s_all = np.abs(values @ class_sums) / math.sqrt(n_val)
            better = s_all > sup
            sup[better] = s_all[better]
            arg_n[better] = n_val
        scale = float(p) ** (27.0 / 28.0)
        for j, c in enumerate(chars):
            rows.append(
                {
                    "p": p,
                    "chi_index": c.index,
                    "sup_value": float(sup[j]),
                    "argmax_N": int(arg_n[j]),
                    "ratio_to_p_27_28": float(sup[j]) / scale,
                }
            )
    return rows


def scan_to_csv(rows) -> str:
    lines = [SCAN_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r["p"]),
                    str(r["chi_index"]),
                    format_real(r["sup_value"]),
                    str(r["argmax_N"]),
                    format_real(r["ratio_to_p_27_28"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"
