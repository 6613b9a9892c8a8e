"""Jutila's circle method: moduli families, the arc-average approximant to
the unit-interval indicator, its exact L^2 error, and the comparison between
the direct twisted sum S(N) and its circle-method approximation.

Reduced residues are used everywhere, matching L = sum phi(q); the arc at
d = 0 (only for q = 1) sits at the origin of the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import roots_legendre
from sympy import isprime, primerange, totient

from .characters import DirichletCharacter
from .errors import EmptyFamilyError, InsufficientPrimesError, TableTooShortError
from .forms import CuspForm
from .special import window


@dataclass(frozen=True)
class ModuliFamily:
    """The set Phi of moduli with arc half-width delta and L = sum phi(q)."""

    p_avoid: int
    phi: tuple[int, ...]
    delta: float
    L: int
    product_structure: Optional[tuple[tuple[int, ...], ...]] = None

    def reduced_fractions(self) -> list[tuple[int, int]]:
        """All (d, q) with q in phi, 0 <= d < q, gcd(d, q) = 1."""
        out = []
        for q in self.phi:
            if q == 1:
                out.append((0, 1))
                continue
            out.extend((d, q) for d in range(1, q) if math.gcd(d, q) == 1)
        return out


def build_family(
    p: int, q_min: int, q_max: int, delta: float
) -> ModuliFamily:
    """All moduli in [q_min, q_max] coprime to p."""
    if not 1 <= q_min <= q_max:
        raise ValueError(f"need 1 <= q_min <= q_max, got [{q_min}, {q_max}]")
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    phi = tuple(q for q in range(q_min, q_max + 1) if math.gcd(q, p) == 1)
    if not phi:
        raise EmptyFamilyError(
            f"no moduli in [{q_min}, {q_max}] coprime to {p}"
        )
    L = sum(int(totient(q)) for q in phi)
    return ModuliFamily(p_avoid=p, phi=phi, delta=delta, L=L)


def build_product_family(p: int, eta: float, delta: float) -> ModuliFamily:
    """Product family Phi_1 Phi_3 Phi_4 of primes in dyadic windows around
    the optimized sizes p^{1/5 + eta/10} and p^{2/5 + eta/5}."""
    if p < 11 or not isprime(p):
        raise ValueError(f"need a prime p >= 11, got {p}")
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    q1_center = p ** (1 / 5 + eta / 10)
    q34_center = p ** (2 / 5 + eta / 5)

    def window_primes(center):
        lo, hi = center, 2 * center
        return [
            q
            for q in primerange(max(2, math.floor(lo)), math.ceil(hi) + 1)
            if lo <= q <= hi and q != p
        ], (lo, hi)

    phi1_list, w1 = window_primes(q1_center)
    pool, w34 = window_primes(q34_center)
    pool = [q for q in pool if q not in phi1_list]
    if not phi1_list:
        raise InsufficientPrimesError(
            f"no primes in dyadic window [{w1[0]:.3g}, {w1[1]:.3g}]"
        )
    if len(pool) < 2:
        raise InsufficientPrimesError(
            f"need two disjoint prime sets in dyadic window "
            f"[{w34[0]:.3g}, {w34[1]:.3g}], found {len(pool)} primes"
        )
    # the two larger factors share a window; interleave to keep sizes even
    phi1 = tuple(phi1_list)
    phi3 = tuple(pool[0::2])
    phi4 = tuple(pool[1::2])
    products = sorted({q1 * q3 * q4 for q1 in phi1 for q3 in phi3 for q4 in phi4})
    L = sum(int(totient(q)) for q in products)
    return ModuliFamily(
        p_avoid=p,
        phi=tuple(products),
        delta=delta,
        L=L,
        product_structure=(phi1, phi3, phi4),
    )


def i_tilde(family: ModuliFamily, x: float) -> float:
    """Arc-average approximant at x: covering-arc count over 2 delta L."""
    delta = family.delta
    count = 0
    for q in family.phi:
        d_lo = math.ceil((x - delta) * q)
        d_hi = math.floor((x + delta) * q)
        for d in range(d_lo, d_hi + 1):
            if 0 <= d < q and math.gcd(d, q) == 1:
                count += 1
    return count / (2.0 * delta * family.L)


def l2_error(family: ModuliFamily) -> float:
    """Exact integral of |I_[0,1] - I_tilde|^2 by a breakpoint sweep.

    Both functions are piecewise constant; arc endpoints and {0, 1} are the
    only breakpoints, so the integral is exact up to binary64 rounding.
    """
    delta = family.delta
    events = []  # (position, arc-count change)
    for d, q in family.reduced_fractions():
        center = d / q
        events.append((center - delta, 1))
        events.append((center + delta, -1))
    events.append((0.0, 0))
    events.append((1.0, 0))
    events.sort()
    height = 1.0 / (2.0 * delta * family.L)
    total = 0.0
    active = 0
    prev_x = events[0][0]
    for x, change in events:
        if x > prev_x:
            seg_lo, seg_hi = prev_x, x
            approx = active * height
            # split the segment against [0, 1]
            in_lo = max(seg_lo, 0.0)
            in_hi = min(seg_hi, 1.0)
            if in_hi > in_lo:
                total += (1.0 - approx) ** 2 * (in_hi - in_lo)
            out_len = (seg_hi - seg_lo) - max(in_hi - in_lo, 0.0)
            if out_len > 0:
                total += approx**2 * out_len
            prev_x = x
        active += change
    return total


def i_tilde_mass(family: ModuliFamily) -> float:
    """Integral of I_tilde over the line, by the same exact sweep."""
    # each of the L arcs carries mass 2 delta / (2 delta L)
    delta = family.delta
    events = []
    for d, q in family.reduced_fractions():
        center = d / q
        events.append((center - delta, 1))
        events.append((center + delta, -1))
    events.sort()
    height = 1.0 / (2.0 * delta * family.L)
    total = 0.0
    active = 0
    prev_x = events[0][0]
    for x, change in events:
        if x > prev_x:
            total += active * height * (x - prev_x)
            prev_x = x
        active += change
    return total


def _window_weights(form: CuspForm, N: int, kind: str) -> tuple[np.ndarray, np.ndarray]:
    win = window(kind)
    lo, hi = win.support
    n_lo = max(1, math.floor(lo * N))
    n_hi = math.ceil(hi * N)
    if n_hi > form.n_max:
        raise TableTooShortError(
            f"need coefficients up to {n_hi}, table holds {form.n_max}"
        )
    ns = np.arange(n_lo, n_hi + 1)
    weights = form.normalized[ns] * win(ns / N)
    return ns, weights


def s_direct(
    f: CuspForm, g: CuspForm, char: DirichletCharacter, N: int
) -> complex:
    """S(N) = sum lambda_f(n) lambda_g(n) chi(n) h(n/N), window bump_12."""
    if N <= 0:
        return 0.0 + 0.0j
    ns, wf = _window_weights(f, N, "bump_12")
    lam_g = g.normalized
    if ns[-1] > g.n_max:
        raise TableTooShortError(
            f"need coefficients up to {ns[-1]}, table holds {g.n_max}"
        )
    chi_vals = char.values[ns % char.p]
    return complex(np.sum(wf * lam_g[ns] * chi_vals))


def s_tilde(
    f: CuspForm,
    g: CuspForm,
    char: DirichletCharacter,
    N: int,
    family: ModuliFamily,
    nodes: int = 8,
) -> complex:
    """Circle-method approximation of S(N): for each reduced arc a/q, the
    short integral of A(x) B(x) over [a/q - delta, a/q + delta], where A is
    the f-side exponential sum with window bump_12 and B the chi-twisted
    g-side sum with the plateau window; Gauss-Legendre in alpha per arc.
    """
    if nodes < 2:
        raise ValueError("need at least 2 quadrature nodes per arc")
    ns, wf = _window_weights(f, N, "bump_12")
    ms, wg_plain = _window_weights(g, N, "plateau_half_52")
    wg = wg_plain * char.values[ms % char.p]

    gl_x, gl_w = roots_legendre(nodes)
    delta = family.delta
    fractions = family.reduced_fractions()
    xs = np.concatenate(
        [d / q + delta * gl_x for d, q in fractions]
    )
    weights = np.tile(gl_w, len(fractions))

    total = 0.0 + 0.0j
    chunk = 256
    for i in range(0, xs.size, chunk):
        xc = xs[i : i + chunk]
        wc = weights[i : i + chunk]
        a_vals = np.exp(2j * np.pi * np.outer(xc, ns)) @ wf
        b_vals = np.exp(-2j * np.pi * np.outer(xc, ms)) @ wg
        total += np.sum(wc * a_vals * b_vals)
    # (1/(2 delta L)) * sum_arcs delta * sum_i w_i A B
    return complex(total / (2.0 * family.L))
