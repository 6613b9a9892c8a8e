"""Exponential and convolution sums: Ramanujan sums, the twisted character
sum in both brute-force and closed form, shifted convolution sums, short
twisted sums, and the first-distinguishing-index search.

The closed form of the character sum exists in two conjugation variants in
the source material; the one used by char_sum_closed is the variant that
matches the brute-force double sum on the full verification grid (see the
decisions ledger).  The printed variant stays callable for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy import mobius

from .characters import DirichletCharacter, gauss_sum
from .errors import NonInvertibleError, TableTooShortError
from .forms import CuspForm
from .special import window


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) = sum_{d | gcd(q, n)} d mu(q/d), with gcd(q, 0) = q."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    g = q if n == 0 else math.gcd(q, abs(n))
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += d * int(mobius(q // d))
    return total


def ramanujan_sum_direct(q: int, n: int) -> complex:
    """Direct exponential sum over reduced residues (oracle for c_q)."""
    total = 0.0 + 0.0j
    for a in range(q):
        if math.gcd(a, q) == 1 or q == 1:
            total += np.exp(2j * np.pi * a * n / q)
    return complex(total)


@dataclass(frozen=True)
class CharSumInstance:
    """Parameters of the double character sum over a mod q and beta mod p."""

    p: int
    q: int
    char: DirichletCharacter
    m: int
    n: int
    convention: str = "plus"

    def __post_init__(self):
        if self.char.p != self.p:
            raise ValueError("character modulus disagrees with p")
        if not self.char.is_primitive:
            raise ValueError("character must be primitive")
        if math.gcd(self.q, self.p) != 1:
            raise ValueError(f"q = {self.q} must be coprime to p = {self.p}")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.convention not in ("plus", "minus"):
            raise ValueError(f"bad convention {self.convention!r}")


def char_sum_bruteforce(inst: CharSumInstance) -> complex:
    """Direct double sum over reduced a mod q and reduced beta mod p."""
    p, q = inst.p, inst.q
    pq = p * q
    chi_bar = inst.char.conjugate()
    sign = 1 if inst.convention == "plus" else -1
    total = 0.0 + 0.0j
    for a in range(q):
        if q > 1 and math.gcd(a, q) != 1:
            continue
        a_bar = pow(a, -1, q) if q > 1 else 0
        e_a = np.exp(-2j * np.pi * a_bar * inst.n / q) if q > 1 else 1.0
        for beta in range(1, p):
            c = (a * p + sign * beta * q) % pq
            if math.gcd(c, pq) != 1:
                raise NonInvertibleError(
                    f"c = {c} not invertible mod {pq} (internal inconsistency)"
                )
            c_bar = pow(c, -1, pq)
            total += (
                chi_bar.values[beta]
                * np.exp(2j * np.pi * c_bar * inst.m / pq)
                * e_a
            )
    return complex(total)


def _divisor_factor(inst: CharSumInstance) -> int:
    # sum_{d | q, m = p^2 n mod d} d mu(q/d), i.e. c_q(m - p^2 n)
    return ramanujan_sum(inst.q, inst.m - inst.p * inst.p * inst.n)


def char_sum_closed(inst: CharSumInstance) -> complex:
    """Closed form pinned by the brute-force grid:

    plus:  tau(chi) chibar(m) chi(q^2) c_q(m - p^2 n)
    minus: the same times chi(-1).
    """
    char = inst.char
    tau = gauss_sum(char)
    chi_bar = char.conjugate()
    value = (
        tau
        * chi_bar.chi(inst.m)
        * char.chi(inst.q * inst.q)
        * _divisor_factor(inst)
    )
    if inst.convention == "minus":
        value *= char.parity()
    return complex(value)


def char_sum_closed_printed(inst: CharSumInstance) -> complex:
    """The conjugation variant as printed in the source lemma header:
    tau(chibar) chi(m) chibar(q^2) times the divisor sum.  Kept callable for
    comparison; it disagrees with the brute-force sum for complex chi."""
    char = inst.char
    chi_bar = char.conjugate()
    value = (
        gauss_sum(chi_bar)
        * char.chi(inst.m)
        * chi_bar.chi(inst.q * inst.q)
        * _divisor_factor(inst)
    )
    if inst.convention == "minus":
        value *= char.parity()
    return complex(value)


def shifted_convolution(
    g: CuspForm, q1: int, q1p: int, shift: int, M: int
) -> float:
    """sum over q1p*u - q1*v = shift of lambda(u) lambda(v) W(u/M) W(v/M),
    windows bump_unit, u and v supported on [M/2, 3M]."""
    if q1 < 1 or q1p < 1 or M < 1:
        raise ValueError("q1, q1p, M must be positive")
    if 3 * M > g.n_max:
        raise TableTooShortError(
            f"need coefficients up to {3 * M}, table holds {g.n_max}"
        )
    win = window("bump_unit")
    lam = g.normalized
    u_lo = max(1, math.floor(M / 2))
    us = np.arange(u_lo, 3 * M + 1)
    tops = q1p * us - shift
    ok = (tops > 0) & (tops % q1 == 0)
    us = us[ok]
    vs = tops[ok] // q1
    ok = (vs >= 1) & (vs <= 3 * M)
    us, vs = us[ok], vs[ok]
    if us.size == 0:
        return 0.0
    vals = lam[us] * lam[vs] * win(us / M) * win(vs / M)
    return float(np.sum(vals))


def shifted_convolution_bound_ratio(
    g: CuspForm, q1: int, q1p: int, shift: int, M: int, theta: float = 7 / 64
) -> float:
    """|shifted_convolution| over the comparison bound (q1p M + q1 M)^{1/2+theta}."""
    value = abs(shifted_convolution(g, q1, q1p, shift, M))
    bound = float(q1p * M + q1 * M) ** (0.5 + theta)
    return value / bound


def short_twisted_sum(
    g: CuspForm, char: DirichletCharacter, m0: int
) -> complex:
    """sum_r lambda(r) chi(r) W(r/M0), window bump_unit on [M0/2, 3 M0]."""
    if m0 < 1:
        return 0.0 + 0.0j
    if 3 * m0 > g.n_max:
        raise TableTooShortError(
            f"need coefficients up to {3 * m0}, table holds {g.n_max}"
        )
    win = window("bump_unit")
    rs = np.arange(max(1, math.floor(m0 / 2)), 3 * m0 + 1)
    vals = g.normalized[rs] * char.values[rs % char.p] * win(rs / m0)
    return complex(np.sum(vals))


def first_distinguishing_index(
    f: CuspForm,
    g: CuspForm,
    char: DirichletCharacter,
    n_max: int,
    tolerance: float = 1e-9,
):
    """Least n <= n_max coprime to the character modulus with
    lambda_f(n) != lambda_g(n) chi(n), or None if the window shows none."""
    if n_max > f.n_max or n_max > g.n_max:
        raise TableTooShortError(
            f"n_max={n_max} exceeds a table length "
            f"({f.n_max} and {g.n_max} available)"
        )
    p = char.p
    for n in range(1, n_max + 1):
        if n % p == 0:
            continue
        if abs(f.normalized[n] - g.normalized[n] * char.values[n % p]) > tolerance:
            return n
    return None
