"""Dirichlet characters modulo an odd prime, Gauss sums, additive expansion.

Characters are represented by their discrete logarithm against the least
primitive root: chi_j(g^t) = e(jt/(p-1)).  That gives O(1) evaluation, a
canonical enumeration, and trivial conjugation (j -> p-1-j).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidModulusError, NonPrimitiveCharacterError


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Least g in [2, p-1] of multiplicative order p-1 mod p."""
    if not _is_odd_prime(p):
        raise InvalidModulusError(f"modulus {p} is not an odd prime")
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise RuntimeError(f"no primitive root found mod {p}")  # pragma: no cover


@dataclass(frozen=True)
class DirichletCharacter:
    """chi_j mod p with chi(g^t) = e(jt/(p-1)); chi(n) = 0 when p | n."""

    p: int
    generator: int
    index: int
    values: np.ndarray = field(repr=False, compare=False)

    @property
    def is_primitive(self) -> bool:
        # prime modulus: every nontrivial character is primitive
        return self.index != 0

    def chi(self, n: int) -> complex:
        return complex(self.values[n % self.p])

    def __call__(self, n: int) -> complex:
        return self.chi(n)

    def conjugate(self) -> "DirichletCharacter":
        j = (self.p - 1 - self.index) % (self.p - 1)
        return _make_character(self.p, self.generator, j)

    def parity(self) -> complex:
        """chi(-1), which is +1 or -1."""
        return self.chi(self.p - 1)


def _make_character(p: int, g: int, index: int) -> DirichletCharacter:
    values = np.zeros(p, dtype=np.complex128)
    residue = 1
    for t in range(p - 1):
        values[residue] = cmath.exp(2j * math.pi * index * t / (p - 1))
        residue = residue * g % p
    return DirichletCharacter(p=p, generator=g, index=index, values=values)


def enumerate_characters(p: int) -> list[DirichletCharacter]:
    """All p-1 characters mod p, indexed 0..p-2 (index 0 is principal)."""
    g = primitive_root(p)
    return [_make_character(p, g, j) for j in range(p - 1)]


def primitive_characters(p: int) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(p) if c.is_primitive]


def gauss_sum(char: DirichletCharacter) -> complex:
    """tau(chi) = sum_{b=1}^{p-1} chi(b) e(b/p), by direct summation."""
    if not char.is_primitive:
        raise NonPrimitiveCharacterError(
            "Gauss sum expansion requires a primitive character"
        )
    p = char.p
    beta = np.arange(1, p)
    phases = np.exp(2j * np.pi * beta / p)
    return complex(np.sum(char.values[1:] * phases))


def additive_expansion(char: DirichletCharacter, m: int) -> complex:
    """chi(m) reconstructed as (1/tau(conj chi)) sum_b conj(chi)(b) e(bm/p)."""
    bar = char.conjugate()
    tau_bar = gauss_sum(bar)
    p = char.p
    beta = np.arange(1, p)
    phases = np.exp(2j * np.pi * beta * (m % p) / p)
    return complex(np.sum(bar.values[1:] * phases) / tau_bar)
