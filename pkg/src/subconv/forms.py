"""Exact Fourier coefficient tables for level-one holomorphic cusp forms.

The unique normalized cusp forms of weights 12, 16, 18, 20, 22, 26 are built
as Delta * E4^a * E6^b with exact integer power-series arithmetic.  Delta
itself comes from the cube of the eta function: the cube is lacunary
(Jacobi's identity), and its eighth power is assembled by three successive
exact squarings.  Normalization to binary64 Hecke eigenvalues
lambda(n) = a(n) * n^{-(k-1)/2} happens lazily, so every integer identity
can be tested exactly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import CoefficientRangeError, TableCapError, UnsupportedWeightError

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int

SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)
DEFAULT_TABLE_CAP = 2_000_000

# weight -> (a, b) in Delta * E4^a * E6^b
_EISENSTEIN_POWERS = {
    12: (0, 0),
    16: (1, 0),
    18: (0, 1),
    20: (2, 0),
    22: (1, 1),
    26: (2, 1),
}


def _pack(coeffs: list[int], width: int) -> int:
    chunks = b"".join(c.to_bytes(width, "little") for c in coeffs)
    return int.from_bytes(chunks, "little")


def _unpack(value: int, width: int, count: int) -> list[int]:
    nbytes = max(width * count, (value.bit_length() + 7) // 8)
    raw = value.to_bytes(nbytes, "little")
    return [
        int.from_bytes(raw[i * width : (i + 1) * width], "little")
        for i in range(count)
    ]


def _poly_mul(a: list[int], b: list[int], count: int) -> list[int]:
    """Exact product of integer coefficient lists, truncated to `count` terms.

    Uses Kronecker substitution: coefficients are packed into one large
    integer per sign part, multiplied with GMP, and unpacked.  The chunk
    width is chosen so carries between adjacent coefficients cannot occur.
    """
    max_a = max((abs(c) for c in a), default=0)
    max_b = max((abs(c) for c in b), default=0)
    if max_a == 0 or max_b == 0:
        return [0] * count
    bound = 2 * min(len(a), len(b)) * max_a * max_b
    width = bound.bit_length() // 8 + 2

    a_pos = _mpz(_pack([c if c > 0 else 0 for c in a], width))
    a_neg = _mpz(_pack([-c if c < 0 else 0 for c in a], width))
    b_pos = _mpz(_pack([c if c > 0 else 0 for c in b], width))
    b_neg = _mpz(_pack([-c if c < 0 else 0 for c in b], width))

    big_pos = int(a_pos * b_pos + a_neg * b_neg)
    big_neg = int(a_pos * b_neg + a_neg * b_pos)

    n_out = min(count, len(a) + len(b) - 1)
    pos = _unpack(big_pos, width, n_out)
    neg = _unpack(big_neg, width, n_out)
    out = [p - n for p, n in zip(pos, neg)]
    out.extend([0] * (count - n_out))
    return out


def _eta_cubed(count: int) -> list[int]:
    # Jacobi: prod (1-q^n)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}
    coeffs = [0] * count
    j = 0
    while j * (j + 1) // 2 < count:
        coeffs[j * (j + 1) // 2] = (2 * j + 1) if j % 2 == 0 else -(2 * j + 1)
        j += 1
    return coeffs


def _divisor_power_sums(power: int, count: int) -> list[int]:
    """sigma_power(n) for n = 1..count by sieving."""
    sums = [0] * (count + 1)
    for d in range(1, count + 1):
        dp = d**power
        for m in range(d, count + 1, d):
            sums[m] += dp
    return sums[1:]


def _eisenstein_series(weight: int, count: int) -> list[int]:
    if weight == 4:
        scale, power = 240, 3
    elif weight == 6:
        scale, power = -504, 5
    else:  # pragma: no cover
        raise ValueError(f"no Eisenstein table for weight {weight}")
    sigma = _divisor_power_sums(power, max(count - 1, 0))
    return [1] + [scale * s for s in sigma[: count - 1]]


class CuspForm:
    """Weight plus an exact integer coefficient table a(1..n_max).

    Immutable after construction; the binary64 eigenvalue table is built on
    first use and cached.
    """

    __slots__ = ("weight", "n_max", "_raw", "_normalized")

    def __init__(self, weight: int, n_max: int, raw: list[int]):
        self.weight = weight
        self.n_max = n_max
        self._raw = raw  # raw[n] = a(n); raw[0] unused
        self._normalized: np.ndarray | None = None

    def a(self, n: int) -> int:
        """Exact integer coefficient a(n)."""
        if not 1 <= n <= self.n_max:
            raise CoefficientRangeError(
                f"n={n} outside table range 1..{self.n_max}"
            )
        return self._raw[n]

    def lam(self, n: int) -> float:
        """Normalized Hecke eigenvalue lambda(n) = a(n) n^{-(k-1)/2}."""
        if not 1 <= n <= self.n_max:
            raise CoefficientRangeError(
                f"n={n} outside table range 1..{self.n_max}"
            )
        return float(self._raw[n]) * float(n) ** (-(self.weight - 1) / 2)

    @property
    def raw(self) -> list[int]:
        return self._raw

    @property
    def normalized(self) -> np.ndarray:
        """lambda(n) for n = 0..n_max as binary64 (index 0 is zero)."""
        if self._normalized is None:
            arr = np.array([float(c) for c in self._raw], dtype=np.float64)
            n = np.arange(len(arr), dtype=np.float64)
            n[0] = 1.0
            arr *= n ** (-(self.weight - 1) / 2)
            arr[0] = 0.0
            self._normalized = arr
        return self._normalized

    def __repr__(self) -> str:  # pragma: no cover
        return f"CuspForm(weight={self.weight}, n_max={self.n_max})"


def build_delta(n_max: int, table_cap: int = DEFAULT_TABLE_CAP) -> CuspForm:
    """Delta, with raw(n) = tau(n), via three exact squarings of eta^3."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if n_max > table_cap:
        raise TableCapError(f"n_max={n_max} exceeds table cap {table_cap}")
    e3 = _eta_cubed(n_max)
    e6 = _poly_mul(e3, e3, n_max)
    e12 = _poly_mul(e6, e6, n_max)
    e24 = _poly_mul(e12, e12, n_max)
    return CuspForm(12, n_max, [0] + e24)


def build_form(
    weight: int, n_max: int, table_cap: int = DEFAULT_TABLE_CAP
) -> CuspForm:
    """The unique normalized level-one cusp form of the given weight."""
    if weight not in _EISENSTEIN_POWERS:
        raise UnsupportedWeightError(
            f"weight {weight} not in {SUPPORTED_WEIGHTS}"
        )
    delta = build_delta(n_max, table_cap=table_cap)
    series = delta.raw[1:]  # degree index i corresponds to a(i+1)
    e4_pow, e6_pow = _EISENSTEIN_POWERS[weight]
    for _ in range(e4_pow):
        series = _poly_mul(series, _eisenstein_series(4, n_max), n_max)
    for _ in range(e6_pow):
        series = _poly_mul(series, _eisenstein_series(6, n_max), n_max)
    return CuspForm(weight, n_max, [0] + series)


@lru_cache(maxsize=16)
def cached_form(weight: int, n_max: int) -> CuspForm:
    """Shared immutable table for repeat use across suites and tests."""
    return build_form(weight, n_max)
