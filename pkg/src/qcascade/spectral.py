"""Walsh spectra of truth vectors, exact-rational and modular."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

MAX_VARS = 10

_BASE = np.array([[1, 1], [1, -1]], dtype=np.int64)


@dataclass(frozen=True)
class TruthVector:
    """Output column of a completely specified function of n inputs.

    Row index is the binary number x1 x2 ... xn with x1 most significant,
    so row 0 is the all-zero assignment and the last variable toggles
    fastest.
    """

    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.n < 0:
            raise ValueError("variable count must be non-negative")
        if len(self.values) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} values for n={self.n}, got {len(self.values)}")

    @classmethod
    def from_bits(cls, bits: str) -> "TruthVector":
        n = (len(bits) - 1).bit_length()
        return cls(n, tuple(int(c) for c in bits))

    @property
    def is_boolean(self) -> bool:
        return all(v in (0, 1) for v in self.values)

    def value_at(self, assignment: Sequence[int]) -> int:
        if len(assignment) != self.n:
            raise ValueError(f"assignment has {len(assignment)} bits, expected {self.n}")
        idx = 0
        for b in assignment:
            idx = (idx << 1) | (int(b) & 1)
        return self.values[idx]

    def assignments(self) -> Iterator[tuple[int, ...]]:
        """All assignments in row order."""
        return product((0, 1), repeat=self.n)


@dataclass(frozen=True)
class WalshSpectrum:
    """Spectral coefficients, one per truth-table row.

    ``modulus`` is None for exact rational (EQB) spectra; modular (MGD)
    spectra hold signed residues in (-m/2, m/2].
    """

    n: int
    coeffs: tuple
    modulus: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} coefficients for n={self.n}, got {len(self.coeffs)}")

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


def walsh_matrix(n: int) -> np.ndarray:
    """Dense Walsh-Hadamard matrix: n-fold Kronecker power of [[1,1],[1,-1]]."""
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"n must be in 1..{MAX_VARS}, got {n}")
    out = _BASE
    for _ in range(n - 1):
        out = np.kron(out, _BASE)
    return out


def fwht(values: Sequence) -> list:
    """In-place butterfly transform of a power-of-two-length sequence.

    Runs in O(len * log len) exact arithmetic (Python ints, or Fractions for
    the rational round-trip).  Equals walsh_matrix(n) @ values.
    """
    out = list(values)
    size = len(out)
    if size == 0 or size & (size - 1):
        raise ValueError(f"length must be a power of two, got {size}")
    half = 1
    while half < size:
        for start in range(0, size, 2 * half):
            for j in range(start, start + half):
                x, y = out[j], out[j + half]
                out[j] = x + y
                out[j + half] = x - y
        half *= 2
    return out


def modinv(a: int, m: int) -> int:
    """Inverse of a modulo m, in [1, m)."""
    if m < 2:
        raise ValueError(f"modulus must be at least 2, got {m}")
    g = math.gcd(a, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}: gcd({a}, {m}) = {g}")
    return pow(a, -1, m)


def _signed_mod(v: int, m: int) -> int:
    r = v % m
    return r - m if 2 * r > m else r


def spectrum_exact(truth: TruthVector) -> WalshSpectrum:
    """Exact EQB spectrum: fwht(F) scaled by 2^-n, as Fractions."""
    if not truth.is_boolean:
        raise ValueError("EQB spectra need a Boolean truth vector")
    scale = 1 << truth.n
    coeffs = tuple(Fraction(c, scale) for c in fwht(truth.values))
    return WalshSpectrum(truth.n, coeffs, None)


def spectrum_mod(truth: TruthVector, modulus: int) -> WalshSpectrum:
    """Modular MGD spectrum: modinv(2^n) * fwht(F), as signed residues."""
    if modulus % 2 == 0:
        raise ValueError(f"modulus must be odd, got {modulus}: 2^n has no inverse modulo an even number")
    scale = modinv((1 << truth.n) % modulus, modulus)
    coeffs = tuple(_signed_mod(c * scale, modulus) for c in fwht(truth.values))
    return WalshSpectrum(truth.n, coeffs, modulus)
