"""Exact arithmetic in the dihedral groups D_n and evaluation of cascade words.

Elements are written in the normal form a^r g^s with 0 <= r < n and s in
{0, 1}, where a is the rotation generator (a^n = I) and g a reflection
(g^2 = I, g a g = a^-1).  Products therefore follow

    a^i g^s . a^j g^t = a^(i + j * (-1)^s) g^(s xor t)

with words and permutations composed left to right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .words import EQB, MGD, CascadeWord, Refl, Rot


@dataclass(frozen=True)
class DihedralParams:
    """Order parameter n of D_n (the group itself has order 2n)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"dihedral order parameter must be at least 2, got {self.n}")


@dataclass(frozen=True)
class GroupElement:
    """Normalized element a^rot g^refl, with 0 <= rot < n."""

    rot: int
    refl: bool = False


IDENTITY = GroupElement(0, False)


def element(rot: int, refl: bool, p: DihedralParams) -> GroupElement:
    """Build a normalized element, reducing the rotation exponent mod n."""
    return GroupElement(rot % p.n, bool(refl))


def mul(e1: GroupElement, e2: GroupElement, p: DihedralParams) -> GroupElement:
    rot = e1.rot - e2.rot if e1.refl else e1.rot + e2.rot
    return GroupElement(rot % p.n, e1.refl != e2.refl)


def inv(e: GroupElement, p: DihedralParams) -> GroupElement:
    if e.refl:
        # reflections are involutions
        return e
    return GroupElement(-e.rot % p.n, False)


def all_elements(p: DihedralParams) -> Iterable[GroupElement]:
    for refl in (False, True):
        for rot in range(p.n):
            yield GroupElement(rot, refl)


def format_element(e: GroupElement, p: DihedralParams) -> str:
    """Display form: "I", "a^k", "g", "a^k g" with k the signed residue."""
    k = e.rot
    if 2 * k > p.n:
        k -= p.n
    if k == 0:
        return "g" if e.refl else "I"
    return f"a^{k} g" if e.refl else f"a^{k}"


@dataclass(frozen=True)
class RailPermutation:
    """Action on the n rails 0..n-1; image[i] is where rail i is sent."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "image", tuple(self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a permutation of 0..{len(self.image) - 1}: {self.image}")

    def then(self, other: "RailPermutation") -> "RailPermutation":
        """Composition in application order: self first, then other."""
        if len(self.image) != len(other.image):
            raise ValueError("permutation sizes differ")
        return RailPermutation(tuple(other.image[i] for i in self.image))


def to_permutation(e: GroupElement, p: DihedralParams) -> RailPermutation:
    """Rail action: a maps i to i+1 mod n, g maps i to (n - i) mod n.

    The rotation acts first, then the reflection, which makes
    to_permutation(mul(e1, e2)) == to_permutation(e1).then(to_permutation(e2)).
    """
    n = p.n
    image = []
    for i in range(n):
        j = (i + e.rot) % n
        if e.refl:
            j = (n - j) % n
        image.append(j)
    return RailPermutation(tuple(image))


def _parity(controls: frozenset[int], bits: Sequence[int]) -> int:
    par = 0
    for v in controls:
        if v > len(bits):
            raise ValueError(f"unbound variable x{v}: assignment has {len(bits)} bits")
        par ^= bits[v - 1] & 1
    return par


def evaluate_word(word: CascadeWord, assignment: Sequence[int], p: DihedralParams | None = None):
    """Fold a cascade word left to right under one input assignment.

    MGD mode returns the resulting GroupElement of D_n.  EQB mode returns a
    pair (net rotation exponent as an exact Fraction, residual reflection
    flag); for a cascade realizing a Boolean function the flag is False and
    the exponent is the function value.
    """
    bits = tuple(int(b) & 1 for b in assignment)
    if word.mode == MGD:
        params = p if p is not None else word.params
        if params is None:
            raise ValueError("MGD evaluation needs dihedral parameters")
        rot = 0
        refl = False
        for letter in word.letters:
            if isinstance(letter, Rot):
                # right-multiplying by a^w under the product rule above
                rot += -letter.exponent if refl else letter.exponent
            elif _parity(letter.controls, bits):
                refl = not refl
        return GroupElement(rot % params.n, refl)

    den = 1
    for letter in word.letters:
        if isinstance(letter, Rot) and isinstance(letter.exponent, Fraction):
            den = den * letter.exponent.denominator // math.gcd(den, letter.exponent.denominator)
    acc = 0
    refl = False
    for letter in word.letters:
        if isinstance(letter, Rot):
            w = letter.exponent
            if isinstance(w, Fraction):
                v = w.numerator * (den // w.denominator)
            else:
                v = w * den
            acc += -v if refl else v
        elif _parity(letter.controls, bits):
            refl = not refl
    return Fraction(acc, den), refl
