"""Symbolic cascade words built from rotation and reflection letters.

A word is read left to right.  ``Rot(w)`` contributes a rotation with
exponent ``w``: an exact :class:`fractions.Fraction` in EQB mode, a plain
signed integer residue in MGD mode.  ``Refl(controls)`` contributes a
reflection exactly when the XOR of the named input variables is 1.
Variables are numbered from 1, and ``x1`` is the most significant bit of
the truth-table row index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Union

if TYPE_CHECKING:
    from .dihedral import DihedralParams

EQB = "eqb"
MGD = "mgd"

Exponent = Union[Fraction, int]


@dataclass(frozen=True)
class Rot:
    """Rotation letter ``a^exponent``."""

    exponent: Exponent

    def __str__(self) -> str:
        return f"a^{self.exponent}"


@dataclass(frozen=True)
class Refl:
    """Reflection letter controlled by the XOR of a non-empty variable set."""

    controls: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", frozenset(int(v) for v in self.controls))
        if not self.controls:
            raise ValueError("reflection letter needs at least one control variable")
        if any(v < 1 for v in self.controls):
            raise ValueError("control variables are numbered from 1")

    def __str__(self) -> str:
        names = ",".join(f"x{v}" for v in sorted(self.controls))
        return f"g[{names}]"


Letter = Union[Rot, Refl]


@dataclass(frozen=True)
class CascadeWord:
    """A sequence of letters over ``n_vars`` input variables.

    ``target_var`` is None when the word drives a fresh ancilla and an input
    variable index when a symmetry reduction retargeted the word onto that
    input qubit.  ``params`` is required in MGD mode (the letters are residues
    of a finite dihedral group) and absent in EQB mode.
    """

    mode: str
    n_vars: int
    letters: tuple[Letter, ...]
    params: "DihedralParams | None" = None
    target_var: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.mode not in (EQB, MGD):
            raise ValueError(f"unknown mode {self.mode!r}, expected {EQB!r} or {MGD!r}")
        if self.n_vars < 0:
            raise ValueError("n_vars must be non-negative")
        if self.mode == MGD and self.params is None:
            raise ValueError("MGD words need dihedral parameters")
        if self.target_var is not None and not 1 <= self.target_var <= self.n_vars:
            raise ValueError(f"target variable x{self.target_var} out of range 1..{self.n_vars}")
        for letter in self.letters:
            if isinstance(letter, Rot):
                if self.mode == MGD and not isinstance(letter.exponent, int):
                    raise TypeError(f"MGD exponents must be integers, got {letter.exponent!r}")
                if self.mode == EQB and not isinstance(letter.exponent, (int, Fraction)):
                    raise TypeError(f"EQB exponents must be rational, got {letter.exponent!r}")
            elif isinstance(letter, Refl):
                bad = [v for v in letter.controls if v > self.n_vars]
                if bad:
                    raise ValueError(f"letter {letter} references x{min(bad)} beyond n_vars={self.n_vars}")
            else:
                raise TypeError(f"not a cascade letter: {letter!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(letter) for letter in self.letters)


def rotations(word: CascadeWord) -> Iterable[Rot]:
    return (letter for letter in word.letters if isinstance(letter, Rot))


def reflections(word: CascadeWord) -> Iterable[Refl]:
    return (letter for letter in word.letters if isinstance(letter, Refl))
