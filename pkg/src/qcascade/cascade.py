"""Canonical rotation-reflection cascades and local-rewrite simplification.

The canonical word interleaves one rotation per spectral coefficient with
reflection blocks on a ruler schedule: after the k-th rotation (k = 1..2^n)
it emits g^(x_(n-i)) for every i with 2^i dividing k, innermost variable
first.  That yields exactly 3*2^n - 2 letters and evaluates to a^F(x) on
every assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .dihedral import DihedralParams, GroupElement, evaluate_word, format_element
from .spectral import TruthVector, WalshSpectrum, spectrum_exact
from .words import EQB, MGD, CascadeWord, Letter, Refl, Rot


def canonical_cascade(spectrum: WalshSpectrum, params: DihedralParams | None = None) -> CascadeWord:
    """Expand a spectrum into the unsimplified canonical cascade word."""
    n = spectrum.n
    mode = MGD if spectrum.modulus is not None else EQB
    if mode == MGD and params is None:
        raise ValueError("a modular spectrum needs dihedral parameters")
    letters: list[Letter] = []
    for k in range(1, (1 << n) + 1):
        letters.append(Rot(spectrum.coeffs[k - 1]))
        for i in range(n):
            if k % (1 << i) == 0:
                letters.append(Refl(frozenset({n - i})))
    return CascadeWord(mode=mode, n_vars=n, letters=tuple(letters),
                       params=params if mode == MGD else None)


def _push(out: list[Letter], letter: Letter) -> None:
    # The stack never holds two adjacent letters of the same type, so one
    # pass reaches the rewrite fixed point.
    if isinstance(letter, Rot):
        if letter.exponent == 0:
            return
        if out and isinstance(out[-1], Rot):
            top = out.pop()
            _push(out, Rot(top.exponent + letter.exponent))
        else:
            out.append(letter)
    else:
        if out and isinstance(out[-1], Refl):
            top = out.pop()
            merged = top.controls ^ letter.controls
            if merged:
                out.append(Refl(merged))
            # an empty merge drops both letters
        else:
            out.append(letter)


def simplify(word: CascadeWord) -> CascadeWord:
    """Apply the local rewrites to a fixed point.

    Rewrites: drop a^0, merge adjacent rotations by adding exponents, merge
    adjacent reflections by XOR of control sets (dropping empty merges).
    Semantics-preserving and idempotent.
    """
    out: list[Letter] = []
    for letter in word.letters:
        _push(out, letter)
    return replace(word, letters=tuple(out))


def detect_symmetry(truth: TruthVector) -> bool:
    """True when f(..., 0) = not f(..., 1), i.e. f = x_n xor h(rest)."""
    if not truth.is_boolean:
        raise ValueError("symmetry detection expects a Boolean truth vector")
    if truth.n == 0:
        return False
    v = truth.values
    return all(v[i] != v[i + 1] for i in range(0, len(v), 2))


def reduce_by_symmetry(truth: TruthVector, params: DihedralParams | None = None) -> CascadeWord:
    """Cascade for the residual h = f(..., 0), retargeted onto input x_n.

    The returned word references only x_1..x_(n-1) and flips the last input
    qubit in place, so the circuit needs no ancilla.
    """
    if not detect_symmetry(truth):
        raise ValueError(f"function is not odd in x{truth.n}")
    residual = TruthVector(truth.n - 1, truth.values[0::2])
    word = simplify(canonical_cascade(spectrum_exact(residual)))
    return replace(word, n_vars=truth.n, target_var=truth.n)


@dataclass(frozen=True)
class VerificationRow:
    assignment: tuple[int, ...]
    expected: str
    got: str
    ok: bool


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    rows: tuple[VerificationRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.rows)

    def counts(self) -> str:
        good = sum(1 for row in self.rows if row.ok)
        return f"{good}/{len(self.rows)}"


def verify_classical(word: CascadeWord, truth: TruthVector) -> VerificationReport:
    """Check the word against the truth vector by exact group evaluation.

    MGD words must fold to a^(F(x) mod n); EQB words must fold to a net
    exponent of exactly F(x) (or h(x) with x_n xor h = F(x) when the word is
    retargeted by symmetry), with no residual reflection either way.
    """
    rows = []
    for bits in truth.assignments():
        want = truth.value_at(bits)
        if word.mode == MGD:
            got = evaluate_word(word, bits)
            expected = GroupElement(want % word.params.n, False)
            ok = got == expected
            rows.append(VerificationRow(bits, format_element(expected, word.params),
                                        format_element(got, word.params), ok))
        else:
            net, refl = evaluate_word(word, bits)
            if word.target_var is None:
                ok = not refl and net == want
                got_text = f"{net}" + (" g" if refl else "")
            else:
                valid = not refl and net in (0, 1)
                out_bit = bits[word.target_var - 1] ^ int(net) if valid else None
                ok = valid and out_bit == want
                got_text = str(out_bit) if valid else f"{net}" + (" g" if refl else "")
            rows.append(VerificationRow(bits, str(want), got_text, ok))
    return VerificationReport("classical", tuple(rows))
