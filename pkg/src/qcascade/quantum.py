"""Quantum realization of cascade words.

Conventions: amplitude index bit q (little-endian, qubit 0 is the least
significant bit) holds qubit q.  Standard layout puts the target ancilla on
qubit 0 and input variable x_v on qubit v; a symmetry-reduced word drops the
ancilla, putting x_v on qubit v-1 with the last input as target.  Rotation
matrices use the half-angle convention, so R(theta + 4*pi) = R(theta)
exactly and angles are kept in (-2*pi, 2*pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cascade import VerificationReport, VerificationRow
from .spectral import TruthVector
from .words import EQB, MGD, CascadeWord, Refl, Rot

RX, RY, RZ = "RX", "RY", "RZ"
X, Z, H = "X", "Z", "H"
CZ, CNOT = "CZ", "CNOT"

ROTATION_KINDS = frozenset({RX, RY, RZ})
TWO_QUBIT_KINDS = frozenset({CZ, CNOT})
GATE_KINDS = ROTATION_KINDS | TWO_QUBIT_KINDS | {X, Z, H}

_FIXED_1Q = {
    X: np.array([[0, 1], [1, 0]], dtype=complex),
    Z: np.array([[1, 0], [0, -1]], dtype=complex),
    H: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
}


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    """2x2 rotation about the X, Y or Z axis by theta radians."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta}")
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    if axis == "X":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "Y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "Z":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    raise ValueError(f"unknown rotation axis {axis!r}")


@dataclass(frozen=True)
class Gate:
    """One gate application.

    Rotations carry an angle in radians; when the angle is an exact multiple
    of pi the multiplier is kept in ``pi_frac`` so emitters can print it
    exactly.  Two-qubit kinds carry a control index.
    """

    kind: str
    target: int
    control: int | None = None
    angle: float | None = None
    pi_frac: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.target < 0 or (self.control is not None and self.control < 0):
            raise ValueError("qubit indices must be non-negative")
        if self.kind in TWO_QUBIT_KINDS:
            if self.control is None:
                raise ValueError(f"{self.kind} needs a control qubit")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        elif self.control is not None:
            raise ValueError(f"{self.kind} takes no control qubit")
        if self.kind in ROTATION_KINDS:
            if self.pi_frac is not None:
                f = Fraction(self.pi_frac) % 4
                if f > 2:
                    f -= 4
                object.__setattr__(self, "pi_frac", f)
                object.__setattr__(self, "angle", float(f) * math.pi)
            elif self.angle is not None:
                if not math.isfinite(self.angle):
                    raise ValueError(f"angle must be finite, got {self.angle}")
                a = math.fmod(self.angle, 4.0 * math.pi)
                if a > 2.0 * math.pi:
                    a -= 4.0 * math.pi
                elif a <= -2.0 * math.pi:
                    a += 4.0 * math.pi
                object.__setattr__(self, "angle", a)
            else:
                raise ValueError(f"{self.kind} needs an angle")
        elif self.angle is not None or self.pi_frac is not None:
            raise ValueError(f"{self.kind} takes no angle")


@dataclass(frozen=True)
class QCircuit:
    """Gate list over ``num_qubits`` qubits, executed left to right.

    ``layout`` maps input variables to qubits as (variable, qubit) pairs.
    """

    num_qubits: int
    gates: tuple[Gate, ...]
    target_qubit: int
    layout: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "layout", tuple(self.layout))
        if self.num_qubits < 1:
            raise ValueError("need at least one qubit")
        if not 0 <= self.target_qubit < self.num_qubits:
            raise ValueError(f"target qubit {self.target_qubit} out of range")
        for g in self.gates:
            hi = g.target if g.control is None else max(g.target, g.control)
            if hi >= self.num_qubits:
                raise ValueError(f"gate {g.kind} touches qubit {hi}, circuit has {self.num_qubits}")

    @property
    def layout_map(self) -> dict[int, int]:
        return dict(self.layout)

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts


def map_to_circuit(word: CascadeWord, basis: str = "X", levels: int | None = None) -> QCircuit:
    """Translate a simplified word into gates.

    Rotations become R_basis(w * pi) in EQB mode or R_basis(w * pi / levels)
    in MGD mode; each reflection control contributes one CZ against the
    target.  Words containing a^0 are rejected: simplify first.
    """
    if basis not in ("X", "Y"):
        raise ValueError(f"basis must be 'X' or 'Y', got {basis!r}")
    if word.mode == MGD:
        if levels is None or levels < 1:
            raise ValueError("MGD words need a positive level count for the angle scale")
    elif levels is not None:
        raise ValueError("levels only apply to MGD words")
    rot_kind = RX if basis == "X" else RY
    n = word.n_vars
    if word.target_var is None:
        target = 0
        qubit_of = {v: v for v in range(1, n + 1)}
        num_qubits = n + 1
    else:
        target = word.target_var - 1
        qubit_of = {v: v - 1 for v in range(1, n + 1)}
        num_qubits = max(n, 1)
    gates: list[Gate] = []
    for letter in word.letters:
        if isinstance(letter, Rot):
            if letter.exponent == 0:
                raise ValueError("word is not simplified: zero rotation present")
            frac = Fraction(letter.exponent)
            if word.mode == MGD:
                frac /= levels
            gates.append(Gate(rot_kind, target, pi_frac=frac))
        else:
            for v in sorted(letter.controls):
                gates.append(Gate(CZ, target=target, control=qubit_of[v]))
    return QCircuit(num_qubits, tuple(gates), target,
                    layout=tuple(sorted(qubit_of.items())))


# index caches keyed by (num_qubits, qubits...); a session touches only a
# handful of shapes so these never grow large
_BIT_INDICES: dict[tuple[int, int], np.ndarray] = {}
_PAIR_INDICES: dict[tuple[int, int, int], np.ndarray] = {}
_ROT_MATRICES: dict[tuple[str, float], np.ndarray] = {}


def _bit_indices(num_qubits: int, q: int) -> np.ndarray:
    key = (num_qubits, q)
    if key not in _BIT_INDICES:
        idx = np.arange(1 << num_qubits)
        _BIT_INDICES[key] = np.nonzero((idx >> q) & 1)[0]
    return _BIT_INDICES[key]


def _pair_indices(num_qubits: int, a: int, b: int) -> np.ndarray:
    a, b = min(a, b), max(a, b)
    key = (num_qubits, a, b)
    if key not in _PAIR_INDICES:
        idx = np.arange(1 << num_qubits)
        _PAIR_INDICES[key] = np.nonzero(((idx >> a) & 1) & ((idx >> b) & 1))[0]
    return _PAIR_INDICES[key]


def _rotation_for(gate: Gate) -> np.ndarray:
    key = (gate.kind, gate.angle)
    if key not in _ROT_MATRICES:
        _ROT_MATRICES[key] = rotation_matrix(gate.kind[-1], gate.angle)
    return _ROT_MATRICES[key]


def _mix_single(buf: np.ndarray, mat: np.ndarray, q: int, num_qubits: int) -> None:
    psi = buf.reshape(1 << (num_qubits - q - 1), 2, 1 << q)
    a = psi[:, 0, :].copy()
    b = psi[:, 1, :]
    psi[:, 0, :] = mat[0, 0] * a + mat[0, 1] * b
    psi[:, 1, :] = mat[1, 0] * a + mat[1, 1] * b


def _apply_inplace(buf: np.ndarray, gate: Gate, num_qubits: int) -> None:
    if gate.kind in ROTATION_KINDS:
        _mix_single(buf, _rotation_for(gate), gate.target, num_qubits)
    elif gate.kind in _FIXED_1Q:
        _mix_single(buf, _FIXED_1Q[gate.kind], gate.target, num_qubits)
    elif gate.kind == CZ:
        buf[_pair_indices(num_qubits, gate.control, gate.target)] *= -1
    elif gate.kind == CNOT:
        sel = _bit_indices(num_qubits, gate.control)
        # fancy-index RHS gathers before the scatter, so this swaps in place
        buf[sel] = buf[sel ^ (1 << gate.target)]
    else:  # pragma: no cover
        raise ValueError(f"unknown gate kind {gate.kind!r}")


def _num_qubits_of(state: np.ndarray) -> int:
    size = state.shape[0]
    n = size.bit_length() - 1
    if state.ndim != 1 or size != 1 << n:
        raise ValueError(f"state length must be a power of two, got shape {state.shape}")
    return n


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Pure gate application: returns a new statevector."""
    num_qubits = _num_qubits_of(state)
    hi = gate.target if gate.control is None else max(gate.target, gate.control)
    if hi >= num_qubits:
        raise ValueError(f"gate touches qubit {hi}, state has {num_qubits} qubits")
    out = np.array(state, dtype=complex)
    _apply_inplace(out, gate, num_qubits)
    return out


def basis_state(num_qubits: int, index: int) -> np.ndarray:
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
    state = np.zeros(1 << num_qubits, dtype=complex)
    state[index] = 1.0
    return state


def _input_index(circuit: QCircuit, bits) -> int:
    index = 0
    for v, q in circuit.layout:
        index |= (int(bits[v - 1]) & 1) << q
    return index


def verify_quantum(circuit: QCircuit, truth: TruthVector, tol: float = 1e-9) -> VerificationReport:
    """Statevector check: run every basis assignment through the circuit and
    require the target qubit to read F(x) with probability >= 1 - tol."""
    if not truth.is_boolean:
        raise ValueError("quantum verification expects a Boolean truth vector")
    num_qubits = circuit.num_qubits
    target = circuit.target_qubit
    ones = _bit_indices(num_qubits, target)
    state = np.empty(1 << num_qubits, dtype=complex)
    rows = []
    for bits in truth.assignments():
        state[:] = 0.0
        state[_input_index(circuit, bits)] = 1.0
        for gate in circuit.gates:
            _apply_inplace(state, gate, num_qubits)
        p_one = float(np.sum(np.abs(state[ones]) ** 2))
        want = truth.value_at(bits)
        p_want = p_one if want else 1.0 - p_one
        rows.append(VerificationRow(bits, str(want), f"p={p_want:.12g}", p_want >= 1.0 - tol))
    return VerificationReport("quantum", tuple(rows))


@dataclass(frozen=True)
class BlochPoint:
    """Polar angle theta in [0, pi], azimuth phi in [0, 2*pi), phi = 0 at poles."""

    theta: float
    phi: float


def _target_point(state: np.ndarray, num_qubits: int, target: int) -> BlochPoint:
    psi = state.reshape(1 << (num_qubits - target - 1), 2, 1 << target)
    rho = np.einsum("iaj,ibj->ab", psi, psi.conj())
    purity = float(np.trace(rho @ rho).real)
    if abs(purity - 1.0) > 1e-9:
        raise ValueError(f"target qubit is entangled (purity {purity:.6f}), Bloch point undefined")
    z = min(1.0, max(-1.0, float(rho[0, 0].real - rho[1, 1].real)))
    x = 2.0 * float(rho[0, 1].real)
    y = -2.0 * float(rho[0, 1].imag)
    theta = math.acos(z)
    phi = math.atan2(y, x) % (2.0 * math.pi) if math.hypot(x, y) >= 1e-9 else 0.0
    return BlochPoint(theta, phi)


def _traced(circuit: QCircuit, assignment) -> list[tuple[str, BlochPoint]]:
    num_qubits = circuit.num_qubits
    target = circuit.target_qubit
    state = basis_state(num_qubits, _input_index(circuit, assignment))
    points = [("init", _target_point(state, num_qubits, target))]
    for gate in circuit.gates:
        _apply_inplace(state, gate, num_qubits)
        if gate.target == target or gate.control == target:
            points.append((gate.kind, _target_point(state, num_qubits, target)))
    return points


def bloch_trace(circuit: QCircuit, assignment) -> list[BlochPoint]:
    """Target-qubit Bloch coordinates: the initial state, then one point per
    gate that touches the target."""
    return [point for _, point in _traced(circuit, assignment)]


def bloch_trace_csv(circuit: QCircuit, assignment) -> str:
    lines = ["step,gate,theta,phi"]
    for step, (label, point) in enumerate(_traced(circuit, assignment)):
        lines.append(f"{step},{label},{point.theta:.12g},{point.phi:.12g}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class InteractionGraph:
    """Undirected two-qubit coupling graph of a circuit."""

    edges: tuple[tuple[int, int], ...]
    is_star: bool
    triangle_free: bool
    centers: tuple[int, ...]


def interaction_graph(circuit: QCircuit) -> InteractionGraph:
    """Distinct (control, target) pairs plus star/triangle verdicts.

    An empty edge set is trivially a star and triangle-free.
    """
    edges = sorted({(min(g.control, g.target), max(g.control, g.target))
                    for g in circuit.gates if g.kind in TWO_QUBIT_KINDS})
    adjacency: dict[int, set[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    triangle_free = all(not (adjacency[u] & adjacency[v]) for u, v in edges)
    if edges:
        common = set(edges[0])
        for u, v in edges[1:]:
            common &= {u, v}
        centers = tuple(sorted(common))
        is_star = bool(centers)
    else:
        centers = ()
        is_star = True
    return InteractionGraph(tuple(edges), is_star, triangle_free, centers)


def _angle_text(gate: Gate) -> str:
    if gate.pi_frac is not None:
        num, den = gate.pi_frac.numerator, gate.pi_frac.denominator
        if num == 0:
            return "0"
        sign = "-" if num < 0 else ""
        head = "pi" if abs(num) == 1 else f"{abs(num)}*pi"
        tail = f"/{den}" if den != 1 else ""
        return f"{sign}{head}{tail}"
    return f"{gate.angle:.15g}"


_QASM_NAMES = {RX: "rx", RY: "ry", RZ: "rz", X: "x", Z: "z", H: "h", CZ: "cz", CNOT: "cx"}


def to_qasm(circuit: QCircuit) -> str:
    """OPENQASM-2-style text, one gate per line, executed top to bottom."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    layout = "; ".join(f"x{v} -> q[{q}]" for v, q in circuit.layout)
    lines.append(f"// target: q[{circuit.target_qubit}]" + (f"; {layout}" if layout else ""))
    for g in circuit.gates:
        name = _QASM_NAMES[g.kind]
        if g.kind in ROTATION_KINDS:
            lines.append(f"{name}({_angle_text(g)}) q[{g.target}];")
        elif g.kind in TWO_QUBIT_KINDS:
            lines.append(f"{name} q[{g.control}],q[{g.target}];")
        else:
            lines.append(f"{name} q[{g.target}];")
    return "\n".join(lines) + "\n"
