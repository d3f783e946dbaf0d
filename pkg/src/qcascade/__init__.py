"""Compile Boolean truth tables into quantum rotation-gate cascades.

The pipeline: Walsh spectrum (exact rational or modular), canonical
rotation-reflection cascade over a dihedral group, local-rewrite
simplification, optional symmetry reduction, mapping to RX/RY + CZ gates,
and dual verification (exact group evaluation plus statevector simulation).
"""

from .cascade import (VerificationReport, VerificationRow, canonical_cascade,
                      detect_symmetry, reduce_by_symmetry, simplify, verify_classical)
from .cli import (JobError, JobSpec, PipelineError, SynthesisReport, emit,
                  parse_job, run_pipeline)
from .dihedral import (IDENTITY, DihedralParams, GroupElement, RailPermutation,
                       all_elements, element, evaluate_word, format_element,
                       inv, mul, to_permutation)
from .quantum import (BlochPoint, Gate, InteractionGraph, QCircuit, apply_gate,
                      basis_state, bloch_trace, bloch_trace_csv, interaction_graph,
                      map_to_circuit, rotation_matrix, to_qasm, verify_quantum)
from .spectral import (TruthVector, WalshSpectrum, fwht, modinv, spectrum_exact,
                       spectrum_mod, walsh_matrix)
from .words import EQB, MGD, CascadeWord, Refl, Rot

__version__ = "0.1.0"

__all__ = [
    "EQB", "MGD", "IDENTITY",
    "BlochPoint", "CascadeWord", "DihedralParams", "Gate", "GroupElement",
    "InteractionGraph", "JobError", "JobSpec", "PipelineError", "QCircuit",
    "RailPermutation", "Refl", "Rot", "SynthesisReport", "TruthVector",
    "VerificationReport", "VerificationRow", "WalshSpectrum",
    "all_elements", "apply_gate", "basis_state", "bloch_trace", "bloch_trace_csv",
    "canonical_cascade", "detect_symmetry", "element", "emit", "evaluate_word",
    "format_element", "fwht", "interaction_graph", "inv", "map_to_circuit",
    "modinv", "mul", "parse_job", "reduce_by_symmetry", "rotation_matrix",
    "run_pipeline", "simplify", "spectrum_exact", "spectrum_mod",
    "to_permutation", "to_qasm", "verify_classical", "verify_quantum",
    "walsh_matrix",
]
