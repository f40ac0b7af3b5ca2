"""Closed-form path sums for sequences of generalized conditional displacements.

A sequence of n conditional displacements expands into at most 2^n terms,
each a qubit 2x2 transfer operator paired with one net displacement and a
geometric phase from the displacement composition rule
D(b)D(a) = D(a+b) e^{(b a* - b* a)/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import TooManyTerms
from ..fock import ModeConfig, SIGMA_I, axis_sigma
from ..gates import displacement

MAX_CDS = 20


@dataclass
class PathTerm:
    qubit_op: np.ndarray      # 2x2 transfer operator (product of projectors)
    displacement: complex     # net phase-space displacement
    phase: float              # accumulated geometric phase (radians)


@dataclass
class CdPathSum:
    terms: list
    n_gates: int

    def unique_displacements(self, tol: float = 1e-9) -> list:
        seen = []
        for t in self.terms:
            if not any(abs(t.displacement - s) <= tol for s in seen):
                seen.append(t.displacement)
        return seen

    def reconstruct(self, cfg: ModeConfig) -> np.ndarray:
        """Dense (2 dim) x (2 dim) operator sum_t e^{i phase} W (x) D(delta)."""
        d = cfg.dim
        out = np.zeros((2 * d, 2 * d), dtype=complex)
        groups = {}
        for t in self.terms:
            key = (round(t.displacement.real, 12), round(t.displacement.imag, 12))
            w = np.exp(1j * t.phase) * t.qubit_op
            if key in groups:
                groups[key] = (groups[key][0] + w, t.displacement)
            else:
                groups[key] = (w, t.displacement)
        for w, delta in groups.values():
            out += np.kron(w, displacement(delta, cfg))
        return out


def compose_cd(seq) -> CdPathSum:
    """Path-sum of generalized conditional displacements.

    ``seq`` is a list of (axis, alpha) applied in order (first entry acts
    first); each gate is exp[axis.sigma (x) (alpha a† - alpha* a)].
    """
    seq = list(seq)
    if len(seq) > MAX_CDS:
        raise TooManyTerms(f"{len(seq)} conditional displacements exceed the "
                           f"2^{MAX_CDS}-term cap")
    terms = [PathTerm(SIGMA_I.copy(), 0.0 + 0.0j, 0.0)]
    for axis, alpha in seq:
        bs = axis_sigma(np.asarray(axis, dtype=float))
        new_terms = []
        for eta in (+1, -1):
            proj = 0.5 * (SIGMA_I + eta * bs)
            shift = eta * alpha
            for t in terms:
                # D(shift) D(delta) = D(delta + shift) e^{(shift delta* - shift* delta)/2}
                geo = (shift * np.conj(t.displacement)).imag
                new_terms.append(PathTerm(proj @ t.qubit_op,
                                          t.displacement + shift,
                                          t.phase + geo))
        terms = new_terms
    return CdPathSum(terms, len(seq))
