"""Circuit IR (gates, measurement, reset, classical branching) and execution."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadArgument, DimMismatch
from .fock import (
    OperatorMatrix,
    QuantumState,
    Register,
    StateKind,
    apply_matrix,
    vacuum,
)
from .gates import GateSpec, build

QUBIT_BASES = ("z", "x", "y")


@dataclass(frozen=True)
class Measure:
    target: int
    basis: str = "z"          # qubits: z/x/y; modes: "n" (photon number)
    bit: int = -1             # classical bit index, assigned by Circuit.add

    def __post_init__(self):
        if self.basis not in QUBIT_BASES + ("n",):
            raise BadArgument(f"unknown measurement basis {self.basis!r}")


@dataclass(frozen=True)
class Reset:
    target: int


@dataclass(frozen=True)
class ClassicalBranch:
    bit: int
    if_one: tuple = ()
    if_zero: tuple = ()


@dataclass
class Circuit:
    """Ordered list of gate/measure/reset/branch nodes over a register."""

    register: Register
    ops: list = field(default_factory=list)
    n_bits: int = 0

    def gate(self, name: str, params=(), targets=()) -> "Circuit":
        spec = GateSpec(name, tuple(params), tuple(targets))
        spec.validate(self.register)
        self.ops.append(spec)
        return self

    def append(self, node) -> "Circuit":
        if isinstance(node, GateSpec):
            node.validate(self.register)
        self.ops.append(node)
        return self

    def measure(self, target: int, basis: str = "z") -> int:
        bit = self.n_bits
        self.ops.append(Measure(target, basis, bit))
        self.n_bits += 1
        return bit

    def reset(self, target: int) -> "Circuit":
        self.ops.append(Reset(target))
        return self

    def branch(self, bit: int, if_one=(), if_zero=()) -> "Circuit":
        if bit >= self.n_bits:
            raise BadArgument(f"branch on bit {bit} before any measure produced it")
        self.ops.append(ClassicalBranch(bit, tuple(if_one), tuple(if_zero)))
        return self

    @property
    def gate_specs(self):
        return [op for op in self.ops if isinstance(op, GateSpec)]

    def is_unitary_only(self) -> bool:
        return all(isinstance(op, GateSpec) for op in self.ops)


def circuit_unitary(circ: Circuit) -> np.ndarray:
    """Dense unitary of a measurement-free circuit (desk scale only)."""
    if not circ.is_unitary_only():
        raise BadArgument("circuit contains non-unitary nodes")
    from .fock import embed

    d = circ.register.total_dim
    u = np.eye(d, dtype=complex)
    for spec in circ.ops:
        block = build(spec, circ.register)
        u = embed(block, circ.register).matrix @ u
    return u


_BASIS_ROT = {
    "z": np.eye(2, dtype=complex),
    "x": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "y": np.array([[1, -1j], [1, 1j]], dtype=complex) / np.sqrt(2),
}


@dataclass
class RunResult:
    state: QuantumState
    bits: dict            # bit index -> outcome of the final shot
    records: list         # per-shot dict of bit -> outcome
    seed: int | None


class Simulator:
    """Statevector executor with a seeded counter-based (Philox) generator."""

    def __init__(self, seed: int | None = None):
        self.seed = seed
        self._rng = np.random.Generator(np.random.Philox(seed))

    def run(self, circ: Circuit, initial: QuantumState | None = None,
            shots: int = 1) -> RunResult:
        records = []
        final = None
        bits = {}
        for shot in range(shots):
            state = initial if initial is not None else vacuum(circ.register)
            if state.kind != StateKind.PURE:
                raise BadArgument("Simulator runs pure states; use channels for densities")
            vec = state.data.copy()
            bits = {}
            vec = self._execute(circ.register, vec, circ.ops, bits)
            records.append(dict(bits))
            final = vec
        return RunResult(QuantumState(circ.register, final), bits, records, self.seed)

    # -- internals ----------------------------------------------------------

    def _execute(self, reg: Register, vec: np.ndarray, ops, bits: dict) -> np.ndarray:
        for node in ops:
            if isinstance(node, GateSpec):
                block = build(node, reg)
                vec = apply_matrix(reg, vec, block.matrix, node.targets)
            elif isinstance(node, Measure):
                vec, outcome = self._measure(reg, vec, node)
                bits[node.bit] = outcome
            elif isinstance(node, Reset):
                vec = self._reset(reg, vec, node.target)
            elif isinstance(node, ClassicalBranch):
                branch = node.if_one if bits.get(node.bit, 0) else node.if_zero
                vec = self._execute(reg, vec, branch, bits)
            else:
                raise BadArgument(f"unknown circuit node {node!r}")
        return vec

    def _measure(self, reg: Register, vec: np.ndarray, m: Measure):
        dims = reg.dims
        t = m.target
        if m.basis in QUBIT_BASES:
            if not reg.is_qubit(t):
                raise DimMismatch("qubit basis measurement on a mode")
            rot = _BASIS_ROT[m.basis]
            vec = apply_matrix(reg, vec, rot, (t,))
        elif not reg.is_mode(t):
            raise DimMismatch("photon-number measurement on a qubit")
        psi = vec.reshape(dims)
        probs = np.moveaxis(np.abs(psi) ** 2, t, 0).reshape(dims[t], -1).sum(axis=1)
        probs = probs / probs.sum()
        outcome = int(self._rng.choice(len(probs), p=probs))
        keep = np.zeros(dims[t])
        keep[outcome] = 1.0
        psi = np.moveaxis(np.moveaxis(psi, t, 0) * keep.reshape((-1,) + (1,) * (psi.ndim - 1)), 0, t)
        vec = psi.reshape(-1)
        vec = vec / np.linalg.norm(vec)
        if m.basis in QUBIT_BASES:
            vec = apply_matrix(reg, vec, _BASIS_ROT[m.basis].conj().T, (t,))
        return vec, outcome

    def _reset(self, reg: Register, vec: np.ndarray, t: int) -> np.ndarray:
        """Trace-free reset of one subsystem to |0> (projective, renormalized).

        Implemented as measure-and-rotate-back: sample the computational
        outcome, project, then map the outcome level to |0>.
        """
        dims = reg.dims
        psi = vec.reshape(dims)
        probs = np.moveaxis(np.abs(psi) ** 2, t, 0).reshape(dims[t], -1).sum(axis=1)
        probs = probs / probs.sum()
        outcome = int(self._rng.choice(len(probs), p=probs))
        psi = np.moveaxis(psi, t, 0)
        collapsed = np.zeros_like(psi)
        collapsed[0] = psi[outcome]
        psi = np.moveaxis(collapsed, 0, t)
        vec = psi.reshape(-1)
        return vec / np.linalg.norm(vec)


def reset_channel_state(state: QuantumState, target: int) -> QuantumState:
    """Deterministic reset as a channel: rho' = sum_k |0><k| rho |k><0|.

    Returns a density state; used by QEC rounds where the reset back-action
    matters and sampling is not wanted.
    """
    reg = state.register
    dims = reg.dims
    rho = state.to_density().data
    d = reg.total_dim
    out = np.zeros((d, d), dtype=complex)
    for k in range(dims[target]):
        proj = np.zeros((dims[target], dims[target]), dtype=complex)
        proj[0, k] = 1.0
        kr = _embed_matrix(reg, proj, target)
        out += kr @ rho @ kr.conj().T
    return QuantumState(reg, out / np.trace(out).real, StateKind.DENSITY)


def _embed_matrix(reg: Register, m: np.ndarray, target: int) -> np.ndarray:
    from .fock import OperatorMatrix as _O, embed

    return embed(_O(m, (target,)), reg).matrix
